//! The identity catalog: every checked identity with its suite, the
//! polynomial it is multiplied through by, and the formula it encodes.

use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub suite: &'static str,
    pub clearing: &'static str,
    pub anchor: &'static str,
}

const fn entry(
    id: &'static str,
    suite: &'static str,
    clearing: &'static str,
    anchor: &'static str,
) -> CatalogEntry {
    CatalogEntry {
        id,
        suite,
        clearing,
        anchor,
    }
}

pub const SUITES: [&str; 7] = [
    "rmatrix",
    "rtt",
    "unitarity",
    "gauss",
    "section3",
    "drinfeld",
    "roundtrip",
];

const RTT_CLEAR: &str = "(u-v)(u-v-1/2)";
const GAUSS_FORM: &str = r"T(u)=F(u)\,\mathrm{diag}(k_{-1}(u),k_{0}(u),k_1(u))\,E(u)";

pub const CATALOG: &[CatalogEntry] = &[
    entry(
        "p_squared",
        "rmatrix",
        "1",
        r"P=\sum_{i,j=-n}^ne_{ij}\otimes e_{ji}",
    ),
    entry(
        "q_squared",
        "rmatrix",
        "1",
        r"Q=P^{t}=\sum_{i,j=-n}^{n}e_{ij}\otimes e_{-i,-j}",
    ),
    entry(
        "pq",
        "rmatrix",
        "1",
        r"Q=P^{t}=\sum_{i,j=-n}^{n}e_{ij}\otimes e_{-i,-j}",
    ),
    entry(
        "qp",
        "rmatrix",
        "1",
        r"Q=P^{t}=\sum_{i,j=-n}^{n}e_{ij}\otimes e_{-i,-j}",
    ),
    entry("q_partial_transpose", "rmatrix", "1", r"Q=P^{t}"),
    entry(
        "ybe",
        "rmatrix",
        "u(u-k)v(v-k)(u-v)(u-v-k), k=N/2-1",
        r"R_{12}(u-v)R_{13}(u)R_{23}(v)=R_{23}(v)R_{13}(u)R_{12}(u-v)",
    ),
    entry(
        "rtt",
        "rtt",
        RTT_CLEAR,
        r"R(u-v)T_1(u)T_2(v)=T_2(v)T_1(u)R(u-v)",
    ),
    entry(
        "rtt_entrywise",
        "rtt",
        RTT_CLEAR,
        r"[t_{ij}(u),t_{kl}(v)]=\frac{1}{u-v}(t_{kj}(u)t_{il}(v)-t_{kj}(v)t_{il}(u))",
    ),
    entry(
        "rtt_inverse",
        "rtt",
        RTT_CLEAR,
        r"T^{-1}_2(v)R(u-v)T_1(u)=T_1(u)R(u-v)T^{-1}_2(v)",
    ),
    entry(
        "rtt_inverse_entrywise",
        "rtt",
        RTT_CLEAR,
        r"[t_{pq}(u),t'_{rs}(v)]=\frac{1}{u-v-\frac{1}{2}}(t'_{r,-p}(v)t_{-s,q}(u)-t_{p,-r}(u)t'_{-q,s}(v))",
    ),
    entry(
        "unitarity",
        "unitarity",
        "1",
        r"T(u)T^t(u+\kappa)=T^t(u+\kappa)T(u)=1",
    ),
    entry(
        "inverse_is_shifted_transpose",
        "unitarity",
        "1",
        r"T^{t}(u+\frac{1}{2})=T^{-1}(u)",
    ),
    entry("gauss_reconstruction", "gauss", "1", GAUSS_FORM),
    entry("gauss_uniqueness", "gauss", "1", GAUSS_FORM),
    entry(
        "gauss_leading_terms",
        "gauss",
        "1",
        r"k_{i}(u)=1+\sum^{\infty}_{r=1}k^{(r)}_{i}u^{-r}",
    ),
    entry(
        "k1_inverse_shift",
        "section3",
        "1",
        r"k_{1}^{-1}(u)=k_{-1}(u+\frac{1}{2})",
    ),
    entry(
        "e01_k1_unitarity",
        "section3",
        "1",
        r"-e_{01}(u)k_{1}^{-1}(u)=k_{-1}(u+\frac{1}{2})e_{-1,0}(u+\frac{1}{2})",
    ),
    entry(
        "f10_k1_unitarity",
        "section3",
        "1",
        r"-k_{1}^{-1}(u)f_{10}(u)=f_{0,-1}(u+\frac{1}{2})k_{-1}(u+\frac{1}{2})",
    ),
    entry(
        "k0_unitarity",
        "section3",
        "1",
        r"k_{0}^{-1}(u)+e_{01}(u)k_{1}^{-1}(u)f_{10}(u)=k_{0}(u+\frac{1}{2})+f_{0,-1}(u+\frac{1}{2})k_{-1}(u+\frac{1}{2})e_{-1,0}(u+\frac{1}{2})",
    ),
    entry(
        "kk_commute",
        "section3",
        "(u-v)",
        r"[k_{-1}(u),k_{-1}(v)]=0",
    ),
    entry("k_k0_commute", "section3", "(u-v)", r"[k_{-1}(u),k_0(v)]=0"),
    entry(
        "k_e_exchange",
        "section3",
        "(u-v)",
        r"[k_{-1}(u),e_{-1,0}(v)]=\frac{k_{-1}(u)(e_{-1,0}(v)-e_{-1,0}(u))}{u-v}",
    ),
    entry(
        "k_f_exchange",
        "section3",
        "(u-v)",
        r"[k_{-1}(u),f_{0,-1}(v)]=\frac{(f_{0,-1}(u)-f_{0,-1}(v))k_{-1}(u)}{u-v}",
    ),
    entry(
        "e_f_commutator",
        "section3",
        "(u-v)",
        r"[e_{-1,0}(u),f_{0,-1}(v)]=\frac{k_{-1}^{-1}(u)k_{0}(u)-k_{-1}^{-1}(v)k_{0}(v)}{u-v}",
    ),
    entry(
        "e01_shift",
        "section3",
        "1",
        r"e_{01}(u)=-e_{-1,0}(u-\frac{1}{2})",
    ),
    entry(
        "f10_shift",
        "section3",
        "1",
        r"f_{10}(u)=-f_{0,-1}(u-\frac{1}{2})",
    ),
    entry(
        "k0_factor",
        "section3",
        "1",
        r"k_0(u)=k_{-1}(u)k^{-1}_{-1}(u+\frac{1}{2})",
    ),
    entry(
        "h_e_anticommutator",
        "section3",
        "2(u-v)",
        r"[k^{-1}_{-1}(u)k_{0}(u),e_{-1,0}(v)]=\frac{1}{2}\frac{1}{u-v}\{k^{-1}_{-1}(u)k_{0}(u),e_{-1,0}(u)-e_{-1,0}(v)\}",
    ),
    entry(
        "h_f_anticommutator",
        "section3",
        "2(u-v)",
        r"[k^{-1}_{-1}(u)k_{0}(u),f_{0,-1}(v)]=-\frac{1}{2}\frac{1}{u-v}\{k^{-1}_{-1}(u)k_{0}(u),f_{0,-1}(u)-f_{0,-1}(v)\}",
    ),
    entry(
        "e_e_square",
        "section3",
        "2(u-v)",
        r"[e_{-1,0}(u),e_{-1,0}(v)]=\frac{1}{2}\frac{(e_{-1,0}(u)-e_{-1,0}(v))^2}{u-v}",
    ),
    entry(
        "f_f_square",
        "section3",
        "2(u-v)",
        r"[f_{0,-1}(u),f_{0,-1}(v)]=-\frac{1}{2}\frac{(f_{0,-1}(u)-f_{0,-1}(v))^2}{u-v}",
    ),
    entry(
        "e11_shift_relation",
        "section3",
        "1",
        r"3e_{-1,1}(u+\frac{1}{2})-e_{-1,1}(u)+3e_{-1,0}(u+\frac{1}{2})e_{-1,0}(u)-2e^{2}_{-1,0}(u)=0",
    ),
    entry(
        "e11_via_mode",
        "section3",
        "1",
        r"e_{-1,1}(u)=[e^{(1)}_{-1,0},e_{-1,0}(u)]-e^{2}_{-1,0}(u)",
    ),
    entry(
        "mode_e_commutator",
        "section3",
        "1",
        r"[e^{(1)}_{-1,0},e_{-1,0}(u)]=e^{2}_{-1,0}(u)-e_{-1,0}(u+\frac{1}{2})e_{-1,0}(u)-e_{-1,1}(u+\frac{1}{2})",
    ),
    entry(
        "e11_square",
        "section3",
        "1",
        r"e_{-1,1}(u)=-\frac{1}{2}e^{2}_{-1,0}(u)",
    ),
    entry(
        "f1m1_square",
        "section3",
        "1",
        r"f_{1,-1}(u)=-\frac{1}{2}f^{2}_{1,0}(u)",
    ),
    entry("current_hh", "drinfeld", "(u-v)", r"[H(u),H(v)]=0"),
    entry(
        "current_xpxm",
        "drinfeld",
        "(u-v)",
        r"[X^{+}(u),X^{-}(v)]=-\frac{H(u)-H(v)}{u-v}",
    ),
    entry(
        "current_hxp",
        "drinfeld",
        "2(u-v)",
        r"[H(u),X^{+}(v)]=-\frac{1}{2}\frac{\{H(u),(X^{+}(u)-X^{+}(v))\}}{u-v}",
    ),
    entry(
        "current_hxm",
        "drinfeld",
        "2(u-v)",
        r"[H(u),X^{-}(v)]=\frac{1}{2}\frac{\{H(u),(X^{-}(u)-X^{-}(v))\}}{u-v}",
    ),
    entry(
        "current_xpxp",
        "drinfeld",
        "2(u-v)",
        r"[X^{+}(u),X^{+}(v)]=-\frac{1}{2}\frac{(X^{+}(u)-X^{+}(v))^2}{u-v}",
    ),
    entry(
        "current_xmxm",
        "drinfeld",
        "2(u-v)",
        r"[X^{-}(u),X^{-}(v)]=\frac{1}{2}\frac{(X^{-}(u)-X^{-}(v))^2}{u-v}",
    ),
    entry("mode_hh", "drinfeld", "1", r"[h_k,h_l]=0"),
    entry("mode_xpxm", "drinfeld", "1", r"[x^+_k,x^-_l]=h_{k+l}"),
    entry(
        "mode_h0x",
        "drinfeld",
        "1",
        r"[h_0,x^{\pm}_l]=\pm x^{\pm}_{l}",
    ),
    entry(
        "mode_hx",
        "drinfeld",
        "1",
        r"[h_{k+1},x^{\pm}_l]-[h_k,x^{\pm}_{l+1}]=\pm \frac{1}{2}\{h_k,x^{\pm}_{l}\}",
    ),
    entry(
        "mode_xx",
        "drinfeld",
        "1",
        r"[x^{\pm}_{k+1},x^{\pm}_l]-[x^{\pm}_k,x^{\pm}_{l+1}]=\pm \frac{1}{2}\{x^{\pm}_k,x^{\pm}_{l}\}",
    ),
    entry(
        "phi_h_shift",
        "drinfeld",
        "1",
        r"H(u)\mapsto k_{-1}^{-1}(u)k_{0}(u)",
    ),
    entry(
        "inverse_map",
        "drinfeld",
        "1",
        r"k_{-1}(u)\mapsto H^{-1}(u-\frac{1}{2})",
    ),
    entry(
        "surjectivity",
        "roundtrip",
        "1",
        r"X^{-}(u)\mapsto e_{-1,0}(u), X^{+}(u)\mapsto f_{0,-1}(u), H(u)\mapsto k_{-1}^{-1}(u)k_{0}(u)",
    ),
];

pub fn lookup(id: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.id == id)
}

pub fn suite_entries(suite: &str) -> impl Iterator<Item = &'static CatalogEntry> + '_ {
    CATALOG.iter().filter(move |e| e.suite == suite)
}

/// One line per identity: `id  suite  clearing  anchor`.
pub fn emit_catalog() -> String {
    let w_id = CATALOG.iter().map(|e| e.id.len()).max().unwrap_or(0);
    let w_suite = CATALOG.iter().map(|e| e.suite.len()).max().unwrap_or(0);
    let w_clear = CATALOG.iter().map(|e| e.clearing.len()).max().unwrap_or(0);
    let mut out = String::new();
    for e in CATALOG {
        writeln!(
            out,
            "{:w_id$}  {:w_suite$}  {:w_clear$}  {}",
            e.id, e.suite, e.clearing, e.anchor
        )
        .expect("writing to a String");
    }
    out
}
