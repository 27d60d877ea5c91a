//! Gauss decomposition `T(u) = F(u) K(u) E(u)` of a 3×3 operator series
//! matrix and the relations among its entries.
//!
//! `F` is lower unitriangular with entries `f_{0,-1}, f_{1,-1}, f_{10}`, `K`
//! is `diag(k_{-1}, k_0, k_1)` and `E` is upper unitriangular with entries
//! `e_{-1,0}, e_{-1,1}, e_{01}`. Elimination runs top-left first, so `k_{-1}`
//! is `t_{-1,-1}` itself.

use crate::exact::{OpMatrix, Rational, TruncSeries};
use crate::identity::{
    commutator, linear, multiply, over_side, scale_side, Factor, Identity, Instance, Series,
    SeriesEnv, Side, Term,
};
use crate::rep::{RepT, LABELS};
use crate::report::{Failure, Verdict};
use crate::{Error, Result};

/// Names of the nine Gauss series; also the environment keys and the
/// mutation target names.
pub const K_M1: &str = "kMinus1";
pub const K_0: &str = "k0";
pub const K_1: &str = "k1";
pub const E_M10: &str = "eM10";
pub const E_01: &str = "e01";
pub const E_M11: &str = "eM11";
pub const F_0M1: &str = "f0M1";
pub const F_10: &str = "f10";
pub const F_1M1: &str = "f1M1";
/// The constant `e^{(1)}_{-1,0}`, the `u^{-1}` coefficient of `e_{-1,0}`.
pub const E_MODE1: &str = "eM10_1";

pub const GAUSS_NAMES: [&str; 9] = [K_M1, K_0, K_1, E_M10, E_01, E_M11, F_0M1, F_10, F_1M1];

#[derive(Clone, Debug, PartialEq)]
pub struct GaussData {
    pub k_minus1: Series,
    pub k0: Series,
    pub k1: Series,
    pub e_m10: Series,
    pub e01: Series,
    pub e_m11: Series,
    pub f0_m1: Series,
    pub f10: Series,
    pub f1_m1: Series,
}

impl GaussData {
    pub fn get(&self, name: &str) -> Option<&Series> {
        Some(match name {
            K_M1 => &self.k_minus1,
            K_0 => &self.k0,
            K_1 => &self.k1,
            E_M10 => &self.e_m10,
            E_01 => &self.e01,
            E_M11 => &self.e_m11,
            F_0M1 => &self.f0_m1,
            F_10 => &self.f10,
            F_1M1 => &self.f1_m1,
            _ => return None,
        })
    }

    fn get_mut(&mut self, name: &str) -> Option<&mut Series> {
        Some(match name {
            K_M1 => &mut self.k_minus1,
            K_0 => &mut self.k0,
            K_1 => &mut self.k1,
            E_M10 => &mut self.e_m10,
            E_01 => &mut self.e01,
            E_M11 => &mut self.e_m11,
            F_0M1 => &mut self.f0_m1,
            F_10 => &mut self.f10,
            F_1M1 => &mut self.f1_m1,
            _ => return None,
        })
    }

    pub fn dim(&self) -> usize {
        self.k_minus1.dim()
    }

    pub fn order(&self) -> i64 {
        GAUSS_NAMES
            .iter()
            .map(|n| self.get(n).expect("known name").valid_order())
            .min()
            .expect("nine series")
    }

    /// Add `delta` to entry `(0,0)` of the `u^{-r}` coefficient of `name`.
    pub fn perturbed(&self, name: &str, r: i64, delta: &Rational) -> Result<Self> {
        let mut out = self.clone();
        let s = out
            .get_mut(name)
            .ok_or_else(|| Error::UnknownSeries(name.to_string()))?;
        let mut c = s
            .coeff(r)
            .ok_or(crate::exact::ExactError::ExponentOutOfRange {
                exponent: r,
                lo: s.lo(),
                hi: s.valid_order(),
            })?;
        *c.entry_mut(0, 0) += delta;
        *s = s.with_coeff(r, c)?;
        Ok(out)
    }

    /// Register the nine series and `e^{(1)}_{-1,0}` in an environment.
    pub fn insert_into(&self, env: &mut SeriesEnv) {
        for name in GAUSS_NAMES {
            env.insert(name, self.get(name).expect("known name").clone());
        }
        let mode = self
            .e_m10
            .coeff(1)
            .unwrap_or_else(|| OpMatrix::zeros(self.dim()));
        env.insert(
            E_MODE1,
            TruncSeries::constant(mode, self.e_m10.valid_order()),
        );
    }

    pub fn env(&self) -> SeriesEnv {
        let mut env = SeriesEnv::new(self.dim(), self.order());
        self.insert_into(&mut env);
        env
    }
}

fn inv(s: &Series) -> Result<Series> {
    s.invert().map_err(|_| Error::NonInvertibleBlock)
}

/// Block elimination in the fixed order `k_{-1}`, `e_{-1,0}`, `e_{-1,1}`,
/// `f_{0,-1}`, `f_{1,-1}`, `k_0`, `e_{01}`, `f_{10}`, `k_1`.
pub fn gauss_decompose(t: &RepT) -> Result<GaussData> {
    let k_minus1 = t.entry(-1, -1).clone();
    let k_minus1_inv = inv(&k_minus1)?;
    let e_m10 = k_minus1_inv.try_mul(t.entry(-1, 0))?;
    let e_m11 = k_minus1_inv.try_mul(t.entry(-1, 1))?;
    let f0_m1 = t.entry(0, -1).try_mul(&k_minus1_inv)?;
    let f1_m1 = t.entry(1, -1).try_mul(&k_minus1_inv)?;
    let k0 = t
        .entry(0, 0)
        .try_sub(&f0_m1.try_mul(&k_minus1)?.try_mul(&e_m10)?)?;
    let k0_inv = inv(&k0)?;
    let e01 = k0_inv.try_mul(
        &t.entry(0, 1)
            .try_sub(&f0_m1.try_mul(&k_minus1)?.try_mul(&e_m11)?)?,
    )?;
    let f10 = t
        .entry(1, 0)
        .try_sub(&f1_m1.try_mul(&k_minus1)?.try_mul(&e_m10)?)?
        .try_mul(&k0_inv)?;
    let k1 = t
        .entry(1, 1)
        .try_sub(&f1_m1.try_mul(&k_minus1)?.try_mul(&e_m11)?)?
        .try_sub(&f10.try_mul(&k0)?.try_mul(&e01)?)?;
    Ok(GaussData {
        k_minus1,
        k0,
        k1,
        e_m10,
        e01,
        e_m11,
        f0_m1,
        f10,
        f1_m1,
    })
}

/// `F·K·E` as a 3×3 matrix of series.
pub fn gauss_reconstruct(g: &GaussData) -> Result<RepT> {
    let (d, order) = (g.dim(), g.order());
    let one = Series::one(d, order);
    let zero = Series::zero(d, order);
    let f = |i: i64, k: i64| -> &Series {
        match (i, k) {
            _ if i == k => &one,
            (0, -1) => &g.f0_m1,
            (1, -1) => &g.f1_m1,
            (1, 0) => &g.f10,
            _ => &zero,
        }
    };
    let e = |k: i64, j: i64| -> &Series {
        match (k, j) {
            _ if k == j => &one,
            (-1, 0) => &g.e_m10,
            (-1, 1) => &g.e_m11,
            (0, 1) => &g.e01,
            _ => &zero,
        }
    };
    let kd = [&g.k_minus1, &g.k0, &g.k1];
    let mut out = RepT::identity(d, order);
    for i in LABELS {
        for j in LABELS {
            let mut acc = Series::zero(d, order);
            for k in LABELS {
                if k > i || k > j {
                    continue;
                }
                let term = f(i, k).try_mul(kd[(k + 1) as usize])?.try_mul(e(k, j))?;
                acc = acc.try_add(&term)?;
            }
            out.set_entry(i, j, acc);
        }
    }
    Ok(out)
}

/// Coefficientwise comparison of two 3×3 series matrices.
pub fn compare_reps(lhs: &RepT, rhs: &RepT) -> Verdict {
    let mut checked = 0;
    for i in LABELS {
        for j in LABELS {
            let (a, b) = (lhs.entry(i, j), rhs.entry(i, j));
            match a.first_entry_difference(b) {
                None => checked += (a.valid_order().min(b.valid_order()) + 1).max(0) as usize,
                Some((r, x, y)) => {
                    let (ca, cb) = (a.coeff(r).expect("valid"), b.coeff(r).expect("valid"));
                    return Verdict::fail(
                        Failure::new("")
                            .with_instance(format!("({i},{j})"))
                            .at(r, None)
                            .entry(x, y, ca.get(x, y).clone(), cb.get(x, y).clone()),
                    );
                }
            }
        }
    }
    Verdict::pass(checked)
}

/// Reassembling `F·K·E` reproduces `T`.
pub fn check_reconstruction(t: &RepT, g: &GaussData) -> Verdict {
    match gauss_reconstruct(g) {
        Ok(back) => compare_reps(&back, t),
        Err(e) => Verdict::fail(Failure::new(format!("evaluation error: {e}"))),
    }
}

/// Decomposing the reassembled matrix returns the same nine series.
pub fn check_uniqueness(g: &GaussData) -> Verdict {
    let again = match gauss_reconstruct(g).and_then(|t| gauss_decompose(&t)) {
        Ok(a) => a,
        Err(e) => return Verdict::fail(Failure::new(format!("evaluation error: {e}"))),
    };
    let mut checked = 0;
    for name in GAUSS_NAMES {
        let (a, b) = (again.get(name).expect("known"), g.get(name).expect("known"));
        match a.first_entry_difference(b) {
            None => checked += (a.valid_order() + 1) as usize,
            Some((r, x, y)) => {
                let (ca, cb) = (a.coeff(r).expect("valid"), b.coeff(r).expect("valid"));
                return Verdict::fail(Failure::new("").with_instance(name).at(r, None).entry(
                    x,
                    y,
                    ca.get(x, y).clone(),
                    cb.get(x, y).clone(),
                ));
            }
        }
    }
    Verdict::pass(checked)
}

/// `k_i = 1 + O(u^{-1})`, `e, f = O(u^{-1})`.
pub fn check_leading_terms(g: &GaussData) -> Verdict {
    for name in GAUSS_NAMES {
        let c = g.get(name).expect("known").coeff(0).expect("order >= 0");
        let want = if name.starts_with('k') {
            OpMatrix::identity(g.dim())
        } else {
            OpMatrix::zeros(g.dim())
        };
        if let Some((x, y)) = c.first_difference(&want) {
            return Verdict::fail(Failure::new("").with_instance(name).at(0, None).entry(
                x,
                y,
                c.get(x, y).clone(),
                want.get(x, y).clone(),
            ));
        }
    }
    Verdict::pass(GAUSS_NAMES.len())
}

fn half() -> Rational {
    Rational::half()
}

fn one() -> Rational {
    Rational::one()
}

fn minus_one() -> Rational {
    -Rational::one()
}

fn u(name: &str) -> Factor {
    Factor::u(name)
}

fn v(name: &str) -> Factor {
    Factor::v(name)
}

fn uh(name: &str, c: Rational) -> Factor {
    Factor::u(name).shifted(c)
}

fn single(label: &str, lhs: Side, rhs: Side) -> Vec<Instance> {
    vec![Instance::new(label, lhs, rhs)]
}

fn prod(fs: &[Factor]) -> Side {
    vec![Term::product(fs.to_vec())]
}

/// `a(u) - a(v)`.
fn difference(name: &str) -> Side {
    linear(&[(one(), u(name)), (minus_one(), v(name))])
}

/// `H(u) = k_{-1}^{-1}(u) k_0(u)` in the variable `var`.
fn h_factors(var: crate::identity::Var) -> Vec<Factor> {
    vec![Factor::u(K_M1).inv().at(var), Factor::u(K_0).at(var)]
}

pub fn k1_inverse_shift() -> Identity {
    Identity::plain(single("", prod(&[u(K_1).inv()]), prod(&[uh(K_M1, half())])))
}

pub fn e01_k1_unitarity() -> Identity {
    Identity::plain(single(
        "",
        vec![Term::new(minus_one(), vec![u(E_01), u(K_1).inv()])],
        prod(&[uh(K_M1, half()), uh(E_M10, half())]),
    ))
}

pub fn f10_k1_unitarity() -> Identity {
    Identity::plain(single(
        "",
        vec![Term::new(minus_one(), vec![u(K_1).inv(), u(F_10)])],
        prod(&[uh(F_0M1, half()), uh(K_M1, half())]),
    ))
}

pub fn k0_unitarity() -> Identity {
    Identity::plain(single(
        "",
        vec![
            Term::product(vec![u(K_0).inv()]),
            Term::product(vec![u(E_01), u(K_1).inv(), u(F_10)]),
        ],
        vec![
            Term::product(vec![uh(K_0, half())]),
            Term::product(vec![uh(F_0M1, half()), uh(K_M1, half()), uh(E_M10, half())]),
        ],
    ))
}

fn times_u_minus_v(instances: Vec<Instance>) -> Identity {
    Identity::cleared(one(), vec![Rational::zero()], instances)
}

fn times_two_u_minus_v(instances: Vec<Instance>) -> Identity {
    Identity::cleared(Rational::from_int(2), vec![Rational::zero()], instances)
}

pub fn kk_commute() -> Identity {
    times_u_minus_v(single("", commutator(&[u(K_M1)], &[v(K_M1)]), Vec::new()))
}

pub fn k_k0_commute() -> Identity {
    times_u_minus_v(single("", commutator(&[u(K_M1)], &[v(K_0)]), Vec::new()))
}

/// `[k_{-1}(u), e_{-1,0}(v)] = k_{-1}(u)(e_{-1,0}(v) - e_{-1,0}(u))/(u-v)`.
pub fn k_e_exchange() -> Identity {
    let rhs = over_side(
        multiply(
            &prod(&[u(K_M1)]),
            &scale_side(difference(E_M10), &minus_one()),
        ),
        &Rational::zero(),
    );
    times_u_minus_v(single("", commutator(&[u(K_M1)], &[v(E_M10)]), rhs))
}

/// `[k_{-1}(u), f_{0,-1}(v)] = (f_{0,-1}(u) - f_{0,-1}(v)) k_{-1}(u)/(u-v)`.
pub fn k_f_exchange() -> Identity {
    let rhs = over_side(
        multiply(&difference(F_0M1), &prod(&[u(K_M1)])),
        &Rational::zero(),
    );
    times_u_minus_v(single("", commutator(&[u(K_M1)], &[v(F_0M1)]), rhs))
}

/// `[e_{-1,0}(u), f_{0,-1}(v)] = (H(u) - H(v))/(u-v)`.
pub fn e_f_commutator() -> Identity {
    use crate::identity::Var;
    let rhs = over_side(
        vec![
            Term::product(h_factors(Var::U)),
            Term::new(minus_one(), h_factors(Var::V)),
        ],
        &Rational::zero(),
    );
    times_u_minus_v(single("", commutator(&[u(E_M10)], &[v(F_0M1)]), rhs))
}

pub fn e01_shift() -> Identity {
    Identity::plain(single(
        "",
        prod(&[u(E_01)]),
        vec![Term::new(minus_one(), vec![uh(E_M10, -half())])],
    ))
}

pub fn f10_shift() -> Identity {
    Identity::plain(single(
        "",
        prod(&[u(F_10)]),
        vec![Term::new(minus_one(), vec![uh(F_0M1, -half())])],
    ))
}

pub fn k0_factor() -> Identity {
    Identity::plain(single(
        "",
        prod(&[u(K_0)]),
        prod(&[u(K_M1), uh(K_M1, half()).inv()]),
    ))
}

/// `[H(u), x(v)] = sign·½ {H(u), x(u) - x(v)}/(u-v)` with `H = k_{-1}^{-1} k_0`.
fn h_anticommutator(x: &str, sign: Rational) -> Identity {
    use crate::identity::Var;
    let h = h_factors(Var::U);
    let lhs = commutator(&h, &[v(x)]);
    let hs = prod(&h);
    let diff = difference(x);
    let anti = [multiply(&hs, &diff), multiply(&diff, &hs)].concat();
    let rhs = over_side(scale_side(anti, &(&sign * &half())), &Rational::zero());
    times_two_u_minus_v(single("", lhs, rhs))
}

pub fn h_e_anticommutator() -> Identity {
    h_anticommutator(E_M10, one())
}

pub fn h_f_anticommutator() -> Identity {
    h_anticommutator(F_0M1, minus_one())
}

/// `[x(u), x(v)] = sign·½ (x(u) - x(v))²/(u-v)`.
fn squared_difference(x: &str, sign: Rational) -> Identity {
    let diff = difference(x);
    let rhs = over_side(
        scale_side(multiply(&diff, &diff), &(&sign * &half())),
        &Rational::zero(),
    );
    times_two_u_minus_v(single("", commutator(&[u(x)], &[v(x)]), rhs))
}

pub fn e_e_square() -> Identity {
    squared_difference(E_M10, one())
}

pub fn f_f_square() -> Identity {
    squared_difference(F_0M1, minus_one())
}

/// `3e_{-1,1}(u+½) - e_{-1,1}(u) + 3e_{-1,0}(u+½)e_{-1,0}(u) - 2e_{-1,0}(u)² = 0`.
pub fn e11_shift_relation() -> Identity {
    let three = Rational::from_int(3);
    Identity::plain(single(
        "",
        vec![
            Term::new(three.clone(), vec![uh(E_M11, half())]),
            Term::new(minus_one(), vec![u(E_M11)]),
            Term::new(three, vec![uh(E_M10, half()), u(E_M10)]),
            Term::new(Rational::from_int(-2), vec![u(E_M10), u(E_M10)]),
        ],
        Vec::new(),
    ))
}

/// `e_{-1,1}(u) = [e^{(1)}_{-1,0}, e_{-1,0}(u)] - e_{-1,0}(u)²`.
pub fn e11_via_mode() -> Identity {
    let mut rhs = commutator(&[u(E_MODE1)], &[u(E_M10)]);
    rhs.push(Term::new(minus_one(), vec![u(E_M10), u(E_M10)]));
    Identity::plain(single("", prod(&[u(E_M11)]), rhs))
}

/// `[e^{(1)}_{-1,0}, e_{-1,0}(u)] = e_{-1,0}(u)² - e_{-1,0}(u+½)e_{-1,0}(u) - e_{-1,1}(u+½)`.
pub fn mode_e_commutator() -> Identity {
    Identity::plain(single(
        "",
        commutator(&[u(E_MODE1)], &[u(E_M10)]),
        vec![
            Term::product(vec![u(E_M10), u(E_M10)]),
            Term::new(minus_one(), vec![uh(E_M10, half()), u(E_M10)]),
            Term::new(minus_one(), vec![uh(E_M11, half())]),
        ],
    ))
}

/// `e_{-1,1}(u) = -½ e_{-1,0}(u)²`.
pub fn e11_square() -> Identity {
    Identity::plain(single(
        "",
        prod(&[u(E_M11)]),
        vec![Term::new(-half(), vec![u(E_M10), u(E_M10)])],
    ))
}

/// `f_{1,-1}(u) = -½ f_{10}(u)²`, exactly as stated.
pub fn f1m1_square() -> Identity {
    Identity::plain(single(
        "",
        prod(&[u(F_1M1)]),
        vec![Term::new(-half(), vec![u(F_10), u(F_10)])],
    ))
}

/// The relations among Gauss series, by identity id.
pub fn gauss_relations() -> Vec<(&'static str, Identity)> {
    vec![
        ("k1_inverse_shift", k1_inverse_shift()),
        ("e01_k1_unitarity", e01_k1_unitarity()),
        ("f10_k1_unitarity", f10_k1_unitarity()),
        ("k0_unitarity", k0_unitarity()),
        ("kk_commute", kk_commute()),
        ("k_k0_commute", k_k0_commute()),
        ("k_e_exchange", k_e_exchange()),
        ("k_f_exchange", k_f_exchange()),
        ("e_f_commutator", e_f_commutator()),
        ("e01_shift", e01_shift()),
        ("f10_shift", f10_shift()),
        ("k0_factor", k0_factor()),
        ("h_e_anticommutator", h_e_anticommutator()),
        ("h_f_anticommutator", h_f_anticommutator()),
        ("e_e_square", e_e_square()),
        ("f_f_square", f_f_square()),
        ("e11_shift_relation", e11_shift_relation()),
        ("e11_via_mode", e11_via_mode()),
        ("mode_e_commutator", mode_e_commutator()),
        ("e11_square", e11_square()),
        ("f1m1_square", f1m1_square()),
    ]
}
