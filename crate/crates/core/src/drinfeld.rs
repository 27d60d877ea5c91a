//! Drinfeld currents built from the Gauss series, their current and mode
//! relations, and the map back to `T(u)`.
//!
//! `X^+ = f_{0,-1}`, `X^- = e_{-1,0}`, `H = k_{-1}^{-1} k_0`. Modes are read
//! off as `x^±_k = [u^{-k-1}] X^±` and `h_k = [u^{-k-1}] H`.

use crate::exact::{OpMatrix, Rational};
use crate::gauss::{self, GaussData, K_M1};
use crate::identity::{
    commutator, linear, multiply, over_side, scale_side, Factor, Identity, Instance, Series,
    SeriesEnv, Side, Term,
};
use crate::rep::RepT;
use crate::report::{Failure, Verdict};
use crate::{Error, Result};

pub const X_PLUS: &str = "Xplus";
pub const X_MINUS: &str = "Xminus";
pub const H: &str = "H";

pub const CURRENT_NAMES: [&str; 3] = [X_PLUS, X_MINUS, H];

/// Largest mode index checked when no bound is given.
pub const DEFAULT_MODE_CAP: i64 = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct Currents {
    pub x_plus: Series,
    pub x_minus: Series,
    pub h: Series,
}

pub fn phi_map(g: &GaussData) -> Result<Currents> {
    let k_inv = g.k_minus1.invert().map_err(|_| Error::NonInvertibleBlock)?;
    Ok(Currents {
        x_plus: g.f0_m1.clone(),
        x_minus: g.e_m10.clone(),
        h: k_inv.try_mul(&g.k0)?,
    })
}

impl Currents {
    pub fn get(&self, name: &str) -> Option<&Series> {
        match name {
            X_PLUS => Some(&self.x_plus),
            X_MINUS => Some(&self.x_minus),
            H => Some(&self.h),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn order(&self) -> i64 {
        self.h
            .valid_order()
            .min(self.x_plus.valid_order())
            .min(self.x_minus.valid_order())
    }

    /// Add `delta` to entry `(0,0)` of the `u^{-r}` coefficient of `name`.
    pub fn perturbed(&self, name: &str, r: i64, delta: &Rational) -> Result<Self> {
        let mut out = self.clone();
        let s = match name {
            X_PLUS => &mut out.x_plus,
            X_MINUS => &mut out.x_minus,
            H => &mut out.h,
            _ => return Err(Error::UnknownSeries(name.to_string())),
        };
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

    pub fn insert_into(&self, env: &mut SeriesEnv) {
        for name in CURRENT_NAMES {
            env.insert(name, self.get(name).expect("known name").clone());
        }
    }

    pub fn env(&self) -> SeriesEnv {
        let mut env = SeriesEnv::new(self.dim(), self.order());
        self.insert_into(&mut env);
        env
    }

    /// Mode `k` of a current; `None` when `k + 1` lies beyond the validity order.
    fn mode(s: &Series, k: i64) -> Option<OpMatrix> {
        s.coeff(k + 1)
    }
}

fn one() -> Rational {
    Rational::one()
}

fn minus_one() -> Rational {
    -Rational::one()
}

fn difference(name: &str) -> Side {
    linear(&[(one(), Factor::u(name)), (minus_one(), Factor::v(name))])
}

fn cleared(scale: i64, lhs: Side, rhs: Side) -> Identity {
    Identity::cleared(
        Rational::from_int(scale),
        vec![Rational::zero()],
        vec![Instance::new("", lhs, rhs)],
    )
}

/// `[H(u), X(v)] = sign·½ {H(u), X(u) - X(v)}/(u-v)`.
fn h_x(x: &str, sign: Rational) -> Identity {
    let hs = vec![Term::product(vec![Factor::u(H)])];
    let diff = difference(x);
    let anti = [multiply(&hs, &diff), multiply(&diff, &hs)].concat();
    let rhs = over_side(
        scale_side(anti, &(&sign * &Rational::half())),
        &Rational::zero(),
    );
    cleared(2, commutator(&[Factor::u(H)], &[Factor::v(x)]), rhs)
}

/// `[X(u), X(v)] = sign·½ (X(u) - X(v))²/(u-v)`.
fn x_x(x: &str, sign: Rational) -> Identity {
    let diff = difference(x);
    let rhs = over_side(
        scale_side(multiply(&diff, &diff), &(&sign * &Rational::half())),
        &Rational::zero(),
    );
    cleared(2, commutator(&[Factor::u(x)], &[Factor::v(x)]), rhs)
}

/// The six current relations, each cleared by `(u-v)` or `2(u-v)`.
pub fn current_identities() -> Vec<(&'static str, Identity)> {
    let hh = cleared(1, commutator(&[Factor::u(H)], &[Factor::v(H)]), Vec::new());
    let xpxm = cleared(
        1,
        commutator(&[Factor::u(X_PLUS)], &[Factor::v(X_MINUS)]),
        over_side(scale_side(difference(H), &minus_one()), &Rational::zero()),
    );
    vec![
        ("current_hh", hh),
        ("current_xpxm", xpxm),
        ("current_hxp", h_x(X_PLUS, minus_one())),
        ("current_hxm", h_x(X_MINUS, one())),
        ("current_xpxp", x_x(X_PLUS, minus_one())),
        ("current_xmxm", x_x(X_MINUS, one())),
    ]
}

/// `H(u) = k_{-1}^{-1}(u+½)`. Needs the Gauss series and `H` in one environment.
pub fn phi_h_shift() -> Identity {
    Identity::plain(vec![Instance::new(
        "",
        vec![Term::product(vec![Factor::u(H)])],
        vec![Term::product(vec![Factor::u(K_M1)
            .shifted(Rational::half())
            .inv()])],
    )])
}

/// `k_{-1}(u) H(u-½) = 1`.
pub fn inverse_map() -> Identity {
    Identity::plain(vec![Instance::new(
        "",
        vec![Term::product(vec![
            Factor::u(K_M1),
            Factor::u(H).shifted(-Rational::half()),
        ])],
        vec![Term::scalar(one())],
    )])
}

/// Default mode bound for a truncation order: `min(6, K-2)`.
pub fn default_mode_bound(order: i64) -> i64 {
    DEFAULT_MODE_CAP.min(order - 2)
}

/// A bound is usable when every referenced mode `j <= bound` has its
/// coefficient `u^{-j-1}` inside the order, with one order of slack.
pub fn validate_mode_bound(bound: i64, order: i64) -> Result<()> {
    if bound < 0 || bound > order - 2 {
        return Err(Error::Config(format!(
            "mode bound {bound} must lie in 0..={} for order {order}",
            order - 2
        )));
    }
    Ok(())
}

struct Modes {
    xp: Vec<OpMatrix>,
    xm: Vec<OpMatrix>,
    h: Vec<OpMatrix>,
}

impl Modes {
    fn extract(c: &Currents, bound: i64) -> Result<Self> {
        let take = |s: &Series| -> Result<Vec<OpMatrix>> {
            (0..=bound)
                .map(|k| {
                    Currents::mode(s, k).ok_or(Error::Exact(
                        crate::exact::ExactError::ExponentOutOfRange {
                            exponent: k + 1,
                            lo: s.lo(),
                            hi: s.valid_order(),
                        },
                    ))
                })
                .collect()
        };
        Ok(Self {
            xp: take(&c.x_plus)?,
            xm: take(&c.x_minus)?,
            h: take(&c.h)?,
        })
    }

    fn x(&self, sign: i64) -> &[OpMatrix] {
        if sign > 0 {
            &self.xp
        } else {
            &self.xm
        }
    }
}

fn comm(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    a.commutator(b).expect("equal dimensions")
}

fn anti(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    a.anticommutator(b).expect("equal dimensions")
}

fn sub(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    a.try_sub(b).expect("equal dimensions")
}

fn sign_char(sign: i64) -> char {
    if sign > 0 {
        '+'
    } else {
        '-'
    }
}

/// Run over instances in order; the first mismatch decides.
fn first_mismatch(instances: impl Iterator<Item = (String, OpMatrix, OpMatrix)>) -> Verdict {
    let mut checked = 0;
    for (label, lhs, rhs) in instances {
        if let Some((x, y)) = lhs.first_difference(&rhs) {
            return Verdict::fail(Failure::new("mode relation").with_instance(label).entry(
                x,
                y,
                lhs.get(x, y).clone(),
                rhs.get(x, y).clone(),
            ));
        }
        checked += 1;
    }
    Verdict::pass(checked)
}

/// The five mode-relation families over all indices up to `bound`.
pub fn check_mode_relations(c: &Currents, bound: i64) -> Vec<(&'static str, Verdict)> {
    let m = match Modes::extract(c, bound) {
        Ok(m) => m,
        Err(e) => {
            let fail = Verdict::fail(Failure::new(format!("evaluation error: {e}")));
            return ["mode_hh", "mode_xpxm", "mode_h0x", "mode_hx", "mode_xx"]
                .into_iter()
                .map(|id| (id, fail.clone()))
                .collect();
        }
    };
    let b = bound as usize;
    let half = Rational::half();
    let pairs = |hi: usize| (0..=hi).flat_map(move |k| (0..=hi).map(move |l| (k, l)));

    let hh = first_mismatch(pairs(b).map(|(k, l)| {
        (
            format!("k={k},l={l}"),
            comm(&m.h[k], &m.h[l]),
            OpMatrix::zeros(c.dim()),
        )
    }));
    let xpxm = first_mismatch(pairs(b).filter(|(k, l)| k + l <= b).map(|(k, l)| {
        (
            format!("k={k},l={l}"),
            comm(&m.xp[k], &m.xm[l]),
            m.h[k + l].clone(),
        )
    }));
    let h0x = first_mismatch([1i64, -1].into_iter().flat_map(|sign| {
        let m = &m;
        (0..=b).map(move |l| {
            let x = &m.x(sign)[l];
            (
                format!("{}l={l}", sign_char(sign)),
                comm(&m.h[0], x),
                x.scale(&Rational::from_int(sign)),
            )
        })
    }));
    let shifted =
        |sign: i64, a: &[OpMatrix], bs: &[OpMatrix], k: usize, l: usize, left_anti: &[OpMatrix]| {
            let lhs = sub(&comm(&a[k + 1], &bs[l]), &comm(&a[k], &bs[l + 1]));
            let rhs = anti(&left_anti[k], &bs[l]).scale(&(&half * &Rational::from_int(sign)));
            (lhs, rhs)
        };
    let inner = if b == 0 { None } else { Some(b - 1) };
    let hx = first_mismatch([1i64, -1].into_iter().flat_map(|sign| {
        let m = &m;
        inner.into_iter().flat_map(move |hi| {
            pairs(hi).map(move |(k, l)| {
                let (lhs, rhs) = shifted(sign, &m.h, m.x(sign), k, l, &m.h);
                (format!("{}k={k},l={l}", sign_char(sign)), lhs, rhs)
            })
        })
    }));
    let xx = first_mismatch([1i64, -1].into_iter().flat_map(|sign| {
        let m = &m;
        inner.into_iter().flat_map(move |hi| {
            pairs(hi).map(move |(k, l)| {
                let x = m.x(sign);
                let (lhs, rhs) = shifted(sign, x, x, k, l, x);
                (format!("{}k={k},l={l}", sign_char(sign)), lhs, rhs)
            })
        })
    }));
    vec![
        ("mode_hh", hh),
        ("mode_xpxm", xpxm),
        ("mode_h0x", h0x),
        ("mode_hx", hx),
        ("mode_xx", xx),
    ]
}

/// Rebuild all nine Gauss series from the currents alone.
pub fn gauss_from_currents(c: &Currents) -> Result<GaussData> {
    let half = Rational::half();
    let k_minus1 =
        c.h.shift(&-&half)
            .invert()
            .map_err(|_| Error::NonInvertibleBlock)?;
    let k0 = k_minus1.try_mul(
        &k_minus1
            .shift(&half)
            .invert()
            .map_err(|_| Error::NonInvertibleBlock)?,
    )?;
    let k1 = k_minus1
        .shift(&half)
        .invert()
        .map_err(|_| Error::NonInvertibleBlock)?;
    let e_m10 = c.x_minus.clone();
    let f0_m1 = c.x_plus.clone();
    let e01 = e_m10.shift(&-&half).neg();
    let f10 = f0_m1.shift(&-&half).neg();
    let e_m11 = e_m10.try_mul(&e_m10)?.scale(&-&half);
    let f1_m1 = f0_m1.try_mul(&f0_m1)?.scale(&-&half);
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

/// `T` rebuilt from the currents equals `T`.
pub fn check_surjectivity(t: &RepT, c: &Currents) -> Verdict {
    match gauss_from_currents(c).and_then(|g| gauss::gauss_reconstruct(&g)) {
        Ok(back) => gauss::compare_reps(&back, t),
        Err(e) => Verdict::fail(Failure::new(format!("evaluation error: {e}"))),
    }
}

/// Environment with both the Gauss series and the currents.
pub fn joint_env(g: &GaussData, c: &Currents) -> SeriesEnv {
    let mut env = g.env();
    c.insert_into(&mut env);
    env
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::gauss_decompose;
    use crate::identity::evaluate;
    use crate::rep::{build_rep, EvalParams};

    fn setup(points: &[Rational], order: i64) -> (RepT, GaussData, Currents) {
        let t = build_rep(&EvalParams::new(points.to_vec(), order)).unwrap();
        let g = gauss_decompose(&t).unwrap();
        let c = phi_map(&g).unwrap();
        (t, g, c)
    }

    #[test]
    fn current_relations_hold() {
        let (_, _, c) = setup(&[Rational::zero()], 6);
        let env = c.env();
        for (id, identity) in current_identities() {
            let out = evaluate(&env, &identity);
            assert!(out.verdict.is_pass(), "{id}: {:?}", out.verdict);
            assert!(out.oracle.is_none_or(|o| o.is_pass()), "{id} oracle");
        }
    }

    #[test]
    fn mode_relations_hold() {
        let (_, _, c) = setup(&[Rational::new(1, 3)], 8);
        for (id, v) in check_mode_relations(&c, default_mode_bound(8)) {
            assert!(v.is_pass(), "{id}: {v:?}");
        }
    }

    #[test]
    fn mode_sign_flip_fails() {
        let (_, _, c) = setup(&[Rational::zero()], 6);
        let swapped = Currents {
            x_plus: c.x_minus.clone(),
            x_minus: c.x_plus.clone(),
            h: c.h.clone(),
        };
        let verdicts = check_mode_relations(&swapped, 3);
        assert!(verdicts.iter().any(|(_, v)| v.is_fail()));
    }

    #[test]
    fn inverse_map_and_shift() {
        let (_, g, c) = setup(&[Rational::zero()], 6);
        let env = joint_env(&g, &c);
        assert!(evaluate(&env, &phi_h_shift()).verdict.is_pass());
        assert!(evaluate(&env, &inverse_map()).verdict.is_pass());
    }

    #[test]
    fn surjectivity_rebuilds_t() {
        let (t, _, c) = setup(&[Rational::zero()], 6);
        assert!(check_surjectivity(&t, &c).is_pass());
        let bad = c.perturbed(X_MINUS, 2, &Rational::one()).unwrap();
        assert!(check_surjectivity(&t, &bad).is_fail());
    }

    #[test]
    fn mode_bound_validation() {
        assert_eq!(default_mode_bound(8), 6);
        assert_eq!(default_mode_bound(5), 3);
        assert!(validate_mode_bound(6, 8).is_ok());
        assert!(validate_mode_bound(7, 8).is_err());
    }
}
