//! Finite-dimensional representations of the RTT algebra for so₃.
//!
//! The evaluation representation at `a` sends `t_ij(u)` to the operator on
//! `C^3` with entries `R(u-a)_{(i,k),(j,l)}`; a scalar series `c(u)` fixes
//! the unitarity relation, and tensor products come from
//! `Δ t_ij(u) = Σ_k t_ik(u) ⊗ t_kj(u)` with the leftmost point acting on
//! the leftmost factor.
//!
//! Auxiliary labels `-1, 0, 1` sit at positions `0, 1, 2`.

use crate::exact::{OpMatrix, Rational, TruncSeries};
use crate::identity::{commutator, Factor, Identity, Instance, Series, SeriesEnv, Side, Term};
use crate::rmatrix::RMatrixFamily;
use crate::{Error, Result};

pub const LABELS: [i64; 3] = [-1, 0, 1];

pub fn pos(label: i64) -> usize {
    debug_assert!((-1..=1).contains(&label));
    (label + 1) as usize
}

fn delta(a: i64, b: i64) -> Rational {
    if a == b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Series name of `t_ij(u)` in a [`SeriesEnv`].
pub fn t_key(i: i64, j: i64) -> String {
    format!("t[{i},{j}]")
}

/// Series name of `t'_ij(u)`, the entries of `T^{-1}(u)`.
pub fn tinv_key(i: i64, j: i64) -> String {
    format!("t'[{i},{j}]")
}

/// A 3×3 matrix of operator series, indexed by labels.
#[derive(Clone, Debug, PartialEq)]
pub struct RepT {
    dim: usize,
    order: i64,
    entries: Vec<Series>,
}

/// Entries of `T^{-1}(u)`.
pub type RepTInv = RepT;

impl RepT {
    pub fn from_fn(dim: usize, order: i64, mut f: impl FnMut(i64, i64) -> Series) -> Self {
        let mut entries = Vec::with_capacity(9);
        for i in LABELS {
            for j in LABELS {
                entries.push(f(i, j));
            }
        }
        RepT {
            dim,
            order,
            entries,
        }
    }

    pub fn identity(dim: usize, order: i64) -> Self {
        RepT::from_fn(dim, order, |i, j| {
            if i == j {
                Series::one(dim, order)
            } else {
                Series::zero(dim, order)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn entry(&self, i: i64, j: i64) -> &Series {
        &self.entries[pos(i) * 3 + pos(j)]
    }

    pub fn set_entry(&mut self, i: i64, j: i64, s: Series) {
        self.entries[pos(i) * 3 + pos(j)] = s;
    }

    /// Add `delta` to entry `(0,0)` of the `u^{-r}` coefficient of `t_ij`.
    pub fn perturbed(&self, i: i64, j: i64, r: i64, delta: &Rational) -> Result<Self> {
        let mut out = self.clone();
        let s = self.entry(i, j);
        let mut c = s
            .coeff(r)
            .ok_or(crate::exact::ExactError::ExponentOutOfRange {
                exponent: r,
                lo: s.lo(),
                hi: s.valid_order(),
            })?;
        *c.entry_mut(0, 0) += delta;
        out.set_entry(i, j, s.with_coeff(r, c)?);
        Ok(out)
    }

    /// Register all nine entries under `key(i, j)`.
    pub fn insert_into(&self, env: &mut SeriesEnv, key: impl Fn(i64, i64) -> String) {
        for i in LABELS {
            for j in LABELS {
                env.insert(key(i, j), self.entry(i, j).clone());
            }
        }
    }

    /// `t^{(0)}_ij = δ_ij · I`.
    pub fn has_unit_constant_term(&self) -> bool {
        LABELS.iter().all(|&i| {
            LABELS.iter().all(|&j| {
                let c = self.entry(i, j).coeff(0).expect("order >= 0");
                if i == j {
                    c.is_identity()
                } else {
                    c.is_zero()
                }
            })
        })
    }
}

/// Matrix product over the auxiliary index.
pub fn aux_product(a: &RepT, b: &RepT) -> Result<RepT> {
    let mut out = RepT::identity(a.dim, a.order.min(b.order));
    for i in LABELS {
        for k in LABELS {
            let mut acc = Series::zero(a.dim, out.order);
            for j in LABELS {
                acc = acc.try_add(&a.entry(i, j).try_mul(b.entry(j, k))?)?;
            }
            out.set_entry(i, k, acc);
        }
    }
    Ok(out)
}

/// Evaluation parameters: one point per tensor factor.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalParams {
    pub points: Vec<Rational>,
    pub order: i64,
}

impl EvalParams {
    pub fn new(points: Vec<Rational>, order: i64) -> Self {
        EvalParams { points, order }
    }

    pub fn depth(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        3usize.pow(self.points.len() as u32)
    }

    /// Stable parameter label used in reports.
    pub fn label(&self) -> String {
        let pts: Vec<String> = self.points.iter().map(Rational::compact).collect();
        format!("K={};points={}", self.order, pts.join(","))
    }
}

fn so3() -> RMatrixFamily {
    RMatrixFamily::new(3).expect("N = 3 is valid")
}

/// `ρ(t_ij(u))_{kl} = R(u-a)_{(i,k),(j,l)}`, before normalization.
pub fn eval_rep_raw(a: &Rational, order: i64) -> Result<RepT> {
    let fam = so3();
    let idx = fam.indexing();
    let shift = -a;
    let mut out = RepT::identity(3, order);
    for i in LABELS {
        for j in LABELS {
            let mut coeffs = vec![OpMatrix::zeros(3); (order + 1) as usize];
            for k in LABELS {
                for l in LABELS {
                    let f = fam
                        .r_entry(idx.pair(pos(i), pos(k)), idx.pair(pos(j), pos(l)))
                        .shift(&shift);
                    let s = f.expand_at_infinity(order)?;
                    for (r, c) in coeffs.iter_mut().enumerate() {
                        c.set(pos(k), pos(l), s.coeff(r as i64).expect("within order"));
                    }
                }
            }
            out.set_entry(i, j, TruncSeries::from_coeffs(3, coeffs)?);
        }
    }
    Ok(out)
}

/// `(T^t(u + shift))_ij = t_{-j,-i}(u + shift)`.
pub fn transpose_t(t: &RepT, shift: &Rational) -> RepT {
    RepT::from_fn(t.dim, t.order, |i, j| {
        let s = t.entry(-j, -i);
        if shift.is_zero() {
            s.clone()
        } else {
            s.shift(shift)
        }
    })
}

/// `T^{-1}(u)`, inverting the flattened series on aux ⊗ representation space
/// with the auxiliary index most significant.
pub fn invert_t(t: &RepT) -> Result<RepTInv> {
    let d = t.dim;
    let coeffs: Vec<OpMatrix> = (0..=t.order)
        .map(|r| {
            let mut m = OpMatrix::zeros(3 * d);
            for i in LABELS {
                for j in LABELS {
                    let c = t.entry(i, j).coeff(r).expect("within order");
                    for (x, y, val) in c.nonzeros() {
                        m.set(pos(i) * d + x, pos(j) * d + y, val.clone());
                    }
                }
            }
            m
        })
        .collect();
    let inv = TruncSeries::from_coeffs(3 * d, coeffs)?.invert()?;
    let mut out = RepT::identity(d, t.order);
    for i in LABELS {
        for j in LABELS {
            let block: Vec<OpMatrix> = (0..=t.order)
                .map(|r| {
                    let c = inv.coeff(r).expect("within order");
                    OpMatrix::from_fn(d, |x, y| c.get(pos(i) * d + x, pos(j) * d + y).clone())
                })
                .collect();
            out.set_entry(i, j, TruncSeries::from_coeffs(d, block)?);
        }
    }
    Ok(out)
}

/// The scalar `c(u)` with `c(u) c(u+κ) g(u) = 1`, where `g(u)·I` is the raw
/// unitarity product `T(u) T^t(u+κ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormScalar {
    pub c: TruncSeries<Rational>,
    pub g: TruncSeries<Rational>,
}

/// The scalar `g(u)` of `T(u)T^t(u+κ) = g(u)·1`, or the first non-scalar entry.
pub fn unitarity_scalar(t: &RepT, kappa: &Rational) -> Result<TruncSeries<Rational>> {
    let m = aux_product(t, &transpose_t(t, kappa))?;
    let g_coeffs: Vec<Rational> = (0..=t.order)
        .map(|r| {
            m.entry(-1, -1)
                .coeff(r)
                .expect("within order")
                .get(0, 0)
                .clone()
        })
        .collect();
    for i in LABELS {
        for k in LABELS {
            for r in 0..=t.order {
                let c = m.entry(i, k).coeff(r).expect("within order");
                let want = if i == k {
                    g_coeffs[r as usize].clone()
                } else {
                    Rational::zero()
                };
                if c.as_scalar().as_ref() != Some(&want) {
                    return Err(Error::NotScalar {
                        order: r,
                        row: pos(i),
                        col: pos(k),
                    });
                }
            }
        }
    }
    Ok(TruncSeries::from_coeffs(1, g_coeffs)?)
}

/// Solve `c(u) c(u+κ) g(u) = 1` with `c_0 = 1`. The coefficient of `u^{-r}`
/// is `2 c_r` plus terms in `c_0..c_{r-1}`, so each step is forced.
pub fn solve_normalization(
    g: &TruncSeries<Rational>,
    kappa: &Rational,
) -> Result<TruncSeries<Rational>> {
    let order = g.valid_order();
    let mut c = vec![Rational::zero(); (order + 1) as usize];
    c[0] = Rational::one();
    for r in 1..=order {
        let cs = TruncSeries::from_coeffs(1, c.clone())?;
        let prod = cs.try_mul(&cs.shift(kappa))?.try_mul(g)?;
        let x = prod.coeff(r).expect("within order");
        c[r as usize] = -(x / Rational::from_int(2));
    }
    Ok(TruncSeries::from_coeffs(1, c)?)
}

pub fn normalize_scalar(a: &Rational, order: i64) -> Result<NormScalar> {
    let kappa = so3().kappa().clone();
    let raw = eval_rep_raw(a, order)?;
    let g = unitarity_scalar(&raw, &kappa)?;
    let c = solve_normalization(&g, &kappa)?;
    Ok(NormScalar { c, g })
}

/// Multiply every entry by the scalar series `c(u)`.
pub fn scale_rep(t: &RepT, c: &TruncSeries<Rational>) -> Result<RepT> {
    let lifted = c.lift(t.dim);
    let mut out = t.clone();
    for i in LABELS {
        for j in LABELS {
            out.set_entry(i, j, lifted.try_mul(t.entry(i, j))?);
        }
    }
    Ok(out)
}

/// `(Δ T)_ij = Σ_k a_ik ⊗ b_kj`.
pub fn coproduct(a: &RepT, b: &RepT) -> RepT {
    let order = a.order.min(b.order);
    let dim = a.dim * b.dim;
    RepT::from_fn(dim, order, |i, j| {
        let mut acc = Series::zero(dim, order);
        for k in LABELS {
            acc = acc
                .try_add(&a.entry(i, k).kron(b.entry(k, j)))
                .expect("same dimension");
        }
        acc
    })
}

/// Normalized evaluation representation at one point.
pub fn eval_rep(a: &Rational, order: i64) -> Result<RepT> {
    let norm = normalize_scalar(a, order)?;
    scale_rep(&eval_rep_raw(a, order)?, &norm.c)
}

/// Tensor product of normalized evaluation representations, one per point.
pub fn build_rep(params: &EvalParams) -> Result<RepT> {
    let mut it = params.points.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::Config("at least one evaluation point is required".into()))?;
    let mut t = eval_rep(first, params.order)?;
    for a in it {
        t = coproduct(&t, &eval_rep(a, params.order)?);
    }
    Ok(t)
}

/// Environment holding `t_ij` and `t'_ij`.
pub fn rep_env(t: &RepT, tinv: &RepTInv) -> SeriesEnv {
    let mut env = SeriesEnv::new(t.dim, t.order);
    t.insert_into(&mut env, t_key);
    tinv.insert_into(&mut env, tinv_key);
    env
}

fn tu(i: i64, j: i64) -> Factor {
    Factor::u(t_key(i, j))
}

fn tv(i: i64, j: i64) -> Factor {
    Factor::v(t_key(i, j))
}

fn tpv(i: i64, j: i64) -> Factor {
    Factor::v(tinv_key(i, j))
}

fn quad_label(a: i64, b: i64, c: i64, d: i64) -> String {
    format!("({a},{b},{c},{d})")
}

fn quadruples() -> impl Iterator<Item = (i64, i64, i64, i64)> {
    LABELS.into_iter().flat_map(|a| {
        LABELS.into_iter().flat_map(move |b| {
            LABELS
                .into_iter()
                .flat_map(move |c| LABELS.into_iter().map(move |d| (a, b, c, d)))
        })
    })
}

/// `R(u-v)_{(a,b),(c,d)}` as terms `coeff / (u-v-root)` (or constant), read
/// off the family's `P` and `Q`.
fn r_terms(
    fam: &RMatrixFamily,
    a: i64,
    b: i64,
    c: i64,
    d: i64,
) -> Vec<(Rational, Option<Rational>)> {
    let idx = fam.indexing();
    let row = idx.pair(pos(a), pos(b));
    let col = idx.pair(pos(c), pos(d));
    let mut out = Vec::new();
    if row == col {
        out.push((Rational::one(), None));
    }
    let p = fam.p().get(row, col);
    if !p.is_zero() {
        out.push((-p, Some(Rational::zero())));
    }
    let q = fam.q().get(row, col);
    if !q.is_zero() {
        out.push((q.clone(), Some(fam.kappa().clone())));
    }
    out
}

fn r_weighted(
    fam: &RMatrixFamily,
    (a, b, c, d): (i64, i64, i64, i64),
    factors: Vec<Factor>,
) -> Side {
    r_terms(fam, a, b, c, d)
        .into_iter()
        .map(|(coeff, root)| {
            let t = Term::new(coeff, factors.clone());
            match root {
                Some(c) => t.over(c),
                None => t,
            }
        })
        .collect()
}

fn rtt_clearing(fam: &RMatrixFamily) -> Vec<Rational> {
    vec![Rational::zero(), fam.kappa().clone()]
}

/// `R(u-v) T_1(u) T_2(v) = T_2(v) T_1(u) R(u-v)` block by block on
/// aux ⊗ aux; block `((i,k),(j,l))` is an operator on the representation.
pub fn rtt_identity(fam: &RMatrixFamily) -> Identity {
    let instances = quadruples()
        .map(|(i, k, j, l)| {
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for p in LABELS {
                for q in LABELS {
                    lhs.extend(r_weighted(fam, (i, k, p, q), vec![tu(p, j), tv(q, l)]));
                    rhs.extend(r_weighted(fam, (p, q, j, l), vec![tv(k, q), tu(i, p)]));
                }
            }
            Instance::new(quad_label(i, k, j, l), lhs, rhs)
        })
        .collect();
    Identity::cleared(Rational::one(), rtt_clearing(fam), instances)
}

/// The 81 entrywise commutation relations `[t_ij(u), t_kl(v)] = …`.
pub fn gen_rel_t_identity() -> Identity {
    let half = Rational::half();
    let zero = Rational::zero();
    let one = Rational::one();
    let instances = quadruples()
        .map(|(i, j, k, l)| {
            let lhs = commutator(&[tu(i, j)], &[tv(k, l)]);
            let mut rhs = vec![
                Term::product(vec![tu(k, j), tv(i, l)]).over(zero.clone()),
                Term::new(-one.clone(), vec![tv(k, j), tu(i, l)]).over(zero.clone()),
            ];
            if k == -i {
                for p in LABELS {
                    rhs.push(Term::new(-one.clone(), vec![tu(p, j), tv(-p, l)]).over(half.clone()));
                }
            }
            if l == -j {
                for p in LABELS {
                    rhs.push(Term::product(vec![tv(k, -p), tu(i, p)]).over(half.clone()));
                }
            }
            Instance::new(quad_label(i, j, k, l), lhs, rhs)
        })
        .collect();
    Identity::cleared(one, vec![zero, half], instances)
}

/// `T_2^{-1}(v) R(u-v) T_1(u) = T_1(u) R(u-v) T_2^{-1}(v)` block by block.
pub fn rtt_inverse_identity(fam: &RMatrixFamily) -> Identity {
    let instances = quadruples()
        .map(|(i, k, j, l)| {
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for q in LABELS {
                for r in LABELS {
                    lhs.extend(r_weighted(fam, (i, q, r, l), vec![tpv(k, q), tu(r, j)]));
                }
            }
            for p in LABELS {
                for s in LABELS {
                    rhs.extend(r_weighted(fam, (p, k, j, s), vec![tu(i, p), tpv(s, l)]));
                }
            }
            Instance::new(quad_label(i, k, j, l), lhs, rhs)
        })
        .collect();
    Identity::cleared(Rational::one(), rtt_clearing(fam), instances)
}

/// The 81 entrywise relations `[t_pq(u), t'_rs(v)] = …`.
pub fn gen_rel_tprime_identity() -> Identity {
    let half = Rational::half();
    let zero = Rational::zero();
    let one = Rational::one();
    let instances = quadruples()
        .map(|(p, q, r, s)| {
            let lhs = commutator(&[tu(p, q)], &[tpv(r, s)]);
            let mut rhs = vec![
                Term::product(vec![tpv(r, -p), tu(-s, q)]).over(half.clone()),
                Term::new(-one.clone(), vec![tu(p, -r), tpv(-q, s)]).over(half.clone()),
            ];
            if q == r {
                for i in LABELS {
                    rhs.push(Term::product(vec![tu(p, i), tpv(i, s)]).over(zero.clone()));
                }
            }
            if p == s {
                for i in LABELS {
                    rhs.push(Term::new(-one.clone(), vec![tpv(r, i), tu(i, q)]).over(zero.clone()));
                }
            }
            Instance::new(quad_label(p, q, r, s), lhs, rhs)
        })
        .collect();
    Identity::cleared(one, vec![zero, half], instances)
}

/// `T(u) T^t(u+κ) = 1` and `T^t(u+κ) T(u) = 1`, entry by entry.
pub fn unitarity_identity(kappa: &Rational) -> Identity {
    let mut instances = Vec::new();
    for i in LABELS {
        for k in LABELS {
            let rhs = vec![Term::scalar(delta(i, k))];
            let left: Side = LABELS
                .iter()
                .map(|&j| {
                    Term::product(vec![
                        tu(i, j),
                        Factor::u(t_key(-k, -j)).shifted(kappa.clone()),
                    ])
                })
                .collect();
            instances.push(Instance::new(format!("T.Tt({i},{k})"), left, rhs.clone()));
            let right: Side = LABELS
                .iter()
                .map(|&j| {
                    Term::product(vec![
                        Factor::u(t_key(-j, -i)).shifted(kappa.clone()),
                        tu(j, k),
                    ])
                })
                .collect();
            instances.push(Instance::new(format!("Tt.T({i},{k})"), right, rhs));
        }
    }
    Identity::plain(instances)
}

/// `t'_ij(u) = t_{-j,-i}(u+κ)`, i.e. `T^{-1}(u) = T^t(u+κ)`.
pub fn inverse_transpose_identity(kappa: &Rational) -> Identity {
    let instances = LABELS
        .iter()
        .flat_map(|&i| LABELS.iter().map(move |&j| (i, j)))
        .map(|(i, j)| {
            Instance::new(
                format!("({i},{j})"),
                vec![Term::product(vec![Factor::u(tinv_key(i, j))])],
                vec![Term::product(vec![
                    Factor::u(t_key(-j, -i)).shifted(kappa.clone())
                ])],
            )
        })
        .collect();
    Identity::plain(instances)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::evaluate;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn scalar_coeffs(s: &Series, row: usize, col: usize) -> Vec<Rational> {
        (0..=s.valid_order())
            .map(|k| s.coeff(k).unwrap().get(row, col).clone())
            .collect()
    }

    #[test]
    fn raw_rep_at_zero() {
        let t = eval_rep_raw(&Rational::zero(), 6).unwrap();
        assert!(t.has_unit_constant_term());
        let tm = t.entry(-1, -1);
        // diag(1 - u^{-1}, 1, 1 + (u - 1/2)^{-1})
        assert_eq!(
            scalar_coeffs(tm, 0, 0),
            [1, -1, 0, 0, 0, 0, 0].map(Rational::from_int)
        );
        assert_eq!(
            scalar_coeffs(tm, 1, 1),
            [1, 0, 0, 0, 0, 0, 0].map(Rational::from_int)
        );
        let geometric: Vec<Rational> = (0..=6)
            .map(|k| {
                if k == 0 {
                    Rational::one()
                } else {
                    r(1, 1 << (k - 1))
                }
            })
            .collect();
        assert_eq!(scalar_coeffs(tm, 2, 2), geometric);
        for (x, y, _) in tm.coeff(1).unwrap().nonzeros() {
            assert_eq!(x, y);
        }
        // t_{-1,1}: only entry (e_1, e_{-1}) is nonzero; Q gives (u - 1/2)^{-1}
        // and P gives -u^{-1} there
        let t13 = t.entry(-1, 1);
        for k in 0..=6 {
            let c = t13.coeff(k).unwrap();
            for (x, y, _) in c.nonzeros() {
                assert_eq!((x, y), (2, 0));
            }
        }
        let mut pole = geometric.clone();
        pole[0] = Rational::zero();
        pole[1] = Rational::zero();
        assert_eq!(scalar_coeffs(t13, 2, 0), pole);
    }

    #[test]
    fn normalization_solves_and_is_unique() {
        let kappa = Rational::half();
        let norm = normalize_scalar(&Rational::zero(), 8).unwrap();
        assert_eq!(norm.c.coeff(0), Some(Rational::one()));
        let check = |c: &TruncSeries<Rational>| {
            c.try_mul(&c.shift(&kappa))
                .unwrap()
                .try_mul(&norm.g)
                .unwrap()
        };
        let one = TruncSeries::one(1, 8);
        assert_eq!(check(&norm.c).first_difference(&one), None);
        for k in 1..=8 {
            let bumped = norm
                .c
                .with_coeff(k, norm.c.coeff(k).unwrap() + Rational::one())
                .unwrap();
            assert_eq!(check(&bumped).first_difference(&one), Some(k), "c_{k}");
        }
    }

    #[test]
    fn raw_rep_is_not_unitary_but_normalized_is() {
        let kappa = Rational::half();
        let raw = eval_rep_raw(&Rational::zero(), 6).unwrap();
        let g = unitarity_scalar(&raw, &kappa).unwrap();
        assert!(g.first_difference(&TruncSeries::one(1, 6)).is_some());
        let t = eval_rep(&Rational::zero(), 6).unwrap();
        let g = unitarity_scalar(&t, &kappa).unwrap();
        assert_eq!(g.first_difference(&TruncSeries::one(1, 6)), None);
    }

    #[test]
    fn transpose_is_an_involution() {
        let t = eval_rep(&r(1, 3), 5).unwrap();
        assert_eq!(
            transpose_t(&transpose_t(&t, &Rational::zero()), &Rational::zero()),
            t
        );
        assert_eq!(
            transpose_t(&t, &Rational::zero()).entry(-1, -1),
            t.entry(1, 1)
        );
        let id = RepT::identity(3, 5);
        assert_eq!(transpose_t(&id, &Rational::zero()), id);
    }

    #[test]
    fn inverse_matches_shifted_transpose() {
        let t = build_rep(&EvalParams::new(vec![Rational::zero()], 8)).unwrap();
        let ti = invert_t(&t).unwrap();
        let one = RepT::identity(3, 8);
        assert_eq!(aux_product(&t, &ti).unwrap(), one);
        assert_eq!(aux_product(&ti, &t).unwrap(), one);
        assert_eq!(ti, transpose_t(&t, &Rational::half()));
        assert_eq!(invert_t(&one).unwrap(), one);
    }

    #[test]
    fn coproduct_is_coassociative() {
        let a = eval_rep(&Rational::zero(), 3).unwrap();
        let b = eval_rep(&r(1, 3), 3).unwrap();
        let c = eval_rep(&r(-2, 5), 3).unwrap();
        assert_eq!(
            coproduct(&coproduct(&a, &b), &c),
            coproduct(&a, &coproduct(&b, &c))
        );
    }

    #[test]
    fn defining_relations_at_one_point() {
        let fam = so3();
        let t = build_rep(&EvalParams::new(vec![Rational::zero()], 6)).unwrap();
        let ti = invert_t(&t).unwrap();
        let env = rep_env(&t, &ti);
        for (name, id) in [
            ("rtt", rtt_identity(&fam)),
            ("entrywise", gen_rel_t_identity()),
            ("rtt_inv", rtt_inverse_identity(&fam)),
            ("inverse_entrywise", gen_rel_tprime_identity()),
            ("unitarity", unitarity_identity(fam.kappa())),
            ("inv_transpose", inverse_transpose_identity(fam.kappa())),
        ] {
            let out = evaluate(&env, &id);
            assert!(out.verdict.is_pass(), "{name}: {:?}", out.verdict);
            if let Some(o) = out.oracle {
                assert!(o.is_pass(), "{name} oracle: {o:?}");
            }
        }
    }

    #[test]
    fn perturbed_entry_breaks_rtt() {
        let fam = so3();
        let t = build_rep(&EvalParams::new(vec![Rational::zero()], 5)).unwrap();
        let bad = t.perturbed(0, 0, 2, &Rational::one()).unwrap();
        let env = rep_env(&bad, &invert_t(&bad).unwrap());
        let out = evaluate(&env, &rtt_identity(&fam));
        assert!(out.verdict.is_fail());
        assert!(out.oracle.unwrap().is_fail());
    }
}
