//! The so_N R-matrix `R(u) = I - P/u + Q/(u - κ)` with `κ = N/2 - 1`.
//!
//! Basis vectors of `C^N` carry labels `-n..n` (no `0` when `N` is even),
//! stored at positions `0..N` in increasing label order. Tensor products use
//! the Kronecker convention with the leftmost factor most significant: the
//! pair of positions `(a, b)` is row `a*N + b`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{OpMatrix, RatFunc, Rational};
use crate::report::{Failure, Verdict};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoIndexing {
    n: usize,
    labels: Vec<i64>,
}

impl SoIndexing {
    pub fn new(n: usize) -> Self {
        let half = (n / 2) as i64;
        let labels = (-half..=half).filter(|&l| n % 2 == 1 || l != 0).collect();
        SoIndexing { n, labels }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn position(&self, label: i64) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn label(&self, pos: usize) -> i64 {
        self.labels[pos]
    }

    /// Position of the label `-label(pos)`.
    pub fn opposite(&self, pos: usize) -> usize {
        self.n - 1 - pos
    }

    /// Row of `e_a ⊗ e_b` for positions `a`, `b`.
    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.n + b
    }
}

/// The flip `e_i ⊗ e_j ↦ e_j ⊗ e_i`.
pub fn build_p(n: usize) -> OpMatrix {
    let mut p = OpMatrix::zeros(n * n);
    for a in 0..n {
        for b in 0..n {
            p.set(b * n + a, a * n + b, Rational::one());
        }
    }
    p
}

/// `Q = Σ e_ij ⊗ e_{-i,-j}`.
pub fn build_q(n: usize) -> OpMatrix {
    let idx = SoIndexing::new(n);
    let mut q = OpMatrix::zeros(n * n);
    for i in 0..n {
        for j in 0..n {
            q.set(
                idx.pair(i, idx.opposite(i)),
                idx.pair(j, idx.opposite(j)),
                Rational::one(),
            );
        }
    }
    q
}

/// Apply `(e_ij)^t = e_{-j,-i}` to the first tensor factor of an operator on
/// `C^N ⊗ C^N`.
pub fn partial_transpose_first(m: &OpMatrix, idx: &SoIndexing) -> OpMatrix {
    let n = idx.size();
    let mut out = OpMatrix::zeros(n * n);
    for (row, col, x) in m.nonzeros() {
        let (a, b) = (row / n, row % n);
        let (c, d) = (col / n, col % n);
        out.set(
            idx.pair(idx.opposite(c), b),
            idx.pair(idx.opposite(a), d),
            x.clone(),
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixFamily {
    indexing: SoIndexing,
    kappa: Rational,
    p: OpMatrix,
    q: OpMatrix,
}

impl RMatrixFamily {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize { n, min: 3 });
        }
        Ok(RMatrixFamily {
            indexing: SoIndexing::new(n),
            kappa: Rational::new(n as i64, 2) - Rational::one(),
            p: build_p(n),
            q: build_q(n),
        })
    }

    pub fn indexing(&self) -> &SoIndexing {
        &self.indexing
    }

    pub fn n(&self) -> usize {
        self.indexing.size()
    }

    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn p(&self) -> &OpMatrix {
        &self.p
    }

    pub fn q(&self) -> &OpMatrix {
        &self.q
    }

    /// Add `delta` to the flattened (row-major) entry `index` of `P` or `Q`.
    pub fn perturbed(&self, which_q: bool, index: usize, delta: &Rational) -> Self {
        let mut out = self.clone();
        let m = if which_q { &mut out.q } else { &mut out.p };
        let d = m.dim();
        let (row, col) = ((index / d) % d, index % d);
        *m.entry_mut(row, col) += delta;
        out
    }

    /// Entry of `R(u)` as a rational function of `u`.
    pub fn r_entry(&self, row: usize, col: usize) -> RatFunc {
        let delta = if row == col {
            Rational::one()
        } else {
            Rational::zero()
        };
        RatFunc::constant(delta)
            .sub(&RatFunc::simple_pole(
                self.p.get(row, col).clone(),
                &Rational::zero(),
            ))
            .add(&RatFunc::simple_pole(
                self.q.get(row, col).clone(),
                &self.kappa,
            ))
    }

    /// `R(y)` at a rational point; `None` at a pole.
    pub fn r_at(&self, y: &Rational) -> Option<OpMatrix> {
        let inv_y = y.recip()?;
        let inv_yk = (y - &self.kappa).recip()?;
        let d = self.p.dim();
        let mut r = OpMatrix::identity(d);
        for (i, j, x) in self.p.nonzeros() {
            *r.entry_mut(i, j) -= &(x * &inv_y);
        }
        for (i, j, x) in self.q.nonzeros() {
            *r.entry_mut(i, j) += &(x * &inv_yk);
        }
        Some(r)
    }
}

/// Structural identities of `P` and `Q`, each as a named verdict.
pub fn check_structure(fam: &RMatrixFamily) -> Vec<(&'static str, Verdict)> {
    let n = fam.n();
    let (p, q) = (fam.p(), fam.q());
    let id = OpMatrix::identity(n * n);
    let nq = q.scale(&Rational::from_int(n as i64));
    let pq = p.try_mul(q).expect("same dimension");
    let qp = q.try_mul(p).expect("same dimension");
    let pt = partial_transpose_first(p, fam.indexing());
    vec![
        (
            "p_squared",
            matrix_verdict(&p.try_mul(p).expect("same dimension"), &id, "P^2 = I"),
        ),
        (
            "q_squared",
            matrix_verdict(&q.try_mul(q).expect("same dimension"), &nq, "Q^2 = N Q"),
        ),
        ("pq", matrix_verdict(&pq, q, "PQ = Q")),
        ("qp", matrix_verdict(&qp, q, "QP = Q")),
        (
            "q_partial_transpose",
            matrix_verdict(&pt, q, "Q = P^t in the first factor"),
        ),
    ]
}

pub(crate) fn matrix_verdict(lhs: &OpMatrix, rhs: &OpMatrix, what: &str) -> Verdict {
    match lhs.first_difference(rhs) {
        None => Verdict::pass(1),
        Some((i, j)) => Verdict::fail(Failure::new(what).entry(
            i,
            j,
            lhs.get(i, j).clone(),
            rhs.get(i, j).clone(),
        )),
    }
}

/// `R(u)·R(-u)` as a matrix of rational functions, and its scalar value when
/// it is a multiple of the identity.
pub fn crossing_product(fam: &RMatrixFamily) -> (Vec<RatFunc>, Option<RatFunc>) {
    let d = fam.p().dim();
    let r: Vec<RatFunc> = (0..d * d).map(|i| fam.r_entry(i / d, i % d)).collect();
    let rm: Vec<RatFunc> = r.iter().map(RatFunc::reflect).collect();
    let mut prod = vec![RatFunc::zero(); d * d];
    for i in 0..d {
        for k in 0..d {
            let a = &r[i * d + k];
            if a.is_zero() {
                continue;
            }
            for j in 0..d {
                let b = &rm[k * d + j];
                if !b.is_zero() {
                    prod[i * d + j] = prod[i * d + j].add(&a.mul(b));
                }
            }
        }
    }
    let s = prod[0].clone();
    let scalar = (0..d * d).all(|idx| {
        let (i, j) = (idx / d, idx % d);
        if i == j {
            prod[idx] == s
        } else {
            prod[idx].is_zero()
        }
    });
    (prod, scalar.then_some(s))
}

/// Polynomial in `u`, `v` keyed by `(deg_u, deg_v)`.
#[derive(Clone, Debug, PartialEq, Default)]
struct BiPoly(BTreeMap<(u32, u32), Rational>);

impl BiPoly {
    /// `α u + β v + γ`.
    fn linear(alpha: i64, beta: i64, gamma: &Rational) -> Self {
        let mut m = BTreeMap::new();
        for (key, c) in [
            ((1, 0), Rational::from_int(alpha)),
            ((0, 1), Rational::from_int(beta)),
            ((0, 0), gamma.clone()),
        ] {
            if !c.is_zero() {
                m.insert(key, c);
            }
        }
        BiPoly(m)
    }

    fn scale(&self, c: &Rational) -> Self {
        BiPoly(
            self.0
                .iter()
                .map(|(k, x)| (*k, x * c))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        )
    }

    fn mul(&self, other: &Self) -> Self {
        let mut m: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (&(a, b), x) in &self.0 {
            for (&(c, d), y) in &other.0 {
                *m.entry((a + c, b + d)).or_default() += &(x * y);
            }
        }
        m.retain(|_, x| !x.is_zero());
        BiPoly(m)
    }
}

/// Which summand of `y(y-κ)R(y) = y(y-κ)I - (y-κ)P + yQ`.
#[derive(Clone, Copy, Debug)]
enum Part {
    I,
    P,
    Q,
}

/// The three cleared coefficients of `R(y)` for `y = αu + βv`.
fn cleared_parts(alpha: i64, beta: i64, kappa: &Rational) -> [(Part, BiPoly); 3] {
    let y = BiPoly::linear(alpha, beta, &Rational::zero());
    let y_k = BiPoly::linear(alpha, beta, &-kappa);
    [
        (Part::I, y.mul(&y_k)),
        (Part::P, y_k.scale(&-Rational::one())),
        (Part::Q, y),
    ]
}

/// Embeddings of an operator on `C^N ⊗ C^N` into `(C^N)^{⊗3}`.
fn embed(m: &OpMatrix, n: usize, slots: (usize, usize)) -> OpMatrix {
    let id = OpMatrix::identity(n);
    match slots {
        (0, 1) => m.kron(&id),
        (1, 2) => id.kron(m),
        (0, 2) => {
            let mut out = OpMatrix::zeros(n * n * n);
            for (row, col, x) in m.nonzeros() {
                let (a, c) = (row / n, row % n);
                let (a2, c2) = (col / n, col % n);
                for b in 0..n {
                    out.set(a * n * n + b * n + c, a2 * n * n + b * n + c2, x.clone());
                }
            }
            out
        }
        _ => unreachable!("slots are (0,1), (0,2) or (1,2)"),
    }
}

fn part_op(fam: &RMatrixFamily, part: Part, slots: (usize, usize)) -> OpMatrix {
    let n = fam.n();
    match part {
        Part::I => OpMatrix::identity(n * n * n),
        Part::P => embed(fam.p(), n, slots),
        Part::Q => embed(fam.q(), n, slots),
    }
}

fn accumulate(acc: &mut BTreeMap<(u32, u32), OpMatrix>, poly: &BiPoly, op: &OpMatrix) {
    for (&key, c) in &poly.0 {
        let term = op.scale(c);
        match acc.get_mut(&key) {
            Some(m) => *m = m.try_add(&term).expect("same dimension"),
            None => {
                acc.insert(key, term);
            }
        }
    }
}

/// Yang–Baxter equation `R12(u-v) R13(u) R23(v) = R23(v) R13(u) R12(u-v)` as
/// a polynomial identity after clearing `(u-v)(u-v-κ) u(u-κ) v(v-κ)`.
pub fn check_ybe(fam: &RMatrixFamily) -> Verdict {
    let kappa = fam.kappa();
    let a12 = cleared_parts(1, -1, kappa);
    let b13 = cleared_parts(1, 0, kappa);
    let c23 = cleared_parts(0, 1, kappa);
    let ops12: Vec<OpMatrix> = a12.iter().map(|(p, _)| part_op(fam, *p, (0, 1))).collect();
    let ops13: Vec<OpMatrix> = b13.iter().map(|(p, _)| part_op(fam, *p, (0, 2))).collect();
    let ops23: Vec<OpMatrix> = c23.iter().map(|(p, _)| part_op(fam, *p, (1, 2))).collect();
    let mut lhs = BTreeMap::new();
    let mut rhs = BTreeMap::new();
    for (i, (_, pa)) in a12.iter().enumerate() {
        for (j, (_, pb)) in b13.iter().enumerate() {
            let pab = pa.mul(pb);
            for (k, (_, pc)) in c23.iter().enumerate() {
                let poly = pab.mul(pc);
                let l = ops12[i]
                    .try_mul(&ops13[j])
                    .and_then(|m| m.try_mul(&ops23[k]))
                    .expect("same dimension");
                let r = ops23[k]
                    .try_mul(&ops13[j])
                    .and_then(|m| m.try_mul(&ops12[i]))
                    .expect("same dimension");
                accumulate(&mut lhs, &poly, &l);
                accumulate(&mut rhs, &poly, &r);
            }
        }
    }
    let dim = fam.n().pow(3);
    let zero = OpMatrix::zeros(dim);
    let keys: std::collections::BTreeSet<(u32, u32)> =
        lhs.keys().chain(rhs.keys()).copied().collect();
    for key in &keys {
        let l = lhs.get(key).unwrap_or(&zero);
        let r = rhs.get(key).unwrap_or(&zero);
        if let Some((i, j)) = l.first_difference(r) {
            return Verdict::fail(
                Failure::new(format!("monomial u^{} v^{}", key.0, key.1))
                    .at(-(key.0 as i64), Some(-(key.1 as i64)))
                    .entry(i, j, l.get(i, j).clone(), r.get(i, j).clone()),
            );
        }
    }
    Verdict::pass(keys.len())
}

/// Independent check of the Yang–Baxter equation at seeded random rational
/// points `(u, v)` away from the poles.
pub fn check_ybe_at_points(fam: &RMatrixFamily, seed: u64, count: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = fam.n();
    let mut checked = 0;
    while checked < count {
        let u = Rational::new(rng.gen_range(-40..=40), rng.gen_range(1..=9));
        let v = Rational::new(rng.gen_range(-40..=40), rng.gen_range(1..=9));
        let x = &u - &v;
        let (Some(rx), Some(ru), Some(rv)) = (fam.r_at(&x), fam.r_at(&u), fam.r_at(&v)) else {
            continue;
        };
        let r12 = embed(&rx, n, (0, 1));
        let r13 = embed(&ru, n, (0, 2));
        let r23 = embed(&rv, n, (1, 2));
        let l = r12
            .try_mul(&r13)
            .and_then(|m| m.try_mul(&r23))
            .expect("same dimension");
        let r = r23
            .try_mul(&r13)
            .and_then(|m| m.try_mul(&r12))
            .expect("same dimension");
        if let Some((i, j)) = l.first_difference(&r) {
            return Verdict::fail(Failure::new(format!("at u={u}, v={v}")).entry(
                i,
                j,
                l.get(i, j).clone(),
                r.get(i, j).clone(),
            ));
        }
        checked += 1;
    }
    Verdict::pass(checked)
}

/// `u(u-κ)·R(u)` at one entry, as a polynomial.
#[cfg(test)]
fn cleared_entry_poly(fam: &RMatrixFamily, row: usize, col: usize) -> crate::exact::Poly {
    let f = fam.r_entry(row, col);
    let clear =
        crate::exact::Poly::linear(&Rational::zero()).mul(&crate::exact::Poly::linear(fam.kappa()));
    let (q, r) = f.num().mul(&clear).div_rem(f.den()).unwrap();
    assert!(r.is_zero());
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, pos: usize) -> Vec<Rational> {
        (0..n)
            .map(|i| {
                if i == pos {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }

    fn tensor(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| x * y))
            .collect()
    }

    fn apply(m: &OpMatrix, v: &[Rational]) -> Vec<Rational> {
        (0..m.dim())
            .map(|i| (0..m.dim()).fold(Rational::zero(), |acc, j| acc + m.get(i, j) * &v[j]))
            .collect()
    }

    fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    #[test]
    fn indexing_orders_labels() {
        assert_eq!(SoIndexing::new(3).labels(), &[-1, 0, 1]);
        assert_eq!(SoIndexing::new(4).labels(), &[-2, -1, 1, 2]);
        let idx = SoIndexing::new(5);
        for pos in 0..5 {
            assert_eq!(idx.label(idx.opposite(pos)), -idx.label(pos));
        }
    }

    #[test]
    fn flip_swaps_factors() {
        let p = build_p(3);
        // e_{-1} ⊗ e_0 ↦ e_0 ⊗ e_{-1}
        assert_eq!(
            apply(&p, &tensor(&e(3, 0), &e(3, 1))),
            tensor(&e(3, 1), &e(3, 0))
        );
        assert_eq!(p.trace(), Rational::from_int(3));
        assert_eq!(build_p(5).trace(), Rational::from_int(5));
    }

    #[test]
    fn q_on_basis_vectors() {
        let q = build_q(3);
        // labels -1, 0, 1 sit at positions 0, 1, 2
        let image = apply(&q, &tensor(&e(3, 2), &e(3, 0)));
        let expected = add(
            &add(&tensor(&e(3, 0), &e(3, 2)), &tensor(&e(3, 1), &e(3, 1))),
            &tensor(&e(3, 2), &e(3, 0)),
        );
        assert_eq!(image, expected);
        assert!(apply(&q, &tensor(&e(3, 2), &e(3, 2)))
            .iter()
            .all(Rational::is_zero));
    }

    #[test]
    fn structure_for_small_n() {
        for n in 3..=5 {
            let fam = RMatrixFamily::new(n).unwrap();
            for (name, v) in check_structure(&fam) {
                assert!(v.is_pass(), "N={n} {name}: {v:?}");
            }
        }
        assert!(RMatrixFamily::new(2).is_err());
    }

    #[test]
    fn r_matrix_entries() {
        let fam = RMatrixFamily::new(3).unwrap();
        assert_eq!(fam.kappa(), &Rational::half());
        // R(u)(e_1 ⊗ e_1) = (1 - 1/u) e_1 ⊗ e_1
        let d = fam.indexing().pair(2, 2);
        let expected =
            RatFunc::one().sub(&RatFunc::simple_pole(Rational::one(), &Rational::zero()));
        assert_eq!(fam.r_entry(d, d), expected);
        for col in 0..9 {
            if col != d {
                assert!(fam.r_entry(col, d).is_zero());
            }
        }
        // R(∞) = I
        for i in 0..9 {
            for j in 0..9 {
                let s = fam.r_entry(i, j).expand_at_infinity(0).unwrap();
                let want = if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                assert_eq!(s.coeff(0).unwrap(), want);
            }
        }
        // cleared entries are polynomials of degree <= 2
        assert_eq!(cleared_entry_poly(&fam, 0, 0).degree(), Some(2));
    }

    #[test]
    fn crossing_is_scalar() {
        let fam = RMatrixFamily::new(3).unwrap();
        let (_, scalar) = crossing_product(&fam);
        let s = scalar.expect("R(u)R(-u) is scalar");
        assert_eq!(
            s.expand_at_infinity(0).unwrap().coeff(0),
            Some(Rational::one())
        );
    }

    #[test]
    fn ybe_holds_and_oracle_agrees() {
        for n in 3..=5 {
            let fam = RMatrixFamily::new(n).unwrap();
            assert!(check_ybe(&fam).is_pass(), "N={n}");
            assert!(check_ybe_at_points(&fam, 0, 5).is_pass(), "N={n}");
        }
    }

    #[test]
    fn perturbed_q_breaks_ybe() {
        let fam = RMatrixFamily::new(3)
            .unwrap()
            .perturbed(true, 0, &Rational::one());
        let v = check_ybe(&fam);
        let f = v.failure().expect("perturbation must be detected");
        assert!(f.r.is_some() && f.row.is_some());
        assert!(check_ybe_at_points(&fam, 0, 5).is_fail());
    }
}
