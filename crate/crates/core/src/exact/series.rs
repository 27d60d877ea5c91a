use std::ops::{Add, Mul, Neg, Sub};

use super::{binomial, Coefficient, ExactError, OpMatrix, Rational, POSITIVE_POWER_WINDOW};

/// A series `Σ_r a_r u^{-r}` known exactly for `lo <= r <= valid`.
///
/// `lo` may be negative (positive powers of `u`, at most
/// [`POSITIVE_POWER_WINDOW`] of them). Coefficients with `r < lo` are zero;
/// coefficients with `r > valid` are unknown and never read.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<C> {
    lo: i64,
    valid: i64,
    dim: usize,
    coeffs: Vec<C>,
}

impl<C: Coefficient> TruncSeries<C> {
    pub fn new(lo: i64, valid: i64, dim: usize, coeffs: Vec<C>) -> Result<Self, ExactError> {
        if lo < -POSITIVE_POWER_WINDOW {
            return Err(ExactError::WindowExceeded(lo));
        }
        let expected = (valid - lo + 1).max(0) as usize;
        if coeffs.len() != expected {
            return Err(ExactError::ExponentOutOfRange {
                exponent: lo + coeffs.len() as i64 - 1,
                lo,
                hi: valid,
            });
        }
        if let Some(c) = coeffs.iter().find(|c| c.dim() != dim) {
            return Err(ExactError::DimensionMismatch {
                left: dim,
                right: c.dim(),
            });
        }
        Ok(TruncSeries {
            lo,
            valid,
            dim,
            coeffs,
        })
    }

    /// Power series `Σ_{r>=0} coeffs[r] u^{-r}` valid through `coeffs.len() - 1`.
    pub fn from_coeffs(dim: usize, coeffs: Vec<C>) -> Result<Self, ExactError> {
        let valid = coeffs.len() as i64 - 1;
        TruncSeries::new(0, valid, dim, coeffs)
    }

    pub fn zero(dim: usize, valid: i64) -> Self {
        TruncSeries {
            lo: 0,
            valid,
            dim,
            coeffs: vec![C::zero_of(dim); (valid + 1).max(0) as usize],
        }
    }

    pub fn one(dim: usize, valid: i64) -> Self {
        Self::constant(C::one_of(dim), valid)
    }

    pub fn constant(c: C, valid: i64) -> Self {
        let dim = c.dim();
        let mut s = Self::zero(dim, valid);
        if valid >= 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c · u^{-r}`.
    pub fn monomial(c: C, r: i64, valid: i64) -> Result<Self, ExactError> {
        let dim = c.dim();
        let lo = r.min(0);
        let mut coeffs = vec![C::zero_of(dim); (valid - lo + 1).max(0) as usize];
        if r <= valid {
            coeffs[(r - lo) as usize] = c;
        }
        TruncSeries::new(lo, valid, dim, coeffs)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn valid_order(&self) -> i64 {
        self.valid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stored coefficients, `coeffs()[i]` being the coefficient of `u^{-(lo+i)}`.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `u^{-r}`; `None` beyond the validity order.
    pub fn coeff(&self, r: i64) -> Option<C> {
        if r > self.valid {
            None
        } else if r < self.lo {
            Some(C::zero_of(self.dim))
        } else {
            Some(self.coeffs[(r - self.lo) as usize].clone())
        }
    }

    #[inline]
    fn get(&self, r: i64) -> Option<&C> {
        if r < self.lo || r > self.valid {
            None
        } else {
            Some(&self.coeffs[(r - self.lo) as usize])
        }
    }

    /// Replace the coefficient of `u^{-r}` (used by mutation controls).
    pub fn with_coeff(&self, r: i64, c: C) -> Result<Self, ExactError> {
        if r > self.valid || r < self.lo {
            return Err(ExactError::ExponentOutOfRange {
                exponent: r,
                lo: self.lo,
                hi: self.valid,
            });
        }
        let mut out = self.clone();
        out.coeffs[(r - self.lo) as usize] = c;
        Ok(out)
    }

    pub fn truncate(&self, valid: i64) -> Self {
        let valid = valid.min(self.valid);
        let keep = (valid - self.lo + 1).max(0) as usize;
        TruncSeries {
            lo: self.lo,
            valid,
            dim: self.dim,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<(), ExactError> {
        if self.dim != other.dim {
            Err(ExactError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        } else {
            Ok(())
        }
    }

    fn combine(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let lo = self.lo.min(other.lo);
        let valid = self.valid.min(other.valid);
        let zero = C::zero_of(self.dim);
        let coeffs = (lo..=valid)
            .map(|r| f(self.get(r).unwrap_or(&zero), other.get(r).unwrap_or(&zero)))
            .collect();
        TruncSeries {
            lo,
            valid,
            dim: self.dim,
            coeffs,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_dim(other)?;
        Ok(self.combine(other, C::plus))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_dim(other)?;
        Ok(self.combine(other, C::minus))
    }

    pub fn neg(&self) -> Self {
        self.map(C::negated)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|x| x.scaled(c))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        TruncSeries {
            lo: self.lo,
            valid: self.valid,
            dim: self.dim,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Cauchy product `self · other` (order preserved).
    ///
    /// The result is valid through `min(valid_a + lo_b, valid_b + lo_a)`,
    /// which is `min(valid_a, valid_b)` for ordinary power series.
    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_dim(other)?;
        let lo = self.lo + other.lo;
        if lo < -POSITIVE_POWER_WINDOW {
            return Err(ExactError::WindowExceeded(lo));
        }
        let valid = (self.valid + other.lo).min(other.valid + self.lo);
        let mut coeffs = Vec::with_capacity((valid - lo + 1).max(0) as usize);
        for m in lo..=valid {
            let mut acc = C::zero_of(self.dim);
            for (i, a) in self.coeffs.iter().enumerate() {
                let r = self.lo + i as i64;
                if a.is_zero() {
                    continue;
                }
                if let Some(b) = other.get(m - r) {
                    if !b.is_zero() {
                        acc.add_assign_ref(&a.times(b));
                    }
                }
            }
            coeffs.push(acc);
        }
        Ok(TruncSeries {
            lo,
            valid,
            dim: self.dim,
            coeffs,
        })
    }

    /// Two-sided inverse by the recursion `b_0 = a_0^{-1}`,
    /// `b_m = -a_0^{-1} Σ_{i=1..m} a_i b_{m-i}`.
    pub fn invert(&self) -> Result<Self, ExactError> {
        for r in self.lo..0 {
            if !self.get(r).is_none_or(C::is_zero) {
                return Err(ExactError::PositivePowerTerm(-r));
            }
        }
        let a0 = self.coeff(0).ok_or(ExactError::NonInvertibleConstant)?;
        let a0_inv = a0.inverse().ok_or(ExactError::NonInvertibleConstant)?;
        let valid = self.valid;
        let mut b: Vec<C> = Vec::with_capacity((valid + 1) as usize);
        b.push(a0_inv.clone());
        for m in 1..=valid {
            let mut acc = C::zero_of(self.dim);
            for i in 1..=m {
                let ai = self.get(i).expect("within validity");
                if ai.is_zero() {
                    continue;
                }
                acc.add_assign_ref(&ai.times(&b[(m - i) as usize]));
            }
            b.push(a0_inv.times(&acc).negated());
        }
        Ok(TruncSeries {
            lo: 0,
            valid,
            dim: self.dim,
            coeffs: b,
        })
    }

    /// `a(u + c)`: the coefficient of `u^{-m}` is
    /// `Σ_{r<=m} a_r · binom(-r, m-r) · c^{m-r}`.
    pub fn shift(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut powers = vec![Rational::one()];
        for j in 1..=(self.valid - self.lo).max(0) {
            let next = &powers[(j - 1) as usize] * c;
            powers.push(next);
        }
        let mut coeffs = vec![C::zero_of(self.dim); self.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let r = self.lo + i as i64;
            for m in r..=self.valid {
                let j = m - r;
                let w = binomial(-r, j as u32) * &powers[j as usize];
                if w.is_zero() {
                    continue;
                }
                coeffs[(m - self.lo) as usize].add_assign_ref(&a.scaled(&w));
            }
        }
        TruncSeries {
            lo: self.lo,
            valid: self.valid,
            dim: self.dim,
            coeffs,
        }
    }

    /// Smallest exponent, within joint validity, at which the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        let lo = self.lo.min(other.lo);
        let valid = self.valid.min(other.valid);
        let zero = C::zero_of(self.dim);
        (lo..=valid).find(|&r| self.get(r).unwrap_or(&zero) != other.get(r).unwrap_or(&zero))
    }

    /// True when all coefficients are zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }
}

impl TruncSeries<Rational> {
    /// Embed a scalar series as `c(u)·I` acting on `C^dim`.
    pub fn lift(&self, dim: usize) -> TruncSeries<OpMatrix> {
        TruncSeries {
            lo: self.lo,
            valid: self.valid,
            dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| OpMatrix::scalar(dim, c))
                .collect(),
        }
    }
}

impl TruncSeries<OpMatrix> {
    /// `A ⊗ B` as a series on the tensor product space, `self` on the left
    /// (most significant) factor.
    pub fn kron(&self, other: &Self) -> Self {
        let lo = self.lo + other.lo;
        let valid = (self.valid + other.lo).min(other.valid + self.lo);
        let dim = self.dim * other.dim;
        let mut coeffs = vec![OpMatrix::zeros(dim); (valid - lo + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let r = self.lo + i as i64;
            for (j, b) in other.coeffs.iter().enumerate() {
                let s = other.lo + j as i64;
                if r + s > valid || b.is_zero() {
                    continue;
                }
                coeffs[(r + s - lo) as usize].add_assign_ref(&a.kron(b));
            }
        }
        TruncSeries {
            lo,
            valid,
            dim,
            coeffs,
        }
    }

    /// Coefficient-wise first difference including the offending entry.
    pub fn first_entry_difference(&self, other: &Self) -> Option<(i64, usize, usize)> {
        let r = self.first_difference(other)?;
        let a = self.coeff(r).expect("valid");
        let b = other.coeff(r).expect("valid");
        let (i, j) = a.first_difference(&b).expect("coefficients differ");
        Some((r, i, j))
    }
}

macro_rules! series_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<'a, C: Coefficient> $trait<&'a TruncSeries<C>> for &'a TruncSeries<C> {
            type Output = TruncSeries<C>;
            fn $method(self, rhs: &'a TruncSeries<C>) -> TruncSeries<C> {
                self.$try(rhs)
                    .unwrap_or_else(|e| panic!("series {}: {e}", stringify!($method)))
            }
        }
    };
}

series_binop!(Add, add, try_add);
series_binop!(Sub, sub, try_sub);
series_binop!(Mul, mul, try_mul);

impl<C: Coefficient> Neg for &TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn neg(self) -> TruncSeries<C> {
        TruncSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn scalar(cs: &[Rational]) -> TruncSeries<Rational> {
        TruncSeries::from_coeffs(1, cs.to_vec()).unwrap()
    }

    #[test]
    fn identity_product() {
        let s = scalar(&[r(1, 1), r(2, 3), r(-1, 5), r(7, 1)]);
        let one = TruncSeries::one(1, 3);
        assert_eq!(&one * &s, s);
        assert_eq!(&s * &one, s);
    }

    #[test]
    fn telescoping_product() {
        let k = 6;
        let a = TruncSeries::from_coeffs(1, {
            let mut v = vec![Rational::zero(); k + 1];
            v[0] = r(1, 1);
            v[1] = r(-1, 1);
            v
        })
        .unwrap();
        let geo = scalar(&vec![r(1, 1); k + 1]);
        let p = &a * &geo;
        // 1 - u^{-(K+1)} truncated to order K
        assert_eq!(p, TruncSeries::one(1, k as i64));
    }

    #[test]
    fn noncommutative_witness() {
        let a = OpMatrix::from_fn(2, |i, j| if (i, j) == (0, 1) { r(1, 1) } else { r(0, 1) });
        let b = a.transpose();
        let one = OpMatrix::identity(2);
        let sa = TruncSeries::from_coeffs(2, vec![one.clone(), a, OpMatrix::zeros(2)]).unwrap();
        let sb = TruncSeries::from_coeffs(2, vec![one, b, OpMatrix::zeros(2)]).unwrap();
        assert_ne!(&sa * &sb, &sb * &sa);
    }

    #[test]
    fn invert_geometric_and_nilpotent() {
        let k = 8;
        let mut v = vec![Rational::zero(); k + 1];
        v[0] = r(1, 1);
        v[1] = r(-1, 1);
        let inv = scalar(&v).invert().unwrap();
        assert_eq!(inv, scalar(&vec![r(1, 1); k + 1]));
        assert_eq!(
            TruncSeries::<Rational>::one(1, 4).invert().unwrap(),
            TruncSeries::one(1, 4)
        );

        let n = OpMatrix::from_fn(2, |i, j| if (i, j) == (0, 1) { r(1, 1) } else { r(0, 1) });
        let s = TruncSeries::from_coeffs(
            2,
            vec![
                OpMatrix::identity(2),
                n.clone(),
                OpMatrix::zeros(2),
                OpMatrix::zeros(2),
            ],
        )
        .unwrap();
        let expected = TruncSeries::from_coeffs(
            2,
            vec![
                OpMatrix::identity(2),
                n.neg(),
                OpMatrix::zeros(2),
                OpMatrix::zeros(2),
            ],
        )
        .unwrap();
        assert_eq!(s.invert().unwrap(), expected);
    }

    #[test]
    fn invert_rejects_singular_constant() {
        let s = scalar(&[r(0, 1), r(1, 1)]);
        assert_eq!(s.invert(), Err(ExactError::NonInvertibleConstant));
    }

    #[test]
    fn shift_of_inverse_u() {
        let s = scalar(&[r(0, 1), r(1, 1), r(0, 1), r(0, 1), r(0, 1)]);
        let sh = s.shift(&r(1, 2));
        assert_eq!(sh, scalar(&[r(0, 1), r(1, 1), r(-1, 2), r(1, 4), r(-1, 8)]));
        assert_eq!(
            TruncSeries::<Rational>::one(1, 5).shift(&r(3, 7)),
            TruncSeries::one(1, 5)
        );
    }

    #[test]
    fn shift_of_positive_powers() {
        // u^2 shifted by c: u^2 + 2c u + c^2
        let s = TruncSeries::monomial(r(1, 1), -2, 3).unwrap();
        let sh = s.shift(&r(3, 1));
        assert_eq!(sh.coeff(-2), Some(r(1, 1)));
        assert_eq!(sh.coeff(-1), Some(r(6, 1)));
        assert_eq!(sh.coeff(0), Some(r(9, 1)));
        assert_eq!(sh.coeff(1), Some(r(0, 1)));
    }

    #[test]
    fn product_validity_with_positive_powers() {
        let u = TruncSeries::monomial(r(1, 1), -1, 6).unwrap();
        let s = scalar(&vec![r(1, 1); 7]);
        let p = &u * &s;
        assert_eq!(p.lo(), -1);
        assert_eq!(p.valid_order(), 5);
        assert!(u.try_mul(&u).is_ok());
        let u3 = TruncSeries::monomial(r(1, 1), -2, 6).unwrap();
        assert_eq!(u3.try_mul(&u), Err(ExactError::WindowExceeded(-3)));
    }

    #[test]
    fn dimension_mismatch() {
        let a = TruncSeries::<OpMatrix>::one(2, 3);
        let b = TruncSeries::<OpMatrix>::one(3, 3);
        assert!(matches!(
            a.try_mul(&b),
            Err(ExactError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            a.try_add(&b),
            Err(ExactError::DimensionMismatch { .. })
        ));
    }
}
