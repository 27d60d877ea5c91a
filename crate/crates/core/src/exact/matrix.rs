use std::fmt;

use super::{Coefficient, ExactError, Rational};

/// Dense square matrix over the rationals.
///
/// Used both as the operator coefficient of a series (an element of
/// `End(C^D)`) and for the R-matrix building blocks `P`, `Q`. Multiplication
/// skips zero entries of the left factor, which keeps the permutation-like
/// and tensor-embedded operators cheap without a separate sparse type.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OpMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl OpMatrix {
    pub fn zeros(dim: usize) -> Self {
        OpMatrix {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = OpMatrix::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Rational::one();
        }
        m
    }

    pub fn scalar(dim: usize, c: &Rational) -> Self {
        let mut m = OpMatrix::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = c.clone();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        OpMatrix { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(ExactError::NotSquare);
        }
        Ok(OpMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entry_mut(&mut self, row: usize, col: usize) -> &mut Rational {
        &mut self.entries[row * self.dim + col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == OpMatrix::identity(self.dim)
    }

    /// `Some(c)` when the matrix is `c·I`.
    pub fn as_scalar(&self) -> Option<Rational> {
        let c = if self.dim == 0 {
            Rational::zero()
        } else {
            self.get(0, 0).clone()
        };
        (*self == OpMatrix::scalar(self.dim, &c)).then_some(c)
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let d = self.dim;
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(idx, v)| (idx / d, idx % d, v))
    }

    pub fn trace(&self) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.dim {
            acc += self.get(i, i);
        }
        acc
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

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_dim(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_dim(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn zip(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        OpMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.dim;
        let mut out = OpMatrix::zeros(d);
        for i in 0..d {
            let row = &self.entries[i * d..(i + 1) * d];
            let out_row = &mut out.entries[i * d..(i + 1) * d];
            for (k, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let brow = &other.entries[k * d..(k + 1) * d];
                for (o, b) in out_row.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return OpMatrix::zeros(self.dim);
        }
        OpMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|a| if a.is_zero() { Rational::zero() } else { a * c })
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        OpMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        OpMatrix::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    /// Kronecker product with `self` as the most significant factor:
    /// row `(a, b)` of the result is `a * other.dim + b`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = OpMatrix::zeros(n * m);
        for (i, j, a) in self.nonzeros() {
            for (k, l, b) in other.nonzeros() {
                out.set(i * m + k, j * m + l, a * b);
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, ExactError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self, ExactError> {
        self.try_mul(other)?.try_add(&other.try_mul(self)?)
    }

    /// Gauss–Jordan inverse over Q; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.dim;
        let mut a = self.clone();
        let mut inv = OpMatrix::identity(d);
        for col in 0..d {
            let pivot = (col..d).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..d {
                    a.entries.swap(pivot * d + j, col * d + j);
                    inv.entries.swap(pivot * d + j, col * d + j);
                }
            }
            let p = a.get(col, col).recip()?;
            for j in 0..d {
                let x = a.get(col, j) * &p;
                a.set(col, j, x);
                let y = inv.get(col, j) * &p;
                inv.set(col, j, y);
            }
            for r in 0..d {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..d {
                    let x = a.get(r, j) - &(&factor * a.get(col, j));
                    a.set(r, j, x);
                    let y = inv.get(r, j) - &(&factor * inv.get(col, j));
                    inv.set(r, j, y);
                }
            }
        }
        Some(inv)
    }

    /// First entry (row-major) where `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        self.entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|idx| (idx / self.dim, idx % self.dim))
    }
}

impl fmt::Debug for OpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OpMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Coefficient for OpMatrix {
    fn dim(&self) -> usize {
        self.dim
    }
    fn zero_of(dim: usize) -> Self {
        OpMatrix::zeros(dim)
    }
    fn one_of(dim: usize) -> Self {
        OpMatrix::identity(dim)
    }
    fn is_zero(&self) -> bool {
        OpMatrix::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }
    fn minus(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn inverse(&self) -> Option<Self> {
        OpMatrix::inverse(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> OpMatrix {
        OpMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn multiply_and_invert() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        assert!(a.try_mul(&inv).unwrap().is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kron_convention_left_most_significant() {
        let a = m(&[&[0, 1], &[0, 0]]);
        let id = OpMatrix::identity(2);
        let k = a.kron(&id);
        // e_{01} (x) I maps row (0,b) -> col (1,b)
        assert!(k.get(0, 2).is_one());
        assert!(k.get(1, 3).is_one());
        assert_eq!(k.nonzeros().count(), 2);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = OpMatrix::identity(2);
        let b = OpMatrix::identity(3);
        assert!(matches!(
            a.try_mul(&b),
            Err(ExactError::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn scalar_detection() {
        assert_eq!(
            OpMatrix::scalar(3, &Rational::new(1, 2)).as_scalar(),
            Some(Rational::new(1, 2))
        );
        assert_eq!(m(&[&[1, 0], &[0, 2]]).as_scalar(), None);
    }
}
