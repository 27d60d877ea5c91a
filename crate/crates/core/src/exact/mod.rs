//! Exact arithmetic: rationals, polynomials and rational functions in one
//! variable, dense rational matrices, and truncated series in `u^{-1}` (and
//! in `u^{-1}, v^{-1}`) with validity-order tracking.
//!
//! Nothing in this module uses floating point.

mod biseries;
mod matrix;
mod poly;
mod ratfunc;
mod rational;
mod series;

use std::fmt::Debug;

use thiserror::Error;

pub use biseries::{BiComparison, BiSeries, INFINITE_ORDER};
pub use matrix::OpMatrix;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{binomial, Rational};
pub use series::TruncSeries;

/// Largest positive power of `u` (or `v`) a series may carry.
pub const POSITIVE_POWER_WINDOW: i64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("constant term is not invertible")]
    NonInvertibleConstant,
    #[error("series has nonzero coefficient at positive power u^{0}")]
    PositivePowerTerm(i64),
    #[error("pole order {0} at infinity exceeds the positive-power window")]
    PoleOrderExceedsWindow(i64),
    #[error("positive-power window exceeded (lowest exponent {0})")]
    WindowExceeded(i64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("exponent {exponent} outside stored range [{lo}, {hi}]")]
    ExponentOutOfRange { exponent: i64, lo: i64, hi: i64 },
}

/// Ring elements usable as series coefficients. Multiplication need not be
/// commutative; `a.times(b)` always means `a·b` in that order.
///
/// Callers are responsible for matching dimensions; the series layer checks
/// them once per operation.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync {
    fn dim(&self) -> usize;
    fn zero_of(dim: usize) -> Self;
    fn one_of(dim: usize) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
    fn inverse(&self) -> Option<Self>;

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.plus(other);
    }
}

impl Coefficient for Rational {
    fn dim(&self) -> usize {
        1
    }
    fn zero_of(_dim: usize) -> Self {
        Rational::zero()
    }
    fn one_of(_dim: usize) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &Rational) -> Self {
        self * c
    }
    fn inverse(&self) -> Option<Self> {
        self.recip()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}
