use super::{Coefficient, ExactError, Rational, TruncSeries, POSITIVE_POWER_WINDOW};

/// Stand-in for "no truncation": a coefficient known at every order.
pub const INFINITE_ORDER: i64 = i64::MAX / 4;

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= INFINITE_ORDER || b >= INFINITE_ORDER {
        INFINITE_ORDER
    } else {
        (a + b).min(INFINITE_ORDER)
    }
}

/// Two-variable series `Σ X(r,s) u^{-r} v^{-s}`.
///
/// A coefficient is trustworthy when `r <= valid_u`, `s <= valid_v` and
/// `r + s <= valid_total`. Coefficients outside the stored rectangle are zero.
/// The stored rectangle never extends past `valid_u`/`valid_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<C> {
    dim: usize,
    lo_u: i64,
    hi_u: i64,
    lo_v: i64,
    hi_v: i64,
    valid_u: i64,
    valid_v: i64,
    valid_total: i64,
    coeffs: Vec<C>,
}

/// Outcome of comparing two two-variable series on their joint validity window.
#[derive(Clone, Debug, PartialEq)]
pub enum BiComparison<C> {
    Equal { checked: usize },
    Differ { r: i64, s: i64, lhs: C, rhs: C },
}

impl<C> BiComparison<C> {
    pub fn is_equal(&self) -> bool {
        matches!(self, BiComparison::Equal { .. })
    }
}

impl<C: Coefficient> BiSeries<C> {
    fn empty(dim: usize, valid_u: i64, valid_v: i64, valid_total: i64) -> Self {
        BiSeries {
            dim,
            lo_u: 0,
            hi_u: -1,
            lo_v: 0,
            hi_v: -1,
            valid_u,
            valid_v,
            valid_total,
            coeffs: Vec::new(),
        }
    }

    fn filled(
        dim: usize,
        (lo_u, hi_u): (i64, i64),
        (lo_v, hi_v): (i64, i64),
        (valid_u, valid_v, valid_total): (i64, i64, i64),
    ) -> Self {
        let hi_u = hi_u.min(valid_u);
        let hi_v = hi_v.min(valid_v);
        if hi_u < lo_u || hi_v < lo_v {
            return Self::empty(dim, valid_u, valid_v, valid_total);
        }
        let n = ((hi_u - lo_u + 1) * (hi_v - lo_v + 1)) as usize;
        BiSeries {
            dim,
            lo_u,
            hi_u,
            lo_v,
            hi_v,
            valid_u,
            valid_v,
            valid_total,
            coeffs: vec![C::zero_of(dim); n],
        }
    }

    /// The zero series, known exactly at every order.
    pub fn zero(dim: usize) -> Self {
        Self::empty(dim, INFINITE_ORDER, INFINITE_ORDER, INFINITE_ORDER)
    }

    pub fn one(dim: usize) -> Self {
        let mut out = Self::filled(
            dim,
            (0, 0),
            (0, 0),
            (INFINITE_ORDER, INFINITE_ORDER, INFINITE_ORDER),
        );
        out.coeffs[0] = C::one_of(dim);
        out
    }

    /// `a(u)`, constant in `v`.
    pub fn from_u(a: &TruncSeries<C>) -> Self {
        let mut out = Self::filled(
            a.dim(),
            (a.lo(), a.valid_order()),
            (0, 0),
            (a.valid_order(), INFINITE_ORDER, INFINITE_ORDER),
        );
        for (i, c) in a.coeffs().iter().enumerate() {
            let r = a.lo() + i as i64;
            *out.at_mut(r, 0) = c.clone();
        }
        out
    }

    /// `b(v)`, constant in `u`.
    pub fn from_v(b: &TruncSeries<C>) -> Self {
        let mut out = Self::filled(
            b.dim(),
            (0, 0),
            (b.lo(), b.valid_order()),
            (INFINITE_ORDER, b.valid_order(), INFINITE_ORDER),
        );
        for (j, c) in b.coeffs().iter().enumerate() {
            let s = b.lo() + j as i64;
            *out.at_mut(0, s) = c.clone();
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn valid_u(&self) -> i64 {
        self.valid_u
    }

    pub fn valid_v(&self) -> i64 {
        self.valid_v
    }

    pub fn valid_total(&self) -> i64 {
        self.valid_total
    }

    pub fn lo_u(&self) -> i64 {
        self.lo_u
    }

    pub fn lo_v(&self) -> i64 {
        self.lo_v
    }

    fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_valid_at(&self, r: i64, s: i64) -> bool {
        r <= self.valid_u && s <= self.valid_v && r.saturating_add(s) <= self.valid_total
    }

    #[inline]
    fn index(&self, r: i64, s: i64) -> Option<usize> {
        if self.is_empty() || r < self.lo_u || r > self.hi_u || s < self.lo_v || s > self.hi_v {
            None
        } else {
            let width = self.hi_v - self.lo_v + 1;
            Some(((r - self.lo_u) * width + (s - self.lo_v)) as usize)
        }
    }

    #[inline]
    fn at_mut(&mut self, r: i64, s: i64) -> &mut C {
        let idx = self.index(r, s).expect("inside stored range");
        &mut self.coeffs[idx]
    }

    /// Stored coefficient at `(r, s)`; `None` means zero (or not stored).
    #[inline]
    pub fn get(&self, r: i64, s: i64) -> Option<&C> {
        self.index(r, s).map(|i| &self.coeffs[i])
    }

    /// Coefficient of `u^{-r} v^{-s}`, `None` outside the validity window.
    pub fn coeff(&self, r: i64, s: i64) -> Option<C> {
        if !self.is_valid_at(r, s) {
            return None;
        }
        Some(
            self.get(r, s)
                .cloned()
                .unwrap_or_else(|| C::zero_of(self.dim)),
        )
    }

    fn entries(&self) -> impl Iterator<Item = (i64, i64, &C)> + '_ {
        let width = (self.hi_v - self.lo_v + 1).max(1);
        self.coeffs.iter().enumerate().map(move |(idx, c)| {
            let idx = idx as i64;
            (self.lo_u + idx / width, self.lo_v + idx % width, c)
        })
    }

    fn check_dim(&self, other: usize) -> Result<(), ExactError> {
        if self.dim != other {
            Err(ExactError::DimensionMismatch {
                left: self.dim,
                right: other,
            })
        } else {
            Ok(())
        }
    }

    /// Drop all-zero border rows and columns of the stored rectangle.
    pub fn trimmed(&self) -> Self {
        let mut bounds: Option<(i64, i64, i64, i64)> = None;
        for (r, s, c) in self.entries() {
            if c.is_zero() {
                continue;
            }
            bounds = Some(match bounds {
                None => (r, r, s, s),
                Some((a, b, x, y)) => (a.min(r), b.max(r), x.min(s), y.max(s)),
            });
        }
        let Some((lo_u, hi_u, lo_v, hi_v)) = bounds else {
            return Self::empty(self.dim, self.valid_u, self.valid_v, self.valid_total);
        };
        let mut out = Self::filled(
            self.dim,
            (lo_u, hi_u),
            (lo_v, hi_v),
            (self.valid_u, self.valid_v, self.valid_total),
        );
        for (r, s, c) in self.entries() {
            if let Some(idx) = out.index(r, s) {
                out.coeffs[idx] = c.clone();
            }
        }
        out
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Result<Self, ExactError> {
        self.check_dim(other.dim)?;
        let valid = (
            self.valid_u.min(other.valid_u),
            self.valid_v.min(other.valid_v),
            self.valid_total.min(other.valid_total),
        );
        let range = |a: &Self| (!a.is_empty()).then_some((a.lo_u, a.hi_u, a.lo_v, a.hi_v));
        let (lu, hu, lv, hv) = match (range(self), range(other)) {
            (None, None) => return Ok(Self::empty(self.dim, valid.0, valid.1, valid.2)),
            (Some(x), None) | (None, Some(x)) => x,
            (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1), a.2.min(b.2), a.3.max(b.3)),
        };
        let mut out = Self::filled(self.dim, (lu, hu), (lv, hv), valid);
        for (r, s, c) in self.entries() {
            if let Some(idx) = out.index(r, s) {
                out.coeffs[idx].add_assign_ref(c);
            }
        }
        for (r, s, c) in other.entries() {
            if c.is_zero() {
                continue;
            }
            if let Some(idx) = out.index(r, s) {
                if negate_other {
                    out.coeffs[idx] = out.coeffs[idx].minus(c);
                } else {
                    out.coeffs[idx].add_assign_ref(c);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.combine(other, false)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.combine(other, true)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for x in out.coeffs.iter_mut() {
            *x = x.scaled(c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// `X(u,v) · a(u)`.
    pub fn mul_right_u(&self, a: &TruncSeries<C>) -> Result<Self, ExactError> {
        self.check_dim(a.dim())?;
        let valid_u = sat_add(self.valid_u, a.lo()).min(sat_add(a.valid_order(), self.lo_u));
        let valid_total = sat_add(self.valid_total, a.lo());
        let valid = (valid_u, self.valid_v, valid_total);
        if self.is_empty() {
            return Ok(Self::empty(self.dim, valid.0, valid.1, valid.2));
        }
        let lo_u = self.lo_u + a.lo();
        if lo_u < -POSITIVE_POWER_WINDOW {
            return Err(ExactError::WindowExceeded(lo_u));
        }
        let hi_u = self.hi_u + a.valid_order();
        let mut out = Self::filled(self.dim, (lo_u, hi_u), (self.lo_v, self.hi_v), valid);
        for (r, s, x) in self.entries() {
            if x.is_zero() {
                continue;
            }
            for (i, ai) in a.coeffs().iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                let rr = r + a.lo() + i as i64;
                if let Some(idx) = out.index(rr, s) {
                    out.coeffs[idx].add_assign_ref(&x.times(ai));
                }
            }
        }
        Ok(out)
    }

    /// `X(u,v) · b(v)`.
    pub fn mul_right_v(&self, b: &TruncSeries<C>) -> Result<Self, ExactError> {
        self.check_dim(b.dim())?;
        let valid_v = sat_add(self.valid_v, b.lo()).min(sat_add(b.valid_order(), self.lo_v));
        let valid_total = sat_add(self.valid_total, b.lo());
        let valid = (self.valid_u, valid_v, valid_total);
        if self.is_empty() {
            return Ok(Self::empty(self.dim, valid.0, valid.1, valid.2));
        }
        let lo_v = self.lo_v + b.lo();
        if lo_v < -POSITIVE_POWER_WINDOW {
            return Err(ExactError::WindowExceeded(lo_v));
        }
        let hi_v = self.hi_v + b.valid_order();
        let mut out = Self::filled(self.dim, (self.lo_u, self.hi_u), (lo_v, hi_v), valid);
        for (r, s, x) in self.entries() {
            if x.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs().iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ss = s + b.lo() + j as i64;
                if let Some(idx) = out.index(r, ss) {
                    out.coeffs[idx].add_assign_ref(&x.times(bj));
                }
            }
        }
        Ok(out)
    }

    /// Multiply by `u`: the coefficient at `(r, s)` becomes `X(r+1, s)`.
    pub fn mul_u(&self) -> Result<Self, ExactError> {
        let t = self.trimmed();
        let valid = (
            sat_add(t.valid_u, -1),
            t.valid_v,
            sat_add(t.valid_total, -1),
        );
        if t.is_empty() {
            return Ok(Self::empty(t.dim, valid.0, valid.1, valid.2));
        }
        if t.lo_u - 1 < -POSITIVE_POWER_WINDOW {
            return Err(ExactError::WindowExceeded(t.lo_u - 1));
        }
        Ok(BiSeries {
            lo_u: t.lo_u - 1,
            hi_u: t.hi_u - 1,
            valid_u: valid.0,
            valid_total: valid.2,
            ..t
        })
    }

    /// Multiply by `v`.
    pub fn mul_v(&self) -> Result<Self, ExactError> {
        let t = self.trimmed();
        let valid = (
            t.valid_u,
            sat_add(t.valid_v, -1),
            sat_add(t.valid_total, -1),
        );
        if t.is_empty() {
            return Ok(Self::empty(t.dim, valid.0, valid.1, valid.2));
        }
        if t.lo_v - 1 < -POSITIVE_POWER_WINDOW {
            return Err(ExactError::WindowExceeded(t.lo_v - 1));
        }
        Ok(BiSeries {
            lo_v: t.lo_v - 1,
            hi_v: t.hi_v - 1,
            valid_v: valid.1,
            valid_total: valid.2,
            ..t
        })
    }

    /// `(u - v - c) · X`.
    pub fn mul_linear(&self, c: &Rational) -> Result<Self, ExactError> {
        self.mul_u()?
            .try_sub(&self.mul_v()?)?
            .try_sub(&self.scale(c))
    }

    /// `X / (u - v - c)` expanded as `Σ_{k>=0} (v + c)^k u^{-k-1} · X`, computed
    /// through `u^{-cap}` at most.
    ///
    /// `Y = X/(u-v-c)` satisfies `Y(r,s) = X(r-1,s) + Y(r-1,s+1) + c·Y(r-1,s)`.
    /// Positive powers of `v` appear in `Y`, so this path is not bound by the
    /// positive-power window; it exists to cross-check the cleared form.
    pub fn div_linear(&self, c: &Rational, cap: i64) -> Self {
        let t = self.trimmed();
        let valid_u = sat_add(t.valid_u, 1).min(cap);
        if t.is_empty() {
            return Self::empty(t.dim, valid_u, t.valid_v, sat_add(t.valid_total, 1));
        }
        let valid_total = sat_add(t.valid_total, 1).min(sat_add(t.valid_v, 1 + t.lo_u));
        let lo_u = t.lo_u + 1;
        let hi_u = valid_u;
        let lo_v = t.lo_v - (hi_u - 1 - t.lo_u).max(0);
        let hi_v = t.hi_v;
        let mut out = Self::filled(
            t.dim,
            (lo_u, hi_u),
            (lo_v, hi_v),
            (valid_u, t.valid_v, valid_total),
        );
        if out.is_empty() {
            return out;
        }
        for r in lo_u..=out.hi_u {
            for s in lo_v..=out.hi_v {
                let mut acc = t
                    .get(r - 1, s)
                    .cloned()
                    .unwrap_or_else(|| C::zero_of(t.dim));
                if let Some(y) = out.get(r - 1, s + 1) {
                    acc.add_assign_ref(y);
                }
                if !c.is_zero() {
                    if let Some(y) = out.get(r - 1, s) {
                        acc.add_assign_ref(&y.scaled(c));
                    }
                }
                *out.at_mut(r, s) = acc;
            }
        }
        out
    }

    /// Compare on the joint validity window, lexicographically by `(r, s)`.
    pub fn compare(&self, other: &Self) -> Result<BiComparison<C>, ExactError> {
        self.check_dim(other.dim)?;
        let zero = C::zero_of(self.dim);
        let range = |a: &Self| (!a.is_empty()).then_some((a.lo_u, a.hi_u, a.lo_v, a.hi_v));
        let (lu, hu, lv, hv) = match (range(self), range(other)) {
            (None, None) => return Ok(BiComparison::Equal { checked: 0 }),
            (Some(x), None) | (None, Some(x)) => x,
            (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1), a.2.min(b.2), a.3.max(b.3)),
        };
        let mut checked = 0;
        for r in lu..=hu {
            for s in lv..=hv {
                if !self.is_valid_at(r, s) || !other.is_valid_at(r, s) {
                    continue;
                }
                checked += 1;
                let a = self.get(r, s).unwrap_or(&zero);
                let b = other.get(r, s).unwrap_or(&zero);
                if a != b {
                    return Ok(BiComparison::Differ {
                        r,
                        s,
                        lhs: a.clone(),
                        rhs: b.clone(),
                    });
                }
            }
        }
        Ok(BiComparison::Equal { checked })
    }
}
