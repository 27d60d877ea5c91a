use std::fmt;

use super::{ExactError, Poly, Rational, TruncSeries, POSITIVE_POWER_WINDOW};

/// Rational function `num/den` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        let lead = den.leading().expect("nonzero").recip().expect("nonzero");
        Ok(RatFunc {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    /// `c / (u - root)`.
    pub fn simple_pole(c: Rational, root: &Rational) -> Self {
        RatFunc::new(Poly::constant(c), Poly::linear(root)).expect("nonzero denominator")
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("product of nonzero denominators")
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("product of nonzero denominators")
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// `f(u + c)`.
    pub fn shift(&self, c: &Rational) -> RatFunc {
        RatFunc::new(self.num.shift(c), self.den.shift(c)).expect("nonzero denominator")
    }

    /// `f(-u)`.
    pub fn reflect(&self) -> RatFunc {
        let flip = |p: &Poly| {
            Poly::new(
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                    .collect(),
            )
        };
        RatFunc::new(flip(&self.num), flip(&self.den)).expect("nonzero denominator")
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Laurent expansion at `u = ∞`, exact through `u^{-order}`.
    ///
    /// With `w = u^{-1}`, `num(u) = u^{dn} ñ(w)` and `den(u) = u^{dd} d̃(w)`,
    /// so `f = w^{dd-dn} ñ(w)/d̃(w)` where `d̃(0) = 1` since `den` is monic.
    pub fn expand_at_infinity(&self, order: i64) -> Result<TruncSeries<Rational>, ExactError> {
        if self.num.is_zero() {
            return Ok(TruncSeries::zero(1, order));
        }
        let dn = self.num.degree().expect("nonzero") as i64;
        let dd = self.den.degree().expect("nonzero") as i64;
        let shift = dd - dn;
        if -shift > POSITIVE_POWER_WINDOW {
            return Err(ExactError::PoleOrderExceedsWindow(-shift));
        }
        let lo = shift.min(0);
        let rev = |p: &Poly, deg: i64| -> Vec<Rational> {
            (0..=deg).map(|i| p.coeff((deg - i) as usize)).collect()
        };
        let nt = rev(&self.num, dn);
        let dt = rev(&self.den, dd);
        // q = ñ / d̃ as a power series in w, needed through index order - shift
        let needed = order - shift;
        let mut q: Vec<Rational> = Vec::new();
        for i in 0..=needed.max(-1) {
            let mut acc = nt.get(i as usize).cloned().unwrap_or_else(Rational::zero);
            for j in 1..=i.min(dd) {
                acc -= &(&dt[j as usize] * &q[(i - j) as usize]);
            }
            q.push(acc);
        }
        let mut coeffs = vec![Rational::zero(); (order - lo + 1).max(0) as usize];
        for (i, c) in q.into_iter().enumerate() {
            let e = shift + i as i64;
            if e <= order {
                coeffs[(e - lo) as usize] = c;
            }
        }
        TruncSeries::new(lo, order, 1, coeffs)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}]/[{}]", self.num, self.den)
        }
    }
}
