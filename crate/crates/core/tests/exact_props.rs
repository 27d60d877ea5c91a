use proptest::prelude::*;
use yangian::exact::{OpMatrix, Poly, RatFunc, Rational, TruncSeries};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

fn matrix(dim: usize) -> impl Strategy<Value = OpMatrix> {
    prop::collection::vec(rational(), dim * dim)
        .prop_map(move |v| OpMatrix::from_fn(dim, |i, j| v[i * dim + j].clone()))
}

/// `1 + a_1 u^{-1} + ... + a_K u^{-K}` with matrix coefficients.
fn unit_series(dim: usize, order: usize) -> impl Strategy<Value = TruncSeries<OpMatrix>> {
    prop::collection::vec(matrix(dim), order).prop_map(move |tail| {
        let mut coeffs = vec![OpMatrix::identity(dim)];
        coeffs.extend(tail);
        TruncSeries::from_coeffs(dim, coeffs).unwrap()
    })
}

fn series(dim: usize, order: usize) -> impl Strategy<Value = TruncSeries<OpMatrix>> {
    prop::collection::vec(matrix(dim), order + 1)
        .prop_map(move |c| TruncSeries::from_coeffs(dim, c).unwrap())
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 0..=max_deg + 1).prop_map(Poly::new)
}

/// Rational functions that expand at infinity within the positive-power window.
fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(2), prop::collection::vec(rational(), 1..=2)).prop_map(|(num, roots)| {
        let den = roots
            .iter()
            .fold(Poly::one(), |acc, r| acc.mul(&Poly::linear(r)));
        RatFunc::new(num, den).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Rational::zero());
        if let Some(inv) = a.recip() {
            prop_assert_eq!(&a * &inv, Rational::one());
        }
        // canonical form survives a print/parse cycle
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn series_product_is_associative(
        a in series(2, 4), b in series(2, 4), c in series(2, 4)
    ) {
        let left = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let right = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn shift_is_a_ring_homomorphism(a in series(2, 5), b in series(2, 5), c in rational()) {
        let lhs = a.try_mul(&b).unwrap().shift(&c);
        let rhs = a.shift(&c).try_mul(&b.shift(&c)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.shift(&c).shift(&-&c), a);
    }

    #[test]
    fn expansion_is_multiplicative(f in ratfunc(), g in ratfunc()) {
        let fg = f.mul(&g);
        let order = 6;
        if let (Ok(ef), Ok(eg), Ok(efg)) = (
            f.expand_at_infinity(order),
            g.expand_at_infinity(order),
            fg.expand_at_infinity(order),
        ) {
            let prod = ef.try_mul(&eg).unwrap();
            let common = prod.valid_order().min(efg.valid_order());
            for r in efg.lo().max(prod.lo())..=common {
                prop_assert_eq!(prod.coeff(r), efg.coeff(r), "u^-{}", r);
            }
        }
    }

    #[test]
    fn ratfunc_is_normalized(f in ratfunc()) {
        prop_assert_eq!(f.den().leading().cloned(), Some(Rational::one()));
        let g = f.num().gcd(f.den());
        prop_assert!(g.degree().unwrap_or(0) == 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn inverse_is_two_sided(a in (1usize..=9).prop_flat_map(|d| unit_series(d, 3))) {
        let inv = a.invert().unwrap();
        let one = TruncSeries::one(a.dim(), a.valid_order());
        prop_assert_eq!(a.try_mul(&inv).unwrap(), one.clone());
        prop_assert_eq!(inv.try_mul(&a).unwrap(), one);
    }
}
