use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use polyprog::polycore::{rat, ratio, BiPoly, RationalScalar, UniPoly};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = RationalScalar> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn int_poly(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-9i64..=9, 0..=max_deg + 1).prop_map(|c| UniPoly::from_ints(&c))
}

fn integral_poly() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-4i64..=4, 1..=4).prop_map(|b| {
        let mut coeffs = vec![rat(0)];
        coeffs.extend(b.into_iter().map(rat));
        UniPoly::from_binomial_basis(&coeffs)
    })
}

proptest! {
    #[test]
    fn iterated_derivative_of_binomial_is_one(k in 0usize..8) {
        let mut p = UniPoly::binomial(k);
        for _ in 0..k {
            p = p.discrete_derivative();
        }
        prop_assert_eq!(p, UniPoly::constant(BigRational::one()));
    }

    #[test]
    fn binomial_round_trip(b in prop::collection::vec(rational(), 0..7)) {
        let p = UniPoly::from_binomial_basis(&b);
        let mut trimmed = b.clone();
        while trimmed.last().is_some_and(|c| num_traits::Zero::is_zero(c)) {
            trimmed.pop();
        }
        prop_assert_eq!(p.to_binomial_basis(), trimmed);
        prop_assert_eq!(UniPoly::from_binomial_basis(&p.to_binomial_basis()), p);
    }

    #[test]
    fn derivative_preserves_integrality_up_to_constant(p in integral_poly()) {
        let d = p.discrete_derivative();
        let corrected = &d - &UniPoly::constant(d.eval_int(0));
        prop_assert!(corrected.is_integral());
    }

    #[test]
    fn derivative_shifts_binomial_view(p in int_poly(6)) {
        let b = p.to_binomial_basis();
        let db = p.discrete_derivative().to_binomial_basis();
        let expected: Vec<RationalScalar> = b.iter().skip(1).cloned().collect();
        prop_assert_eq!(db, expected);
    }

    #[test]
    fn views_agree_at_integer_points(p in int_poly(6), pts in prop::collection::vec(-1000i64..1000, 100)) {
        let b = p.to_binomial_basis();
        for u in pts {
            let via_binomial = b.iter().enumerate().fold(rat(0), |acc, (k, c)| {
                acc + c * BigRational::from_integer(polyprog::polycore::binomial_bigint(&BigInt::from(u), k))
            });
            prop_assert_eq!(p.eval_int(u), via_binomial);
        }
    }

    #[test]
    fn bipoly_binomial_view_round_trip(terms in prop::collection::vec(((0u32..4, 0u32..5), rational()), 0..8)) {
        let r = BiPoly::from_terms(terms);
        prop_assert_eq!(BiPoly::from_binomial_view(&r.to_binomial_view()), r);
    }

    #[test]
    fn partial_derivative_lowers_shifted_binomial(p in integral_poly(), k in 1usize..5) {
        prop_assert_eq!(
            BiPoly::shifted_binomial(&p, k).partial_discrete_derivative_x(),
            BiPoly::shifted_binomial(&p, k - 1)
        );
    }

    #[test]
    fn compose_shift_matches_evaluation(q in int_poly(3), p in integral_poly(), x in -20i64..20, y in -20i64..20) {
        let lhs = BiPoly::compose_shift(&q, &p).eval_int(x, y);
        let rhs = q.eval(&(rat(x) + p.eval_int(y)));
        prop_assert_eq!(lhs, rhs);
    }
}
