use num_rational::BigRational;
use num_traits::Zero;
use polyprog::linalg::{QVec, Subspace};
use polyprog::oracle::agrees_with_oracle;
use polyprog::polycore::{rat, BiPoly, UniPoly};
use polyprog::progression::{
    coeff_space, graded_spaces, homogeneous_relations, is_homogeneous, relation_space, Progression,
};
use proptest::prelude::*;

fn integral_poly(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-2i64..=2, 1..=max_deg).prop_map(|b| {
        let mut coeffs = vec![rat(0)];
        coeffs.extend(b.into_iter().map(rat));
        UniPoly::from_binomial_basis(&coeffs)
    })
}

fn progression(max_t: usize, max_deg: usize) -> impl Strategy<Value = Progression> {
    prop::collection::vec(integral_poly(max_deg), 1..=max_t).prop_filter_map("invalid", |ps| Progression::new(ps).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relations_expand_to_zero(p in progression(3, 3)) {
        let space = relation_space(&p, p.default_cap().min(5)).unwrap();
        for r in &space.basis {
            prop_assert!(r.expand(&p).is_zero());
            for i in 1..=p.t() {
                prop_assert!(r.qs()[i].coeff(0).is_zero());
            }
        }
    }

    #[test]
    fn homogeneous_relations_vanish_in_binomial_form(p in progression(4, 3), k in 1usize..4) {
        let terms = p.terms();
        for a in homogeneous_relations(&p, k).unwrap() {
            for j in 1..=k {
                let sum = terms.iter().zip(&a).fold(BiPoly::zero(), |acc, (q, ai)| {
                    &acc + &BiPoly::shifted_binomial(q, j).scale(ai)
                });
                prop_assert!(sum.is_zero());
            }
        }
    }

    #[test]
    fn direct_sum_dimension_identity(p in progression(3, 2)) {
        let cap = p.default_cap().min(5);
        let g = graded_spaces(&p, cap, cap).unwrap();
        let homog = is_homogeneous(&p, cap).unwrap().homogeneous;
        prop_assert_eq!(homog, g.w_c_total.is_empty());
        for k in 1..=cap {
            let prime: usize = g.degrees[..k].iter().map(|d| d.t_prime_k).sum();
            prop_assert_eq!(g.dim_v(k), prime + g.dim_wc_in_v(k));
            let d = &g.degrees[k - 1];
            prop_assert_eq!(d.w_c.len() + d.t_prime_k, d.t_k);
        }
    }

    #[test]
    fn tau_is_full_rank_and_reconstructs(p in progression(4, 3), k in 1usize..4) {
        let c = coeff_space(&p, k).unwrap();
        let span = c.subspace();
        prop_assert_eq!(span.dim(), c.basis.len());
        let terms = p.terms();
        for (i, q) in terms.iter().enumerate() {
            let sum = c.tau_pairs.iter().fold(BiPoly::zero(), |acc, (b, v)| &acc + &b.scale(&v[i]));
            prop_assert_eq!(sum, BiPoly::shifted_binomial(q, k));
        }
    }

    #[test]
    fn coefficient_spaces_are_submultiplicative(p in progression(3, 3), i in 1usize..3, j in 1usize..3) {
        let n = p.t() + 1;
        let pi = coeff_space(&p, i).unwrap().basis;
        let pj = coeff_space(&p, j).unwrap().basis;
        let products: Vec<QVec> = pi
            .iter()
            .flat_map(|u| pj.iter().map(move |v| u.iter().zip(v).map(|(a, b)| a * b).collect::<QVec>()))
            .collect();
        let prod = Subspace::span(n, &products);
        for v in coeff_space(&p, i + j).unwrap().basis {
            prop_assert!(prod.contains(&v));
        }
    }

    #[test]
    fn relation_space_matches_oracle(p in progression(3, 3), cap in 1usize..=3) {
        let space = relation_space(&p, cap).unwrap();
        prop_assert!(agrees_with_oracle(&p, &space));
    }

    #[test]
    fn homogeneity_matches_ansatz(p in progression(3, 3)) {
        let cap = p.default_cap().min(5);
        let h = is_homogeneous(&p, cap).unwrap();
        let ansatz = polyprog::progression::homogeneous_ansatz_dimension(&p, cap);
        prop_assert_eq!(h.homogeneous, relation_space(&p, cap).unwrap().dim() == ansatz);
        if let Some(w) = h.witness {
            prop_assert!(w.relation.expand(&p).is_zero());
            prop_assert!(!w.element.is_zero());
        }
    }
}

#[test]
fn coefficient_space_contains_ones() {
    let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 0, 1]]).unwrap();
    let ones: QVec = vec![BigRational::from_integer(1.into()); 3];
    assert!(coeff_space(&p, 1).unwrap().subspace().contains(&ones));
}
