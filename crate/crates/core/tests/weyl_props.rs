use polyprog::linalg::{unit, Subspace};
use polyprog::progression::{complexity_profile, relation_space, Progression};
use polyprog::weyl::{
    closure_subspaces, factor_projection, gp_block_basis, lower_bound_witness, multiple_average, AverageMode,
    Projection, SymReal, TorusCharacter, WeylSystem,
};
use proptest::prelude::*;

fn system(s: usize) -> WeylSystem {
    let base = [3, 5, 7, 11].iter().take(s).map(|&p| SymReal::sqrt(p)).collect();
    WeylSystem::new(SymReal::sqrt(2), base).unwrap()
}

fn max_gap(a: &[polyprog::weyl::Phase], b: &[polyprog::weyl::Phase]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dist(*y)).fold(0.0, f64::max)
}

#[test]
fn closed_form_matches_iteration() {
    for s in 1..=4 {
        let w = system(s);
        let mut p = w.orbit_point(0);
        for n in 1..=50 {
            p = w.step(&p);
            assert!(max_gap(&p, &w.orbit_point(n)) <= 1e-10, "s={} n={}", s, n);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cocycle(m in -1_000_000i128..1_000_000, n in 0usize..40, s in 1usize..=4) {
        let w = system(s);
        let mut p = w.orbit_point(m);
        for _ in 0..n {
            p = w.step(&p);
        }
        prop_assert!(max_gap(&p, &w.orbit_point(m + n as i128)) <= 1e-9);
    }

    #[test]
    fn projection_idempotent_and_multiplicative(
        f in prop::collection::vec(-3i64..=3, 3),
        g in prop::collection::vec(-3i64..=3, 3),
        k in 0usize..=3,
    ) {
        let chi = TorusCharacter::new(f.clone());
        let psi = TorusCharacter::new(g.clone());
        let p = factor_projection(&chi, k).unwrap();
        // The projection of a retained character is itself.
        if p == Projection::Retained {
            prop_assert_eq!(factor_projection(&chi, k).unwrap(), Projection::Retained);
        }
        // E(χψ | 𝒵_k) = ψ E(χ | 𝒵_k) for ψ measurable on 𝒵_k.
        if factor_projection(&psi, k).unwrap() == Projection::Retained {
            prop_assert_eq!(factor_projection(&chi.mul(&psi), k).unwrap(), p);
        }
        // Coarser factors retain less.
        if k > 0 && p == Projection::Killed {
            prop_assert_eq!(factor_projection(&chi, k - 1).unwrap(), Projection::Killed);
        }
    }
}

fn corpus() -> Vec<Progression> {
    let specs: &[&[&[i64]]] = &[
        &[&[0, 1], &[0, 2]],
        &[&[0, 1], &[0, 2], &[0, 3]],
        &[&[0, 1], &[0, 2], &[0, 0, 0, 1]],
        &[&[0, 1], &[0, 2], &[0, 0, 1]],
        &[&[0, 0, 1], &[0, 0, 2], &[0, 0, 0, 1], &[0, 0, 0, 2]],
        &[&[0, 0, 1]],
        &[&[0, 1], &[0, 0, 1]],
    ];
    specs.iter().map(|p| Progression::from_int_coeffs(p).unwrap()).collect()
}

#[test]
fn closure_contains_k_and_leibman_blocks() {
    for prog in corpus() {
        let cap = prog.default_cap();
        let profile = complexity_profile(&prog, cap).unwrap();
        for s in 1..=3 {
            let (gp, k) = gp_block_basis(&prog, s).unwrap();
            let ambient = s * (prog.t() + 1);
            let k_space = Subspace::span(ambient, &k);
            assert!(Subspace::span(ambient, &gp).contains_subspace(&k_space));
            for (i, c) in profile.iter().enumerate() {
                for l in c.value.min(s)..s {
                    let v = unit(ambient, l * (prog.t() + 1) + i);
                    assert!(k_space.contains(&v), "{} s={} i={} l={}", prog, s, i, l);
                }
            }
            let w = system(s);
            let closure = closure_subspaces(&prog, w.sequence(), &[]).unwrap();
            assert!(closure.contains_k);
            assert!(closure.subspace().contains_subspace(&k_space));
        }
    }
}

#[test]
fn witness_identity_across_relations() {
    for prog in corpus() {
        let space = relation_space(&prog, prog.default_cap()).unwrap();
        for rel in &space.basis {
            let Some(d) = rel.max_degree() else { continue };
            if d == 0 {
                continue;
            }
            let w = WeylSystem::standard(d, SymReal::sqrt(2)).unwrap();
            let report = lower_bound_witness(&prog, rel, &SymReal::golden_ratio(), &w).unwrap();
            assert!(report.passes(1e-9), "{} {}", prog, rel.render());
            let chars = report.characters.clone();
            let avg = multiple_average(w.sequence(), &chars, &prog, 40, AverageMode::TwoParameter).unwrap();
            assert!((avg.re - 1.0).abs() < 1e-9 && avg.im.abs() < 1e-9);
        }
    }
}

#[test]
fn trivial_characters_average_to_one() {
    let prog = Progression::from_int_coeffs(&[&[0, 1], &[0, 0, 1]]).unwrap();
    let w = system(2);
    let chars = vec![TorusCharacter::trivial(2); 3];
    for mode in [AverageMode::TwoParameter, AverageMode::SingleParameter] {
        let avg = multiple_average(w.sequence(), &chars, &prog, 25, mode).unwrap();
        assert!((avg.re - 1.0).abs() < 1e-12 && avg.im.abs() < 1e-12);
    }
}
