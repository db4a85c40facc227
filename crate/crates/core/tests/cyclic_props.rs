use num_complex::Complex64;
use polyprog::cyclic::*;
use polyprog::polycore::UniPoly;
use polyprog::progression::{relation_space, Progression, Relation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn quartic_prog() -> Progression {
    Progression::from_int_coeffs(&[&[0, 0, 1], &[0, 0, 2], &[0, 0, 0, 1], &[0, 0, 0, 2]]).unwrap()
}

/// Brute-force count of `x, x+y, x+2y` all even, as an independent oracle.
fn even_ap_oracle(n: usize) -> f64 {
    let mut hits = 0usize;
    for x in 0..n {
        for y in 0..n {
            if [x, (x + y) % n, (x + 2 * y) % n].iter().all(|v| v % 2 == 0) {
                hits += 1;
            }
        }
    }
    hits as f64 / (n * n) as f64
}

#[test]
fn count_matches_enumeration() {
    let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2]]).unwrap();
    for n in [11usize, 101] {
        let a = Subset::from_residues(n, (0..n as u64).filter(|v| v % 2 == 0)).unwrap();
        let f = a.indicator();
        let got = count_operator(&[f.clone(), f.clone(), f], &p).unwrap();
        assert!((got.re - even_ap_oracle(n)).abs() < 1e-12 && got.im.abs() < 1e-12);
    }
}

#[test]
fn linear_count_independent_forms_factorize() {
    let a = Subset::bernoulli(23, 0.4, 3);
    let f = a.indicator();
    let got = linear_count_operator(&[f.clone(), f.clone(), f], &[vec![0, 0], vec![1, 0], vec![0, 1]], DEFAULT_BUDGET)
        .unwrap();
    assert!((got.re - a.density().powi(3)).abs() < 1e-12);
    let one = Signal::constant(101, c(1.0, 0.0));
    let big = linear_count_operator(&[one.clone(), one], &[vec![1, 1, 1, 1, 1], vec![0; 5]], 1 << 20);
    assert!(big.is_err());
}

#[test]
fn compare_trivial_sets() {
    let p = quartic_prog();
    let full = compare_poly_vs_linear(&Subset::full(101), &p, 4).unwrap();
    assert!(full.difference < 1e-12);
    let empty = compare_poly_vs_linear(&Subset::empty(101), &p, 4).unwrap();
    assert!(empty.poly_count.norm() < 1e-15 && empty.linear_count.norm() < 1e-15);
    let quad = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 1]]).unwrap();
    assert!(compare_poly_vs_linear(&Subset::full(101), &quad, 3).is_err());
}

#[test]
fn popular_differences_match_naive_loop() {
    let p = quartic_prog();
    let n = 101usize;
    let a = Subset::bernoulli(n, 0.5, 11);
    let r = popular_differences(&a, &p, 0.02).unwrap();
    let alpha = a.len() as f64 / n as f64;
    let threshold = (alpha.powi(5) - 0.02) * n as f64;
    let mut naive = Vec::new();
    for d in 0..n {
        let shifts: Vec<usize> = p
            .polys()
            .iter()
            .map(|q| q.eval_int(d as i64).to_integer().to_string().parse::<u128>().unwrap() as usize % n)
            .collect();
        let mut count = 0;
        for x in 0..n {
            if a.contains(x) && shifts.iter().all(|&s| a.contains((x + n - s) % n)) {
                count += 1;
            }
        }
        if count as f64 > threshold {
            naive.push(d);
        }
    }
    assert_eq!(r.qualifying, naive);
    assert!(r.qualifying.contains(&0));
}

#[test]
fn obstruction_product_is_one_pointwise() {
    let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 1]]).unwrap();
    let space = relation_space(&p, 2).unwrap();
    let rel = space.basis.iter().find(|r| r.max_degree() == Some(2)).unwrap();
    let n = 101usize;
    let fs = build_obstruction(&p, rel, n as u64, 7).unwrap();
    let tables: Vec<Vec<usize>> = p.terms().iter().map(|q| poly_table(q, n)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for _ in 0..1000 {
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let prod = fs.iter().zip(&tables).fold(c(1.0, 0.0), |acc, (f, t)| acc * f.values()[(x + t[y]) % n]);
        assert!((prod - c(1.0, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn obstruction_of_zero_relation_is_trivial() {
    let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2]]).unwrap();
    let zero = Relation::new(&p, vec![UniPoly::zero(); 3]).unwrap();
    let fs = build_obstruction(&p, &zero, 101, 1).unwrap();
    assert!(fs.iter().all(|f| f.values().iter().all(|v| (v - c(1.0, 0.0)).norm() < 1e-15)));
}

fn signal_strategy(n: usize) -> impl Strategy<Value = Signal> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_map(|v| Signal::new(v.into_iter().map(|(a, b)| c(a, b) * 0.7).collect()).unwrap())
}

fn modulus() -> impl Strategy<Value = usize> {
    prop_oneof![Just(16usize), Just(23), Just(31)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gowers_monotone((f, _) in modulus().prop_flat_map(|n| (signal_strategy(n), Just(n)))) {
        let u1 = gowers_norm(&f, 1).unwrap();
        let u2 = gowers_norm(&f, 2).unwrap();
        let u3 = gowers_norm(&f, 3).unwrap();
        prop_assert!(u1 <= u2 + 1e-9 && u2 <= u3 + 1e-9);
    }

    #[test]
    fn u2_recursion_matches_fft(f in modulus().prop_flat_map(signal_strategy)) {
        let a = gowers_norm(&f, 2).unwrap();
        let b = gowers_u2_fourier(&f);
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-300));
    }

    #[test]
    fn gowers_invariances(
        f in modulus().prop_flat_map(signal_strategy),
        re in -2.0f64..2.0, im in -2.0f64..2.0, xi in 0usize..40, h in 0usize..40, s in 1usize..4,
    ) {
        let n = f.modulus();
        let base = gowers_norm(&f, s).unwrap();
        let k = c(re, im);
        prop_assert!((gowers_norm(&f.scale(k), s).unwrap() - k.norm() * base).abs() < 1e-9);
        prop_assert!((gowers_norm(&f.translate(h), s).unwrap() - base).abs() < 1e-9);
        let chi = Signal::phase(n, |x| (xi * x) as u64);
        let b2 = gowers_norm(&f, 2).unwrap();
        prop_assert!((gowers_norm(&f.pointwise(&chi).unwrap(), 2).unwrap() - b2).abs() < 1e-9);
    }

    #[test]
    fn count_is_multilinear(seed in any::<u64>(), slot in 0usize..3) {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 0, 1]]).unwrap();
        let n = 29;
        let fs: Vec<Signal> = (0..3).map(|i| Signal::random_disk(n, seed.wrapping_add(i))).collect();
        let g = Signal::random_disk(n, seed.wrapping_add(99));
        let mut with_f = fs.clone();
        let mut with_g = fs.clone();
        with_g[slot] = g.clone();
        with_f[slot] = fs[slot].add(&g).unwrap();
        let lhs = count_operator(&with_f, &p).unwrap();
        let rhs = count_operator(&fs, &p).unwrap() + count_operator(&with_g, &p).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9);
    }
}
