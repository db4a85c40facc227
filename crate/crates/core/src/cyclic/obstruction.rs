use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::count::count_operator;
use super::gowers::gowers_norm;
use super::signal::{is_prime, Signal};
use crate::error::{Error, Result};
use crate::polycore::lcm_of_denominators;
use crate::progression::{relation_space, Progression, Relation};

/// Phase signals `f_i(u) = e(m · (L·Q_i(u) mod N) / N)` with `L` clearing every denominator of the relation.
pub fn build_obstruction(prog: &Progression, rel: &Relation, n: u64, m: u64) -> Result<Vec<Signal>> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    if m % n == 0 {
        return Err(Error::InvalidArgument("multiplier m must be a nonzero residue".into()));
    }
    if rel.qs().len() != prog.t() + 1 {
        return Err(Error::InvalidArgument("relation does not match the progression".into()));
    }
    let l = lcm_of_denominators(rel.qs().iter().flat_map(|q| q.coeffs()));
    let nb = BigInt::from(n);
    if !l.gcd(&nb).is_one() {
        return Err(Error::DenominatorNotCoprime { lcm: l.to_string(), modulus: n });
    }
    let m = m % n;
    let signals = rel
        .qs()
        .iter()
        .map(|q| {
            let coeffs: Vec<u64> = q
                .coeffs()
                .iter()
                .map(|c| {
                    let z = (c * &l).to_integer().mod_floor(&nb);
                    z.to_u64().expect("residue fits")
                })
                .collect();
            Signal::phase(n as usize, |u| {
                let v = coeffs.iter().rev().fold(0u128, |acc, &c| (acc * u as u128 + c as u128) % n as u128);
                ((v * m as u128) % n as u128) as u64
            })
        })
        .collect();
    Ok(signals)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    /// `random`, `obstruction` or `zero`.
    pub kind: String,
    /// Order `k` of the reported norm `‖f_i‖_{U^k}`.
    pub order: usize,
    pub norm: f64,
    pub count_abs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeTable {
    pub index: usize,
    pub s: usize,
    pub n: u64,
    pub seed: u64,
    pub relation: Option<String>,
    pub rows: Vec<ProbeRow>,
}

/// Tabulates `(‖f_i‖, |count|)` with structured signals in every other slot.
///
/// The structured signals come from the basis relation of largest degree at
/// index `i`; slot `i` receives random ±1 signals, the relation's own
/// obstruction and the zero signal.
pub fn true_complexity_probe(
    prog: &Progression,
    i: usize,
    s: usize,
    trials: usize,
    n: u64,
    seed: u64,
    cap: usize,
) -> Result<ProbeTable> {
    let t = prog.t();
    if i > t {
        return Err(Error::IndexOutOfRange { index: i, t });
    }
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    let space = relation_space(prog, cap)?;
    let rel = space.basis.iter().filter(|r| r.degree_profile()[i].is_some()).max_by_key(|r| r.degree_profile()[i]);
    let nu = n as usize;
    let mut fs = match rel {
        Some(r) => build_obstruction(prog, r, n, 1)?,
        None => vec![Signal::constant(nu, 1.0.into()); t + 1],
    };
    let structured = fs[i].clone();
    let mut rows = Vec::with_capacity(trials + 2);
    for trial in 0..trials {
        let f = Signal::random_pm1(nu, seed.wrapping_add(trial as u64));
        let norm = gowers_norm(&f, s + 1)?;
        fs[i] = f;
        rows.push(ProbeRow { kind: "random".into(), order: s + 1, norm, count_abs: count_operator(&fs, prog)?.norm() });
    }
    let order = s.max(1);
    rows.push(ProbeRow {
        kind: "obstruction".into(),
        order,
        norm: gowers_norm(&structured, order)?,
        count_abs: {
            fs[i] = structured;
            count_operator(&fs, prog)?.norm()
        },
    });
    fs[i] = Signal::constant(nu, 0.0.into());
    rows.push(ProbeRow { kind: "zero".into(), order: s + 1, norm: 0.0, count_abs: count_operator(&fs, prog)?.norm() });
    Ok(ProbeTable { index: i, s, n, seed, relation: rel.map(Relation::render), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{ratio, UniPoly};
    use num_complex::Complex64;

    fn three_ap() -> (Progression, Relation) {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2]]).unwrap();
        let r = Relation::new(&p, vec![UniPoly::from_ints(&[0, 1]), UniPoly::from_ints(&[0, -2]), UniPoly::from_ints(&[0, 1])])
            .unwrap();
        (p, r)
    }

    #[test]
    fn linear_obstruction_is_characters() {
        let (p, r) = three_ap();
        let fs = build_obstruction(&p, &r, 101, 1).unwrap();
        assert!((count_operator(&fs, &p).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        for f in &fs {
            assert!((gowers_norm(f, 2).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn quadratic_obstruction() {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 1]]).unwrap();
        let space = relation_space(&p, 2).unwrap();
        let r = space.basis.iter().find(|r| r.max_degree() == Some(2)).unwrap();
        let fs = build_obstruction(&p, r, 101, 1).unwrap();
        assert!((count_operator(&fs, &p).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!(fs[0].mean().norm() <= 0.2);
        assert!(build_obstruction(&p, r, 100, 1).is_err());
        assert!(build_obstruction(&p, r, 101, 0).is_err());
    }

    #[test]
    fn denominator_must_be_coprime() {
        // (1/2)u^2 style coefficients clash with N = 2.
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 1]]).unwrap();
        let space = relation_space(&p, 2).unwrap();
        let r = space.basis.iter().find(|r| r.qs().iter().any(|q| q.coeffs().iter().any(|c| c == &ratio(1, 2) || c == &ratio(-1, 2))));
        if let Some(r) = r {
            assert!(matches!(build_obstruction(&p, r, 2, 1), Err(Error::DenominatorNotCoprime { .. })));
        }
    }

    #[test]
    fn probe_rows() {
        let (p, _) = three_ap();
        let table = true_complexity_probe(&p, 0, 1, 3, 101, 9, 2).unwrap();
        assert_eq!(table.rows.len(), 5);
        let obs = &table.rows[3];
        assert!((obs.count_abs - 1.0).abs() < 1e-9);
        assert!(table.rows[4].count_abs < 1e-12);
    }
}
