use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::phase::Phase;
use super::symbolic::SymReal;
use super::system::{factor_projection, Projection, TorusCharacter, WeylSystem};
use crate::error::{Error, Result};
use crate::polycore::{lcm_of_denominators, BiPoly, Monomial};
use crate::progression::{Progression, Relation};

const SAMPLES: usize = 1000;
const SEED: u64 = 0x5eed_0008;
const RANGE: i64 = 100_000;

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub s: usize,
    pub alpha: String,
    /// Common denominator `L` of the binomial coefficients `b_{k,j}`.
    pub lcm: String,
    /// `f_k = e(L b_k · a)`.
    pub characters: Vec<TorusCharacter>,
    /// `Σ_k b_k · ĝ(x + P_k(y)) = 0` holds for the exact lifts `ĝ` of the orbit.
    pub symbolic_identity: bool,
    pub samples: usize,
    /// `max |Π_k f_k(T^{x+P_k(y)} a) - 1|` over the samples.
    pub max_deviation: f64,
    /// Indices with `b_{i,s} ≠ 0`.
    pub required_killed: Vec<usize>,
    /// Indices whose character projects to zero on `𝒵_{s-1}`.
    pub killed: Vec<usize>,
    pub classification_ok: bool,
}

impl WitnessReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.symbolic_identity && self.max_deviation <= tol && self.classification_ok
    }
}

/// Characters `f_k` with `Π_k f_k(T^{x+P_k(y)} a) ≡ 1` built from `Q_k = Σ_j b_{k,j} C(u, j)`.
///
/// The functions `ξ(b_k · a)` with `ξ(u) = e(αu)` are replaced by
/// the integer frequencies `L b_k`, which are well defined on the torus; the
/// identity for `ξ` is the scaled exact lift and is checked symbolically.
pub fn lower_bound_witness(prog: &Progression, rel: &Relation, alpha: &SymReal, w: &WeylSystem) -> Result<WitnessReport> {
    let s = w.s;
    if rel.qs().len() != prog.t() + 1 {
        return Err(Error::InvalidArgument("relation does not match the progression".into()));
    }
    if let Some(d) = rel.max_degree().filter(|&d| d > s) {
        return Err(Error::DegreeExceedsOrder { degree: d, order: s });
    }
    let b: Vec<Vec<_>> = (0..rel.qs().len())
        .map(|k| {
            let c = rel.binomial_coeffs(k);
            (1..=s).map(|j| c.get(j).cloned().unwrap_or_else(Zero::zero)).collect()
        })
        .collect();
    let l = lcm_of_denominators(b.iter().flatten());
    let characters: Vec<TorusCharacter> = b
        .iter()
        .map(|bk| {
            let freqs = bk.iter().map(|c| (c * &l).to_integer().to_i64().expect("frequency fits i64")).collect();
            TorusCharacter::new(freqs)
        })
        .collect();

    let terms = prog.terms();
    let coeffs = w.sequence().coeffs();
    let mut total: BTreeMap<Monomial, SymReal> = BTreeMap::new();
    for (i, g) in coeffs.iter().enumerate() {
        for (lidx, gl) in g.iter().enumerate() {
            if gl.is_zero() {
                continue;
            }
            let r = terms
                .iter()
                .zip(&b)
                .fold(BiPoly::zero(), |acc, (p, bk)| &acc + &BiPoly::shifted_binomial(p, i).scale(&bk[lidx]));
            for (m, c) in r.terms() {
                let e = total.entry(*m).or_default();
                *e = &*e + &gl.scale(c);
            }
        }
    }
    let symbolic_identity = total.values().all(SymReal::is_zero);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..SAMPLES {
        let (x, y) = (rng.gen_range(-RANGE..=RANGE), rng.gen_range(-RANGE..=RANGE));
        let phase = terms.iter().zip(&characters).fold(Phase::ZERO, |acc, (p, chi)| {
            let n: i128 = (p.eval_int(y).to_integer() + x).try_into().expect("orbit index fits i128");
            acc + chi.phase(&w.orbit_point(n))
        });
        max_deviation = max_deviation.max((phase.e() - 1.0).norm());
    }

    let required_killed: Vec<usize> = (0..b.len()).filter(|&i| !b[i][s - 1].is_zero()).collect();
    let killed: Vec<usize> = characters
        .iter()
        .enumerate()
        .filter(|(_, c)| factor_projection(c, s - 1) == Ok(Projection::Killed))
        .map(|(i, _)| i)
        .collect();
    let classification_ok = required_killed == killed;
    Ok(WitnessReport {
        s,
        alpha: alpha.render(),
        lcm: l.to_string(),
        characters,
        symbolic_identity,
        samples: SAMPLES,
        max_deviation,
        required_killed,
        killed,
        classification_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::UniPoly;
    use crate::progression::relation_space;

    #[test]
    fn three_ap_on_kronecker() {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2]]).unwrap();
        let r = Relation::new(&p, vec![UniPoly::from_ints(&[0, 1]), UniPoly::from_ints(&[0, -2]), UniPoly::from_ints(&[0, 1])])
            .unwrap();
        let w = WeylSystem::standard(1, SymReal::sqrt(2)).unwrap();
        let rep = lower_bound_witness(&p, &r, &SymReal::sqrt(3), &w).unwrap();
        assert!(rep.passes(1e-9));
        assert_eq!(rep.killed, vec![0, 1, 2]);
    }

    #[test]
    fn quadratic_relation_kills_first_factor() {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 1]]).unwrap();
        let space = relation_space(&p, 2).unwrap();
        let r = space.basis.iter().find(|r| r.max_degree() == Some(2)).unwrap();
        let w = WeylSystem::new(SymReal::sqrt(2), vec![SymReal::sqrt(3), SymReal::sqrt(5)]).unwrap();
        let rep = lower_bound_witness(&p, r, &SymReal::sqrt(7), &w).unwrap();
        assert!(rep.passes(1e-9), "{:?}", rep);
        assert!(rep.killed.contains(&0) && rep.killed.contains(&1) && rep.killed.contains(&2));
        let w1 = WeylSystem::standard(1, SymReal::sqrt(2)).unwrap();
        assert!(matches!(lower_bound_witness(&p, r, &SymReal::sqrt(7), &w1), Err(Error::DegreeExceedsOrder { .. })));
        let zero = Relation::new(&p, vec![UniPoly::zero(); 4]).unwrap();
        let rz = lower_bound_witness(&p, &zero, &SymReal::sqrt(7), &w).unwrap();
        assert!(rz.characters.iter().all(TorusCharacter::is_trivial) && rz.passes(1e-12));
    }
}
