use super::family::coefficient_rows;
use super::graded::family_graded;
use super::Progression;
use crate::error::{Error, Result};
use crate::linalg::{QVec, Subspace};
use crate::polycore::BiPoly;

/// `𝒫_k ⊂ ℚ^{t+1}` with the `τ_k` correspondence.
#[derive(Clone, Debug)]
pub struct CoeffSpace {
    pub k: usize,
    /// The `τ_k` vectors, which form a basis of `𝒫_k`.
    pub basis: Vec<QVec>,
    /// `(Q_{k,j}, v_{k,j})` with `C(P⃗, k) = Σ_j v_{k,j} Q_{k,j}`.
    pub tau_pairs: Vec<(BiPoly, QVec)>,
}

impl CoeffSpace {
    pub fn subspace(&self) -> Subspace {
        Subspace::span(self.basis.first().map_or(0, Vec::len), &self.basis)
    }
}

/// The four descriptions of `𝒫_k`: monomial `(x+P_i)^k`, monomial up to `k`,
/// binomial `C(x+P_i, k)`, binomial up to `k`.
pub fn coeff_space_variants(prog: &Progression, k: usize) -> [Subspace; 4] {
    let family = prog.family();
    let n = family.len();
    let span_rows = |cols_by_degree: Vec<Vec<BiPoly>>, binomial_view: bool| {
        let rows: Vec<QVec> = cols_by_degree
            .iter()
            .flat_map(|cols| {
                if binomial_view {
                    coefficient_rows(cols, BiPoly::to_binomial_view)
                } else {
                    coefficient_rows(cols, |p| p.terms().clone())
                }
            })
            .collect();
        Subspace::span(n, &rows)
    };
    [
        span_rows(vec![family.powers(k)], false),
        span_rows((1..=k).map(|j| family.powers(j)).collect(), false),
        span_rows(vec![family.binomials(k)], true),
        span_rows((1..=k).map(|j| family.binomials(j)).collect(), true),
    ]
}

pub fn coeff_space(prog: &Progression, k: usize) -> Result<CoeffSpace> {
    if k < 1 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let family = prog.family();
    let graded = family_graded(&family, k, k)?;
    let d = graded.degree(k).expect("degree k computed");
    let tau_pairs: Vec<(BiPoly, QVec)> = d.w_basis.iter().cloned().zip(d.tau.iter().cloned()).collect();
    // Reconstruction C(x+P_i, k) = Σ_j v_{k,j}[i] Q_{k,j}.
    for (i, target) in family.binomials(k).iter().enumerate() {
        let sum = tau_pairs.iter().fold(BiPoly::zero(), |acc, (q, v)| &acc + &q.scale(&v[i]));
        if &sum != target {
            return Err(Error::Internal(format!("tau reconstruction failed at component {}", i)));
        }
    }
    let basis: Vec<QVec> = d.tau.clone();
    let span = Subspace::span(family.len(), &basis);
    if span.dim() != basis.len() {
        return Err(Error::Internal("tau vectors are dependent".into()));
    }
    if coeff_space_variants(prog, k).iter().any(|v| v != &span) {
        return Err(Error::Internal(format!("descriptions of the coefficient space disagree at k = {}", k)));
    }
    Ok(CoeffSpace { k, basis, tau_pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec_from_ints;

    #[test]
    fn worked_coefficient_spaces() {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]).unwrap();
        let c1 = coeff_space(&p, 1).unwrap();
        assert_eq!(c1.basis, vec![qvec_from_ints(&[1, 1, 1, 1]), qvec_from_ints(&[0, 1, 2, 0]), qvec_from_ints(&[0, 0, 0, 1])]);
        let c2 = coeff_space(&p, 2).unwrap();
        assert_eq!(c2.basis.len(), 4);
        assert!(c2.basis.contains(&qvec_from_ints(&[0, 0, 1, 0])));
        let q = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 1]]).unwrap();
        assert_eq!(coeff_space(&q, 1).unwrap().basis.len(), 3);
    }
}
