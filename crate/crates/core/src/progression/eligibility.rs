use num_traits::One;
use serde::Serialize;

use super::graded::{family_homogeneity, sum_is_direct};
use super::relations::family_relations;
use super::{Family, Progression};
use crate::error::{Error, Result};
use crate::polycore::{RationalScalar, UniPoly};

pub const DEFAULT_R_MAX: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EligibilityFailure {
    pub r: usize,
    pub j: usize,
    pub reason: String,
}

/// Eligibility certified for every `r ≤ r_max` and `0 ≤ j < r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EligibilityReport {
    pub eligible: bool,
    pub r_max: usize,
    pub cap: usize,
    pub families_checked: usize,
    pub failure: Option<EligibilityFailure>,
}

/// `P̃_{i,j}(y+1) = (P_i(ry + j) - P_i(j)) / r`, the reparametrized family
/// shifted so that every member vanishes at 0.
pub(crate) fn reparametrized(prog: &Progression, r: usize, j: usize) -> Result<Vec<UniPoly>> {
    let mut terms = vec![UniPoly::zero()];
    for p in prog.polys() {
        terms.push(p.substitute_affine(r as i64, j as i64)?.shift(&RationalScalar::one()));
    }
    Ok(terms)
}

/// Complexity profile at `cap` alone; eligibility does not re-check stabilization.
fn profile_at(family: &Family, cap: usize) -> Result<Vec<usize>> {
    let rels = family_relations(family, cap)?;
    Ok((0..family.len()).map(|i| rels.iter().filter_map(|r| r.degree_profile()[i]).max().unwrap_or(0)).collect())
}

pub fn is_eligible(prog: &Progression, r_max: usize, cap: usize) -> Result<EligibilityReport> {
    if r_max < 1 || cap < 1 {
        return Err(Error::InvalidArgument("r_max and cap must be at least 1".into()));
    }
    let base = prog.family();
    let h = family_homogeneity(&base, cap)?;
    if !h.homogeneous {
        return Err(Error::NotHomogeneous(h.witness.map(|w| w.element.render()).unwrap_or_default()));
    }
    let base_profile = profile_at(&base, cap)?;
    let mut checked = 0;
    for r in 1..=r_max {
        for j in 0..r {
            checked += 1;
            let family = Family::new(reparametrized(prog, r, j)?);
            let failure = if !sum_is_direct(&family, cap) {
                let fh = family_homogeneity(&family, cap)?;
                Some(format!(
                    "reparametrized family is inhomogeneous; W^c contains {}",
                    fh.witness.map(|w| w.element.render()).unwrap_or_default()
                ))
            } else {
                let profile = profile_at(&family, cap)?;
                (profile != base_profile).then(|| format!("complexity {:?} differs from {:?}", profile, base_profile))
            };
            if let Some(reason) = failure {
                return Ok(EligibilityReport {
                    eligible: false,
                    r_max,
                    cap,
                    families_checked: checked,
                    failure: Some(EligibilityFailure { r, j, reason }),
                });
            }
        }
    }
    Ok(EligibilityReport { eligible: true, r_max, cap, families_checked: checked, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eligibility_examples() {
        let q = Progression::from_int_coeffs(&[&[0, 0, 1], &[0, 0, 2], &[0, 0, 0, 1], &[0, 0, 0, 2]]).unwrap();
        assert!(is_eligible(&q, 4, q.default_cap()).unwrap().eligible);
        let ap = Progression::from_int_coeffs(&[&[0, 1], &[0, 2]]).unwrap();
        let rep = is_eligible(&ap, 4, ap.default_cap()).unwrap();
        assert!(rep.eligible);
        assert_eq!(rep.families_checked, 10);
        let indep = Progression::from_int_coeffs(&[&[0, 1], &[0, 0, 1]]).unwrap();
        assert!(is_eligible(&indep, 3, indep.default_cap()).unwrap().eligible);
        let inhom = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 1]]).unwrap();
        assert!(matches!(is_eligible(&inhom, 2, 5), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn reparametrization_vanishes_at_zero() {
        let p = Progression::from_int_coeffs(&[&[0, 0, 1], &[0, 0, 0, 1]]).unwrap();
        for r in 1..5 {
            for j in 0..r {
                for q in reparametrized(&p, r, j).unwrap() {
                    assert!(num_traits::Zero::is_zero(&q.coeff(0)));
                }
            }
        }
    }
}
