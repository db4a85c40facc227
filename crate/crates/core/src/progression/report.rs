use serde::Serialize;

use super::eligibility::{is_eligible, EligibilityReport, DEFAULT_R_MAX};
use super::graded::family_graded;
use super::relations::{family_profile, ComplexityValue};
use super::Progression;
use crate::error::Result;
use crate::linalg::QVec;

pub const REPORT_SCHEMA: &str = "polyprog.complexity/1";

#[derive(Clone, Debug, Serialize)]
pub struct DegreeSummary {
    pub k: usize,
    pub dim_w: usize,
    pub dim_w_prime: usize,
    pub dim_w_c: usize,
    pub w_basis: Vec<String>,
    pub w_c_basis: Vec<String>,
    pub tau: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexityReport {
    pub schema: &'static str,
    pub progression: String,
    pub t: usize,
    pub cap: usize,
    pub relations_stabilized: bool,
    pub homogeneous: bool,
    pub homogeneity_stabilized: bool,
    pub homogeneity_witness: Option<String>,
    pub witness_relation: Option<String>,
    pub complexity: Vec<usize>,
    pub complexity_detail: Vec<ComplexityValue>,
    pub relation_basis: Vec<String>,
    pub w_c: Vec<String>,
    pub degrees: Vec<DegreeSummary>,
    pub eligibility: Option<EligibilityReport>,
    pub vandermonde_bound: Option<bool>,
}

fn render_vec(v: &QVec) -> Vec<String> {
    v.iter().map(|q| q.to_string()).collect()
}

/// Everything the progression module knows about `prog`, at relation cap `cap`.
///
/// Eligibility is only attempted for homogeneous progressions.
pub fn complexity_report(prog: &Progression, cap: usize) -> Result<ComplexityReport> {
    complexity_report_with(prog, cap, DEFAULT_R_MAX.min(4))
}

/// As [`complexity_report`], trying dilations up to `r_max` for eligibility.
pub fn complexity_report_with(prog: &Progression, cap: usize, r_max: usize) -> Result<ComplexityReport> {
    let family = prog.family();
    let (relations, profile) = family_profile(&family, cap)?;
    let next_dim = family.relation_kernel(cap + 1).len();
    let graded = family_graded(&family, cap, cap)?;
    let homogeneous = graded.w_c_total.is_empty();
    let h = super::graded::family_homogeneity(&family, cap)?;
    let complexity: Vec<usize> = profile.iter().map(|c| c.value).collect();
    let eligibility = if homogeneous { Some(is_eligible(prog, r_max, cap)?) } else { None };
    let vandermonde_bound = homogeneous.then(|| complexity.iter().all(|&c| c + 1 <= prog.t()));
    Ok(ComplexityReport {
        schema: REPORT_SCHEMA,
        progression: prog.render(),
        t: prog.t(),
        cap,
        relations_stabilized: next_dim == relations.len(),
        homogeneous,
        homogeneity_stabilized: h.stabilized,
        homogeneity_witness: h.witness.as_ref().map(|w| w.element.render()),
        witness_relation: h.witness.as_ref().map(|w| w.relation.render()),
        complexity,
        complexity_detail: profile,
        relation_basis: relations.iter().map(|r| r.render()).collect(),
        w_c: graded.w_c_total.iter().map(|p| p.render()).collect(),
        degrees: graded
            .degrees
            .iter()
            .map(|d| DegreeSummary {
                k: d.k,
                dim_w: d.t_k,
                dim_w_prime: d.t_prime_k,
                dim_w_c: d.w_c.len(),
                w_basis: d.w_basis.iter().map(|p| p.render()).collect(),
                w_c_basis: d.w_c.iter().map(|p| p.render()).collect(),
                tau: d.tau.iter().map(render_vec).collect(),
            })
            .collect(),
        eligibility,
        vandermonde_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_examples() {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]).unwrap();
        let r = complexity_report(&p, p.default_cap()).unwrap();
        assert!(r.homogeneous);
        assert_eq!(r.complexity, vec![1, 1, 1, 0]);
        assert_eq!((r.degrees[0].dim_w, r.degrees[1].dim_w), (3, 4));
        assert!(r.eligibility.unwrap().eligible);

        let q = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 1]]).unwrap();
        let r = complexity_report(&q, q.default_cap()).unwrap();
        assert!(!r.homogeneous);
        assert_eq!(r.complexity, vec![2, 2, 2, 1]);
        assert_eq!(r.w_c, vec!["y^2".to_string()]);

        let s = Progression::from_int_coeffs(&[&[0, 1], &[0, 0, 1], &[0, 1, 1]]).unwrap();
        let r = complexity_report(&s, s.default_cap()).unwrap();
        assert!(r.homogeneous);
        assert_eq!(r.complexity, vec![1, 1, 1, 1]);
    }
}
