//! Relation spaces, graded spaces and complexity of polynomial progressions
//! `(x, x+P_1(y), …, x+P_t(y))`.

mod coeff;
mod eligibility;
mod family;
mod graded;
mod relations;
mod report;

use crate::error::{Error, Result};
use crate::polycore::UniPoly;

pub use coeff::{coeff_space, coeff_space_variants, CoeffSpace};
pub use eligibility::{is_eligible, EligibilityFailure, EligibilityReport, DEFAULT_R_MAX};
pub use graded::{
    graded_spaces, homogeneous_ansatz_dimension, is_homogeneous, GradedDegree, GradedSpaces,
    HomogeneityResult, HomogeneityWitness,
};
pub use relations::{
    algebraic_complexity, complexity_profile, homogeneous_relations, relation_space,
    vandermonde_bound_check, ComplexityValue, Relation, RelationSpace, VandermondeCheck,
};
pub use report::{complexity_report, complexity_report_with, ComplexityReport, REPORT_SCHEMA};

pub(crate) use family::Family;

/// The polynomials `P_1..P_t` of a progression; `P_0 = 0` is implicit.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Progression {
    polys: Vec<UniPoly>,
}

impl Progression {
    /// Validates integrality, nonvanishing and distinctness.
    pub fn new(polys: Vec<UniPoly>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::InvalidArgument("a progression needs t >= 1".into()));
        }
        for (i, p) in polys.iter().enumerate() {
            if p.is_zero() {
                return Err(Error::ZeroPolynomial(i + 1));
            }
            if let Some(reason) = p.integrality_witness() {
                return Err(Error::NotIntegral { poly: p.render("y"), reason });
            }
            if polys[..i].contains(p) {
                return Err(Error::DuplicatePolynomial(p.render("y")));
            }
        }
        Ok(Self { polys })
    }

    /// Builds from monomial coefficient lists, e.g. `&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]`.
    pub fn from_int_coeffs(polys: &[&[i64]]) -> Result<Self> {
        Self::new(polys.iter().map(|c| UniPoly::from_ints(c)).collect())
    }

    pub fn t(&self) -> usize {
        self.polys.len()
    }

    /// `P_1..P_t`.
    pub fn polys(&self) -> &[UniPoly] {
        &self.polys
    }

    /// `P_0 = 0, P_1, …, P_t`.
    pub fn terms(&self) -> Vec<UniPoly> {
        std::iter::once(UniPoly::zero()).chain(self.polys.iter().cloned()).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.polys.iter().filter_map(UniPoly::degree).max().unwrap_or(0)
    }

    /// `max(t-1, max deg P_i + t)`.
    pub fn default_cap(&self) -> usize {
        (self.t().saturating_sub(1)).max(self.max_degree() + self.t()).max(1)
    }

    pub(crate) fn family(&self) -> Family {
        Family::new(self.terms())
    }

    /// Canonical text such as `x, x + y, x + 2y, x + y^3`.
    pub fn render(&self) -> String {
        std::iter::once("x".to_string())
            .chain(self.polys.iter().map(render_term))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// `x + P(y)` in canonical form: monomial basis when all coefficients are
/// integers, binomial basis otherwise.
fn render_term(p: &UniPoly) -> String {
    let body = if p.coeffs().iter().all(crate::polycore::is_integer) {
        p.render("y")
    } else {
        p.render_binomial("y")
    };
    match body.strip_prefix('-') {
        Some(rest) => format!("x - {}", rest),
        None => format!("x + {}", body),
    }
}

impl std::fmt::Display for Progression {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::ratio;

    #[test]
    fn validation() {
        assert!(Progression::from_int_coeffs(&[&[0, 1], &[0, 2]]).is_ok());
        assert!(matches!(Progression::from_int_coeffs(&[&[0, 1], &[0, 1]]), Err(Error::DuplicatePolynomial(_))));
        assert!(matches!(Progression::from_int_coeffs(&[&[1, 1]]), Err(Error::NotIntegral { .. })));
        assert!(matches!(Progression::from_int_coeffs(&[&[0]]), Err(Error::ZeroPolynomial(1))));
        assert!(Progression::new(vec![UniPoly::monomial(1, ratio(1, 2))]).is_err());
        assert!(Progression::new(vec![UniPoly::binomial(2)]).is_ok());
    }

    #[test]
    fn rendering_and_cap() {
        let p = Progression::from_int_coeffs(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]).unwrap();
        assert_eq!(p.render(), "x, x + y, x + 2y, x + y^3");
        assert_eq!(p.default_cap(), 6);
        let q = Progression::new(vec![UniPoly::binomial(2), UniPoly::from_ints(&[0, -1])]).unwrap();
        assert_eq!(q.render(), "x, x + C(y,2), x - y");
    }
}
