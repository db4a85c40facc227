use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::{Family, Progression};
use crate::error::{Error, Result};
use crate::linalg::{kernel, to_qvec, QVec};
use crate::polycore::{BiPoly, RationalScalar, UniPoly};

/// A tuple `(Q_0, …, Q_t)` with `Σ Q_i(x + P_i(y)) ≡ 0` and `Q_i(0) = 0` for `i ≥ 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Relation {
    qs: Vec<UniPoly>,
    degree_profile: Vec<Option<usize>>,
}

impl Relation {
    /// Checks the identity by exact expansion and the constant-term normalization.
    pub fn new(prog: &Progression, qs: Vec<UniPoly>) -> Result<Self> {
        Self::for_terms(&prog.terms(), qs)
    }

    pub(crate) fn for_terms(terms: &[UniPoly], qs: Vec<UniPoly>) -> Result<Self> {
        if qs.len() != terms.len() {
            return Err(Error::InvalidArgument(format!(
                "relation has {} components, progression has {}",
                qs.len(),
                terms.len()
            )));
        }
        if let Some(i) = (1..qs.len()).find(|&i| !qs[i].coeff(0).is_zero()) {
            return Err(Error::InvalidArgument(format!("Q_{} has a nonzero constant term", i)));
        }
        let residual = expand(terms, &qs);
        if !residual.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "not a relation: expansion leaves {}",
                residual.render()
            )));
        }
        let degree_profile = qs.iter().map(UniPoly::degree).collect();
        Ok(Self { qs, degree_profile })
    }

    pub fn qs(&self) -> &[UniPoly] {
        &self.qs
    }

    /// `deg Q_i`, with `None` for a vanishing component.
    pub fn degree_profile(&self) -> &[Option<usize>] {
        &self.degree_profile
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.degree_profile.iter().flatten().copied().max()
    }

    pub fn is_zero(&self) -> bool {
        self.qs.iter().all(UniPoly::is_zero)
    }

    /// `Σ Q_i(x + P_i(y))`, expanded in the monomial basis.
    pub fn expand(&self, prog: &Progression) -> BiPoly {
        expand(&prog.terms(), &self.qs)
    }

    /// Binomial-basis coefficients `b_{i,0..}` of `Q_i`.
    pub fn binomial_coeffs(&self, i: usize) -> Vec<RationalScalar> {
        self.qs[i].to_binomial_basis()
    }

    pub fn render(&self) -> String {
        format!("({})", self.qs.iter().map(|q| q.render("u")).collect::<Vec<_>>().join(", "))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub(crate) fn expand(terms: &[UniPoly], qs: &[UniPoly]) -> BiPoly {
    terms
        .iter()
        .zip(qs)
        .fold(BiPoly::zero(), |acc, (p, q)| &acc + &BiPoly::compose_shift(q, p))
}

/// A basis of all relations with component degrees at most `degree_cap`.
#[derive(Clone, Debug)]
pub struct RelationSpace {
    pub basis: Vec<Relation>,
    pub degree_cap: usize,
    /// The space computed at `degree_cap + 1` has the same dimension.
    pub stabilized: bool,
}

impl RelationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `max deg Q_i` over the basis (0 when no relation involves index `i`).
    pub fn complexity(&self, i: usize) -> usize {
        self.basis.iter().filter_map(|r| r.degree_profile()[i]).max().unwrap_or(0)
    }

    /// Whether `qs` lies in the span of the basis.
    pub fn contains(&self, qs: &[UniPoly]) -> bool {
        let cap = self.degree_cap;
        let flat = |q: &[UniPoly]| -> Option<QVec> {
            let mut v = Vec::new();
            for k in 1..=cap {
                for p in q {
                    let b = p.to_binomial_basis();
                    if b.len() > cap + 1 {
                        return None;
                    }
                    v.push(b.get(k).cloned().unwrap_or_else(RationalScalar::zero));
                }
            }
            Some(v)
        };
        let Some(target) = flat(qs) else { return false };
        let basis: Vec<QVec> = self.basis.iter().filter_map(|r| flat(r.qs())).collect();
        crate::linalg::solve_coordinates(&basis, &target).is_some()
    }
}

pub(crate) fn family_relations(family: &Family, cap: usize) -> Result<Vec<Relation>> {
    family
        .relation_kernel(cap)
        .iter()
        .map(|v| {
            let qs = family.qs_from_vector(&to_qvec(v), cap);
            Relation::for_terms(family.terms(), qs)
                .map_err(|e| Error::Internal(format!("kernel vector failed the relation check: {}", e)))
        })
        .collect()
}

pub fn relation_space(prog: &Progression, cap: usize) -> Result<RelationSpace> {
    if cap < 1 {
        return Err(Error::InvalidArgument("relation cap must be at least 1".into()));
    }
    let family = prog.family();
    let basis = family_relations(&family, cap)?;
    let next = family.relation_kernel(cap + 1).len();
    Ok(RelationSpace { stabilized: next == basis.len(), basis, degree_cap: cap })
}

/// Basis of `{a : Σ a_i (x + P_i(y))^k ≡ 0}`.
pub fn homogeneous_relations(prog: &Progression, k: usize) -> Result<Vec<QVec>> {
    if k < 1 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    Ok(family_homogeneous(&prog.family(), k))
}

pub(crate) fn family_homogeneous(family: &Family, k: usize) -> Vec<QVec> {
    let cols = family.powers(k);
    let rows = super::family::coefficient_rows(&cols, |p| p.terms().clone());
    kernel(&rows, cols.len()).iter().map(|v| to_qvec(v)).collect()
}

/// Algebraic complexity at one index, with the cap it was computed at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityValue {
    pub value: usize,
    pub cap: usize,
    pub stabilized: bool,
}

pub(crate) fn family_profile(family: &Family, cap: usize) -> Result<(Vec<Relation>, Vec<ComplexityValue>)> {
    let here = family_relations(family, cap)?;
    let next = family_relations(family, cap + 1)?;
    let max_deg = |rels: &[Relation], i: usize| rels.iter().filter_map(|r| r.degree_profile()[i]).max().unwrap_or(0);
    let profile = (0..family.len())
        .map(|i| {
            let value = max_deg(&here, i);
            ComplexityValue { value, cap, stabilized: value == max_deg(&next, i) }
        })
        .collect();
    Ok((here, profile))
}

/// `𝒜_i` for every index.
pub fn complexity_profile(prog: &Progression, cap: usize) -> Result<Vec<ComplexityValue>> {
    if cap < 1 {
        return Err(Error::InvalidArgument("relation cap must be at least 1".into()));
    }
    Ok(family_profile(&prog.family(), cap)?.1)
}

pub fn algebraic_complexity(prog: &Progression, i: usize, cap: usize) -> Result<ComplexityValue> {
    if i > prog.t() {
        return Err(Error::IndexOutOfRange { index: i, t: prog.t() });
    }
    Ok(complexity_profile(prog, cap)?[i])
}

/// Outcome of the bound `max_i 𝒜_i ≤ t - 1` for a homogeneous progression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VandermondeCheck {
    pub holds: bool,
    pub max_complexity: usize,
    pub bound: usize,
    /// The bound is attained.
    pub sharp: bool,
}

pub fn vandermonde_bound_check(prog: &Progression) -> Result<VandermondeCheck> {
    let cap = prog.default_cap();
    let h = super::is_homogeneous(prog, cap)?;
    if !h.homogeneous {
        let w = h.witness.map(|w| w.element.render()).unwrap_or_default();
        return Err(Error::NotHomogeneous(w));
    }
    let family = prog.family();
    let (rels, profile) = family_profile(&family, cap)?;
    let bound = prog.t() - 1;
    let max_complexity = profile.iter().map(|c| c.value).max().unwrap_or(0);
    if max_complexity > bound {
        let witness = rels.iter().max_by_key(|r| r.max_degree()).expect("nonzero complexity needs a relation");
        return Err(Error::BoundViolated { relation: witness.render(), degree: max_complexity, bound });
    }
    Ok(VandermondeCheck { holds: true, max_complexity, bound, sharp: max_complexity == bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec_from_ints;

    fn prog(p: &[&[i64]]) -> Progression {
        Progression::from_int_coeffs(p).unwrap()
    }

    #[test]
    fn homogeneous_relations_examples() {
        let p = prog(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]);
        assert_eq!(homogeneous_relations(&p, 1).unwrap(), vec![qvec_from_ints(&[1, -2, 1, 0])]);
        assert!(homogeneous_relations(&p, 2).unwrap().is_empty());
        assert!(homogeneous_relations(&prog(&[&[0, 1], &[0, 0, 1]]), 1).unwrap().is_empty());
        assert!(homogeneous_relations(&p, 0).is_err());
    }

    #[test]
    fn known_relation_is_in_the_space() {
        let p = prog(&[&[0, 1], &[0, 2], &[0, 0, 1]]);
        let space = relation_space(&p, 2).unwrap();
        let known = vec![
            UniPoly::from_ints(&[0, 2, 1]),
            UniPoly::from_ints(&[0, 0, -2]),
            UniPoly::from_ints(&[0, 0, 1]),
            UniPoly::from_ints(&[0, -2]),
        ];
        assert!(Relation::new(&p, known.clone()).is_ok());
        assert!(space.contains(&known));
        assert!(space.contains(&[UniPoly::var(), UniPoly::from_ints(&[0, -2]), UniPoly::var(), UniPoly::zero()]));
    }

    #[test]
    fn three_ap_plus_cube() {
        let p = prog(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]);
        let space = relation_space(&p, 3).unwrap();
        assert_eq!(space.dim(), 1);
        assert_eq!(space.basis[0].qs(), &[UniPoly::var(), UniPoly::from_ints(&[0, -2]), UniPoly::var(), UniPoly::zero()]);
        assert!(space.stabilized);
        assert_eq!(relation_space(&prog(&[&[0, 1], &[0, 0, 1]]), 3).unwrap().dim(), 0);
        assert!(relation_space(&p, 0).is_err());
    }

    #[test]
    fn complexity_examples() {
        let p = prog(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]);
        let v: Vec<usize> = complexity_profile(&p, p.default_cap()).unwrap().iter().map(|c| c.value).collect();
        assert_eq!(v, vec![1, 1, 1, 0]);
        let q = prog(&[&[0, 0, 1], &[0, 0, 2], &[0, 0, 0, 1], &[0, 0, 0, 2]]);
        assert!(complexity_profile(&q, q.default_cap()).unwrap().iter().all(|c| c.value == 1));
        let r = prog(&[&[0, 1], &[0, 2], &[0, 0, 1]]);
        assert_eq!(algebraic_complexity(&r, 3, 4).unwrap().value, 1);
        assert_eq!(algebraic_complexity(&r, 0, 4).unwrap().value, 2);
        assert!(algebraic_complexity(&r, 4, 4).is_err());
    }

    #[test]
    fn vandermonde_examples() {
        let ap = vandermonde_bound_check(&prog(&[&[0, 1], &[0, 2]])).unwrap();
        assert!(ap.holds && ap.sharp && ap.max_complexity == 1);
        let indep = vandermonde_bound_check(&prog(&[&[0, 1], &[0, 0, 1]])).unwrap();
        assert_eq!(indep.max_complexity, 0);
        let cube = vandermonde_bound_check(&prog(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]])).unwrap();
        assert_eq!((cube.max_complexity, cube.bound), (1, 2));
        assert!(matches!(
            vandermonde_bound_check(&prog(&[&[0, 1], &[0, 2], &[0, 0, 1]])),
            Err(Error::NotHomogeneous(_))
        ));
    }
}
