use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;

use crate::linalg::{kernel, QVec, ZVec};
use crate::polycore::{BiPoly, Monomial, RationalScalar, UniPoly};

/// A list of polynomials `P_0 = 0, P_1, …, P_t` with cached expansions.
///
/// Unlike [`super::Progression`] the members need not be integral; the
/// eligibility test runs the same machinery on reparametrized families.
pub(crate) struct Family {
    terms: Vec<UniPoly>,
    binomials: RefCell<BTreeMap<usize, Vec<BiPoly>>>,
}

impl Family {
    pub fn new(terms: Vec<UniPoly>) -> Self {
        Self { terms, binomials: RefCell::new(BTreeMap::new()) }
    }

    pub fn terms(&self) -> &[UniPoly] {
        &self.terms
    }

    /// Number of members, `t + 1`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// `C(x + P_i(y), k)` for every member.
    pub fn binomials(&self, k: usize) -> Vec<BiPoly> {
        if let Some(v) = self.binomials.borrow().get(&k) {
            return v.clone();
        }
        let v: Vec<BiPoly> = self.terms.iter().map(|p| BiPoly::shifted_binomial(p, k)).collect();
        self.binomials.borrow_mut().insert(k, v.clone());
        v
    }

    /// `(x + P_i(y))^k` for every member.
    pub fn powers(&self, k: usize) -> Vec<BiPoly> {
        self.terms.iter().map(|p| BiPoly::compose_shift(&UniPoly::monomial(k, num_traits::One::one()), p)).collect()
    }

    /// Kernel of the map `(b_{ik}) ↦ Σ b_{ik} C(x+P_i(y), k)` over `1 ≤ k ≤ cap`.
    ///
    /// Column `(k-1)(t+1) + i` carries `b_{ik}`.
    pub fn relation_kernel(&self, cap: usize) -> Vec<ZVec> {
        let columns: Vec<BiPoly> = (1..=cap).flat_map(|k| self.binomials(k)).collect();
        kernel(&coefficient_rows(&columns, |p| p.terms().clone()), columns.len())
    }

    /// Turns a kernel vector into `Q_0..Q_t`.
    pub fn qs_from_vector(&self, v: &[RationalScalar], cap: usize) -> Vec<UniPoly> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut b = vec![BigRational::zero(); cap + 1];
                for k in 1..=cap {
                    b[k] = v[(k - 1) * n + i].clone();
                }
                UniPoly::from_binomial_basis(&b)
            })
            .collect()
    }
}

/// Rows of the coefficient matrix whose columns are the given polynomials, one
/// row per monomial in the union of supports.
pub(crate) fn coefficient_rows(
    columns: &[BiPoly],
    view: impl Fn(&BiPoly) -> BTreeMap<Monomial, RationalScalar>,
) -> Vec<QVec> {
    let views: Vec<BTreeMap<Monomial, RationalScalar>> = columns.iter().map(view).collect();
    let monomials: BTreeSet<Monomial> = views.iter().flat_map(|v| v.keys().copied()).collect();
    monomials
        .iter()
        .map(|m| views.iter().map(|v| v.get(m).cloned().unwrap_or_else(BigRational::zero)).collect())
        .collect()
}
