use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;

use super::relations::{family_homogeneous, Relation};
use super::{Family, Progression};
use crate::error::{Error, Result};
use crate::linalg::{greedy_extension, primitive_integer, rank, solve_coordinates, to_qvec, QVec, Subspace};
use crate::polycore::{BiPoly, Monomial, RationalScalar, UniPoly};

/// Data for one degree `k`.
#[derive(Clone, Debug)]
pub struct GradedDegree {
    pub k: usize,
    /// Echelon basis of `W_k = Span{C(x+P_i(y), k)}`.
    pub w_basis: Vec<BiPoly>,
    /// Members of `w_basis` completing `W^c_k` to `W_k`.
    pub w_prime: Vec<BiPoly>,
    /// Positions of the `w_prime` members inside `w_basis`.
    pub prime_indices: Vec<usize>,
    /// Basis of `W^c_k = W_k ∩ Σ_{j≠k} W_j`.
    pub w_c: Vec<BiPoly>,
    /// `τ_k` vectors: entry `j` is the coefficient vector of `w_basis[j]`
    /// across the components `C(x+P_i(y), k)`.
    pub tau: Vec<QVec>,
    pub t_k: usize,
    pub t_prime_k: usize,
}

/// `W_k`, `W'_k` and `W^c_k` for `1 ≤ k ≤ k_max`, intersections taken up to `cap`.
#[derive(Clone, Debug)]
pub struct GradedSpaces {
    pub cap: usize,
    pub degrees: Vec<GradedDegree>,
    /// Basis of `W^c = Σ_{k ≤ cap} W^c_k`.
    pub w_c_total: Vec<BiPoly>,
    pub(crate) index: Vec<Monomial>,
    pub(crate) w_spaces: Vec<Subspace>,
    pub(crate) w_c_space: Subspace,
}

impl GradedSpaces {
    pub fn degree(&self, k: usize) -> Option<&GradedDegree> {
        self.degrees.get(k.checked_sub(1)?)
    }

    /// Binomial-view coordinates of `p` in the shared monomial index, if it fits.
    pub fn coordinates(&self, p: &BiPoly) -> Option<QVec> {
        let view = p.to_binomial_view();
        let pos: BTreeMap<Monomial, usize> = self.index.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut v = vec![BigRational::zero(); self.index.len()];
        for (m, c) in view {
            v[*pos.get(&m)?] = c;
        }
        Some(v)
    }

    /// `dim V_k` with `V_k = Σ_{j ≤ k} W_j`.
    pub fn dim_v(&self, k: usize) -> usize {
        self.v_space(k).dim()
    }

    /// `dim (W^c ∩ V_k)`.
    pub fn dim_wc_in_v(&self, k: usize) -> usize {
        self.w_c_space.intersection(&self.v_space(k)).dim()
    }

    fn v_space(&self, k: usize) -> Subspace {
        self.w_spaces[..k.min(self.w_spaces.len())]
            .iter()
            .fold(Subspace::zero(self.index.len()), |acc, w| acc.sum(w))
    }
}

/// Shared monomial index and per-degree binomial-view rows of `C(x+P_i(y), j)`.
struct Rows {
    index: Vec<Monomial>,
    rows: Vec<Vec<QVec>>,
}

fn build_rows(family: &Family, cap: usize) -> Rows {
    let polys: Vec<Vec<BTreeMap<Monomial, RationalScalar>>> = (1..=cap)
        .map(|j| family.binomials(j).iter().map(BiPoly::to_binomial_view).collect())
        .collect();
    let keys: BTreeSet<Monomial> = polys.iter().flatten().flat_map(|v| v.keys().copied()).collect();
    let index: Vec<Monomial> = keys.into_iter().collect();
    let pos: BTreeMap<Monomial, usize> = index.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let rows = polys
        .iter()
        .map(|per_j| {
            per_j
                .iter()
                .map(|view| {
                    let mut v = vec![BigRational::zero(); index.len()];
                    for (m, c) in view {
                        v[pos[m]] = c.clone();
                    }
                    v
                })
                .collect()
        })
        .collect();
    Rows { index, rows }
}

fn to_bipoly(index: &[Monomial], v: &[RationalScalar]) -> BiPoly {
    let view: BTreeMap<Monomial, RationalScalar> =
        index.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (*m, c.clone())).collect();
    BiPoly::from_binomial_view(&view)
}

/// Forward elimination in input order, pivoting on the largest monomial; each
/// new row is stored as a primitive integer vector.
fn semi_echelon(rows: &[QVec]) -> Vec<QVec> {
    let mut basis: Vec<(usize, QVec)> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        loop {
            let Some(lead) = r.iter().rposition(|c| !c.is_zero()) else { break };
            let Some((_, b)) = basis.iter().find(|(p, _)| *p == lead) else {
                basis.push((lead, to_qvec(&primitive_integer(&r))));
                break;
            };
            let f = &r[lead] / &b[lead];
            for (x, y) in r.iter_mut().zip(b) {
                *x -= &f * y;
            }
        }
    }
    basis.into_iter().map(|(_, v)| v).collect()
}

pub(crate) fn family_graded(family: &Family, k_max: usize, cap: usize) -> Result<GradedSpaces> {
    if k_max < 1 || cap < k_max {
        return Err(Error::InvalidArgument(format!("need 1 <= k_max <= cap, got k_max={} cap={}", k_max, cap)));
    }
    let Rows { index, rows } = build_rows(family, cap);
    let n = index.len();
    let w_spaces: Vec<Subspace> = rows.iter().map(|r| Subspace::span(n, r)).collect();
    let mut degrees = Vec::new();
    let mut w_c_space = Subspace::zero(n);
    for k in 1..=cap {
        let others = w_spaces
            .iter()
            .enumerate()
            .filter(|(j, _)| *j + 1 != k)
            .fold(Subspace::zero(n), |acc, (_, w)| acc.sum(w));
        let wc = w_spaces[k - 1].intersection(&others);
        w_c_space = w_c_space.sum(&wc);
        if k > k_max {
            continue;
        }
        let echelon = semi_echelon(&rows[k - 1]);
        let tau_rows: Vec<QVec> = rows[k - 1]
            .iter()
            .map(|r| solve_coordinates(&echelon, r).ok_or_else(|| Error::Internal("W_k row outside its echelon span".into())))
            .collect::<Result<_>>()?;
        // Transpose: tau[j][i] = coefficient of echelon[j] in component i.
        let tau: Vec<QVec> = (0..echelon.len()).map(|j| tau_rows.iter().map(|c| c[j].clone()).collect()).collect();
        let prime_idx = greedy_extension(&wc, &echelon);
        degrees.push(GradedDegree {
            k,
            w_basis: echelon.iter().map(|v| to_bipoly(&index, v)).collect(),
            w_prime: prime_idx.iter().map(|&i| to_bipoly(&index, &echelon[i])).collect(),
            prime_indices: prime_idx.clone(),
            w_c: wc.integer_basis().iter().map(|v| to_bipoly(&index, &to_qvec(v))).collect(),
            tau,
            t_k: echelon.len(),
            t_prime_k: prime_idx.len(),
        });
    }
    let w_c_total = w_c_space.integer_basis().iter().map(|v| to_bipoly(&index, &to_qvec(v))).collect();
    Ok(GradedSpaces { cap, degrees, w_c_total, index, w_spaces, w_c_space })
}

pub fn graded_spaces(prog: &Progression, k_max: usize, cap: usize) -> Result<GradedSpaces> {
    family_graded(&prog.family(), k_max, cap)
}

/// A nonzero element of some `W^c_k` and the inhomogeneous relation it yields.
#[derive(Clone, Debug)]
pub struct HomogeneityWitness {
    pub k: usize,
    pub element: BiPoly,
    pub relation: Relation,
}

#[derive(Clone, Debug)]
pub struct HomogeneityResult {
    pub homogeneous: bool,
    pub cap: usize,
    /// Same verdict at `cap + 1`.
    pub stabilized: bool,
    pub witness: Option<HomogeneityWitness>,
}

/// `Σ_{k ≤ cap} W_k` is direct, which holds iff every `W^c_k` vanishes.
pub(crate) fn sum_is_direct(family: &Family, cap: usize) -> bool {
    let Rows { index, rows } = build_rows(family, cap);
    let n = index.len();
    let separate: usize = rows.iter().map(|r| rank(r, n)).sum();
    let all: Vec<QVec> = rows.into_iter().flatten().collect();
    rank(&all, n) == separate
}

/// Homogeneity by the direct-sum test; the intersections are only formed to
/// produce a witness when the test fails.
pub(crate) fn family_homogeneity(family: &Family, cap: usize) -> Result<HomogeneityResult> {
    let homogeneous = sum_is_direct(family, cap);
    let stabilized = homogeneous == sum_is_direct(family, cap + 1);
    let witness = if homogeneous {
        None
    } else {
        let here = family_graded(family, cap, cap)?;
        let d = here
            .degrees
            .iter()
            .find(|d| !d.w_c.is_empty())
            .ok_or_else(|| Error::Internal("sum not direct but every W^c_k is zero".into()))?;
        Some(witness_relation(family, &here, d.k, &d.w_c[0])?)
    };
    Ok(HomogeneityResult { homogeneous, cap, stabilized, witness })
}

/// Writes `w ∈ W_k ∩ Σ_{j≠k} W_j` in both ways and subtracts.
fn witness_relation(family: &Family, g: &GradedSpaces, k: usize, w: &BiPoly) -> Result<HomogeneityWitness> {
    let n = family.len();
    let target = g.coordinates(w).ok_or_else(|| Error::Internal("witness outside index".into()))?;
    let Rows { rows, index } = build_rows(family, g.cap);
    debug_assert_eq!(index, g.index);
    let alpha = solve_coordinates(&rows[k - 1], &target).ok_or_else(|| Error::Internal("witness not in W_k".into()))?;
    let others: Vec<(usize, usize)> =
        (1..=g.cap).filter(|&j| j != k).flat_map(|j| (0..n).map(move |i| (j, i))).collect();
    let other_rows: Vec<QVec> = others.iter().map(|&(j, i)| rows[j - 1][i].clone()).collect();
    let beta = solve_coordinates(&other_rows, &target).ok_or_else(|| Error::Internal("witness not in the complement sum".into()))?;
    let mut b: Vec<Vec<RationalScalar>> = vec![vec![BigRational::zero(); g.cap + 1]; n];
    for i in 0..n {
        b[i][k] = alpha[i].clone();
    }
    for (c, &(j, i)) in beta.iter().zip(&others) {
        b[i][j] -= c;
    }
    let qs: Vec<UniPoly> = b.iter().map(|bi| UniPoly::from_binomial_basis(bi)).collect();
    let relation = Relation::for_terms(family.terms(), qs)
        .map_err(|e| Error::Internal(format!("witness relation failed: {}", e)))?;
    Ok(HomogeneityWitness { k, element: w.clone(), relation })
}

pub fn is_homogeneous(prog: &Progression, cap: usize) -> Result<HomogeneityResult> {
    if cap < 1 {
        return Err(Error::InvalidArgument("cap must be at least 1".into()));
    }
    family_homogeneity(&prog.family(), cap)
}

/// `Σ_{k ≤ cap} dim {a : Σ a_i (x+P_i(y))^k ≡ 0}`, the dimension of the span of
/// homogeneous relations up to `cap`.
pub fn homogeneous_ansatz_dimension(prog: &Progression, cap: usize) -> usize {
    let family = prog.family();
    (1..=cap).map(|k| family_homogeneous(&family, k).len()).sum()
}


#[cfg(test)]
mod tests {
    use super::*;

    fn prog(p: &[&[i64]]) -> Progression {
        Progression::from_int_coeffs(p).unwrap()
    }

    #[test]
    fn homogeneous_cubic_example() {
        let p = prog(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]);
        let g = graded_spaces(&p, 2, p.default_cap()).unwrap();
        let w1: Vec<String> = g.degrees[0].w_basis.iter().map(|b| b.render()).collect();
        assert_eq!(w1, vec!["x", "y", "y^3"]);
        let w2: Vec<String> = g.degrees[1].w_basis.iter().map(|b| b.render()).collect();
        assert_eq!(w2, vec!["(1/2)x^2 - (1/2)x", "xy - (1/2)y + (1/2)y^2", "y^2", "xy^3 - (1/2)y^3 + (1/2)y^6"]);
        assert_eq!(g.degrees[1].w_basis[1].render_binomial(), "x*y + C(y,2)");
        assert!(g.w_c_total.is_empty());
        assert_eq!(g.degrees[0].tau, vec![
            crate::linalg::qvec_from_ints(&[1, 1, 1, 1]),
            crate::linalg::qvec_from_ints(&[0, 1, 2, 0]),
            crate::linalg::qvec_from_ints(&[0, 0, 0, 1]),
        ]);
    }

    #[test]
    fn inhomogeneous_quadratic_example() {
        let p = prog(&[&[0, 1], &[0, 2], &[0, 0, 1]]);
        let g = graded_spaces(&p, 2, p.default_cap()).unwrap();
        assert_eq!(g.w_c_total.len(), 1);
        assert_eq!(g.w_c_total[0].render(), "y^2");
        assert_eq!(g.degrees[0].t_prime_k, 2);
        assert_eq!(g.degrees[1].t_prime_k, 3);
        for k in 1..=2 {
            let d = &g.degrees[k - 1];
            assert_eq!(d.w_c.len() + d.t_prime_k, d.t_k);
        }
        let h = is_homogeneous(&p, p.default_cap()).unwrap();
        assert!(!h.homogeneous && h.stabilized);
        let w = h.witness.unwrap();
        assert_eq!(w.element.render(), "y^2");
        assert_eq!(w.relation.max_degree(), Some(2));
    }

    #[test]
    fn homogeneity_examples() {
        assert!(is_homogeneous(&prog(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]), 6).unwrap().homogeneous);
        assert!(!is_homogeneous(&prog(&[&[0, 1], &[0, 2], &[0, 3], &[0, 0, 1]]), 6).unwrap().homogeneous);
        let indep = prog(&[&[0, 1], &[0, 0, 1]]);
        let g = graded_spaces(&indep, 3, 3).unwrap();
        assert!(g.degrees.iter().all(|d| d.w_c.is_empty()));
    }

    #[test]
    fn direct_sum_dimensions() {
        for p in [prog(&[&[0, 1], &[0, 2], &[0, 0, 1]]), prog(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]])] {
            let cap = p.default_cap();
            let g = graded_spaces(&p, cap, cap).unwrap();
            for k in 1..=cap {
                let lhs = g.dim_v(k);
                let rhs: usize = g.degrees[..k].iter().map(|d| d.t_prime_k).sum::<usize>() + g.dim_wc_in_v(k);
                assert_eq!(lhs, rhs, "k = {}", k);
            }
        }
    }

    #[test]
    fn ansatz_dimension_matches_homogeneity() {
        for p in [prog(&[&[0, 1], &[0, 2], &[0, 0, 1]]), prog(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]), prog(&[&[0, 1], &[0, 0, 1], &[0, 1, 1]])] {
            let cap = p.default_cap();
            let homog = is_homogeneous(&p, cap).unwrap().homogeneous;
            let same = crate::progression::relation_space(&p, cap).unwrap().dim() == homogeneous_ansatz_dimension(&p, cap);
            assert_eq!(homog, sum_is_direct(&p.family(), cap));
            let g = graded_spaces(&p, cap, cap).unwrap();
            assert_eq!(homog, g.w_c_total.is_empty());
            assert_eq!(homog, same);
        }
    }
}
