//! Brute-force relation oracle, independent of the symbolic expansion code.
//!
//! The identity `Σ_{i,k} b_{ik} C(x + P_i(y), k) = 0` is imposed at every
//! point of an integer grid large enough that vanishing there forces the
//! polynomial to vanish identically. The kernel is found by plain Gauss-Jordan
//! elimination written here from scratch.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::polycore::{binomial_bigint, UniPoly};
use crate::progression::{Progression, RelationSpace};

/// Kernel basis of the grid evaluation matrix, unknowns ordered `(k-1)(t+1) + i`.
///
/// `polys` are `P_1..P_t` and must be integer valued.
pub fn dense_grid_relation_kernel(polys: &[UniPoly], cap: usize) -> Vec<Vec<BigRational>> {
    let n = polys.len() + 1;
    let deg = polys.iter().filter_map(UniPoly::degree).max().unwrap_or(0).max(1);
    // Degree in x is at most cap, in y at most cap * deg.
    let xs = 0..=(cap as i64);
    let ys: Vec<i64> = (0..=(cap * deg) as i64).collect();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for x in xs {
        for &y in &ys {
            let shifts: Vec<BigInt> = std::iter::once(BigInt::from(x))
                .chain(polys.iter().map(|p| BigInt::from(x) + p.eval_int(y).to_integer()))
                .collect();
            let mut row = Vec::with_capacity(n * cap);
            for k in 1..=cap {
                for s in &shifts {
                    row.push(BigRational::from_integer(binomial_bigint(s, k)));
                }
            }
            rows.push(row);
        }
    }
    nullspace(rows, n * cap)
}

fn nullspace(mut a: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        a[r].iter_mut().for_each(|v| *v *= &inv);
        let pr = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                row.iter_mut().zip(&pr).for_each(|(v, w)| *v -= &f * w);
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); ncols];
            v[free] = BigRational::one();
            for (row, &pc) in a.iter().zip(&pivot_cols) {
                v[pc] = -row[free].clone();
            }
            v
        })
        .collect()
}

fn rank(mut a: Vec<Vec<BigRational>>) -> usize {
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let pr = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pr[c];
                row.iter_mut().zip(&pr).for_each(|(v, w)| *v -= &f * w);
            }
        }
        r += 1;
    }
    r
}

/// Flattens a relation space into the oracle's unknown ordering.
fn flatten(space: &RelationSpace, n: usize) -> Vec<Vec<BigRational>> {
    let cap = space.degree_cap;
    space
        .basis
        .iter()
        .map(|rel| {
            let mut v = vec![BigRational::zero(); n * cap];
            for (i, q) in rel.qs().iter().enumerate() {
                for (k, b) in q.to_binomial_basis().into_iter().enumerate().skip(1) {
                    v[(k - 1) * n + i] = b;
                }
            }
            v
        })
        .collect()
}

/// Whether `space` spans exactly the oracle kernel.
pub fn agrees_with_oracle(prog: &Progression, space: &RelationSpace) -> bool {
    let n = prog.t() + 1;
    let oracle = dense_grid_relation_kernel(prog.polys(), space.degree_cap);
    let ours = flatten(space, n);
    if ours.len() != oracle.len() {
        return false;
    }
    let r_oracle = rank(oracle.clone());
    let joint: Vec<Vec<BigRational>> = oracle.into_iter().chain(ours.iter().cloned()).collect();
    r_oracle == ours.len() && rank(joint) == r_oracle && rank(ours) == r_oracle
}
