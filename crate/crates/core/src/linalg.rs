//! Exact linear algebra over ℚ and ℤ.
//!
//! Echelon forms always pivot on the largest column index first, which makes
//! every basis produced here canonical for its span.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::polycore::RationalScalar;

pub type QVec = Vec<RationalScalar>;
pub type ZVec = Vec<BigInt>;

pub fn qvec_from_ints(v: &[i64]) -> QVec {
    v.iter().map(|&a| BigRational::from_integer(BigInt::from(a))).collect()
}

pub fn is_zero_vec(v: &[RationalScalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Integer row with the same direction as `v`: denominators cleared, content removed,
/// and the entry at the largest nonzero index made positive.
pub fn primitive_integer(v: &[RationalScalar]) -> ZVec {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut z: ZVec = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = z.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    if !g.is_zero() {
        for a in z.iter_mut() {
            *a /= &g;
        }
    }
    if let Some(last) = z.iter().rev().find(|a| !a.is_zero()) {
        if last.is_negative() {
            for a in z.iter_mut() {
                *a = -&*a;
            }
        }
    }
    z
}

pub fn to_qvec(z: &[BigInt]) -> QVec {
    z.iter().map(|a| BigRational::from_integer(a.clone())).collect()
}

/// Fraction-free (Bareiss) row echelon form, scanning columns from the highest index.
///
/// Returns the nonzero echelon rows and their pivot columns (strictly decreasing).
pub fn bareiss_echelon(mut a: Vec<ZVec>, ncols: usize) -> (Vec<ZVec>, Vec<usize>) {
    let m = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in (0..ncols).rev() {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..m {
            let lead = a[i][c].clone();
            for j in 0..ncols {
                let val = &a[r][c] * &a[i][j] - &lead * &a[r][j];
                debug_assert!((&val % &prev).is_zero());
                a[i][j] = val / &prev;
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Reduced row echelon form over ℚ with largest-index pivots, rows ordered by
/// decreasing pivot, each pivot equal to 1.
pub fn rref(vectors: &[QVec], ncols: usize) -> (Vec<QVec>, Vec<usize>) {
    let mut a: Vec<QVec> = vectors.iter().filter(|v| !is_zero_vec(v)).cloned().collect();
    let m = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in (0..ncols).rev() {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Canonical basis of `{v : M v = 0}` for `M` given by rows.
///
/// Elimination is fraction-free; the kernel vectors are then brought to
/// reduced echelon form and returned as primitive integer vectors.
pub fn kernel(rows: &[QVec], ncols: usize) -> Vec<ZVec> {
    let int_rows: Vec<ZVec> = rows.iter().filter(|r| !is_zero_vec(r)).map(|r| primitive_integer(r)).collect();
    let (ech, pivots) = bareiss_echelon(int_rows, ncols);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut out = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x: QVec = vec![BigRational::zero(); ncols];
        x[f] = BigRational::one();
        // Back substitution: the last echelon row has the smallest pivot.
        for (row, &p) in ech.iter().zip(&pivots).rev() {
            let mut s = BigRational::zero();
            for (j, a) in row.iter().enumerate() {
                if j != p && !a.is_zero() && !x[j].is_zero() {
                    s += BigRational::from_integer(a.clone()) * &x[j];
                }
            }
            x[p] = -s / BigRational::from_integer(row[p].clone());
        }
        out.push(x);
    }
    let (basis, _) = rref(&out, ncols);
    basis.iter().map(|v| primitive_integer(v)).collect()
}

/// Rank of a set of vectors, by fraction-free elimination.
pub fn rank(vectors: &[QVec], ncols: usize) -> usize {
    let rows: Vec<ZVec> = vectors.iter().filter(|v| !is_zero_vec(v)).map(|v| primitive_integer(v)).collect();
    bareiss_echelon(rows, ncols).0.len()
}

/// Coordinates `c` with `Σ c_i basis_i = v`, if any. The basis need not be independent;
/// free coefficients are set to zero.
pub fn solve_coordinates(basis: &[QVec], v: &[RationalScalar]) -> Option<QVec> {
    let n = v.len();
    let m = basis.len();
    // Columns: basis vectors then -v; find a kernel vector with last entry 1.
    let rows: Vec<QVec> = (0..n)
        .map(|i| {
            let mut r: QVec = basis.iter().map(|b| b[i].clone()).collect();
            r.push(-v[i].clone());
            r
        })
        .collect();
    let (red, pivots) = rref_columns_first(&rows, m + 1);
    if pivots.contains(&m) {
        return None;
    }
    let mut c = vec![BigRational::zero(); m];
    for (row, &p) in red.iter().zip(&pivots) {
        c[p] = -row[m].clone();
    }
    Some(c)
}

/// Gauss-Jordan with pivots scanned from the lowest column index.
fn rref_columns_first(rows: &[QVec], ncols: usize) -> (Vec<QVec>, Vec<usize>) {
    let mut a: Vec<QVec> = rows.to_vec();
    let m = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// A subspace of ℚ^n stored as its canonical reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<QVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis: Vec<QVec> = (0..ambient).map(|i| unit(ambient, i)).collect();
        Self::span(ambient, &basis)
    }

    pub fn span(ambient: usize, vectors: &[QVec]) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient));
        let (rows, pivots) = rref(vectors, ambient);
        Self { ambient, rows, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduced echelon rows (pivot entries equal 1).
    pub fn basis(&self) -> &[QVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis as primitive integer vectors.
    pub fn integer_basis(&self) -> Vec<ZVec> {
        self.rows.iter().map(|r| primitive_integer(r)).collect()
    }

    /// Remainder of `v` after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[RationalScalar]) -> QVec {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[RationalScalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.rows.clone();
        vs.extend(other.rows.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let m = self.rows.len();
        let n = other.rows.len();
        if m == 0 || n == 0 {
            return Subspace::zero(self.ambient);
        }
        let rows: Vec<QVec> = (0..self.ambient)
            .map(|i| {
                self.rows
                    .iter()
                    .map(|u| u[i].clone())
                    .chain(other.rows.iter().map(|w| -w[i].clone()))
                    .collect()
            })
            .collect();
        let ker = kernel(&rows, m + n);
        let vecs: Vec<QVec> = ker
            .iter()
            .map(|k| {
                let mut v = vec![BigRational::zero(); self.ambient];
                for (a, u) in k[..m].iter().zip(&self.rows) {
                    if a.is_zero() {
                        continue;
                    }
                    let a = BigRational::from_integer(a.clone());
                    for (x, y) in v.iter_mut().zip(u) {
                        *x += &a * y;
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    /// Orthogonal complement under the standard dot product.
    pub fn orthogonal_complement(&self) -> Subspace {
        let ker = kernel(&self.rows, self.ambient);
        let vecs: Vec<QVec> = ker.iter().map(|k| to_qvec(k)).collect();
        Subspace::span(self.ambient, &vecs)
    }
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::one();
    v
}

pub fn dot(a: &[RationalScalar], b: &[RationalScalar]) -> RationalScalar {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Indices of `candidates` that extend `base` greedily to a basis of the joint span.
pub fn greedy_extension(base: &Subspace, candidates: &[QVec]) -> Vec<usize> {
    let mut acc = base.clone();
    let mut chosen = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        if !acc.contains(c) {
            acc = acc.sum(&Subspace::span(acc.ambient(), std::slice::from_ref(c)));
            chosen.push(i);
        }
    }
    chosen
}

/// Integer row echelon by unimodular operations on `[A | I]`.
///
/// Returns the transformed matrix and the number of rows with a pivot in the
/// first `ncols` columns; rows past that count have a zero `A` part.
fn integer_echelon(mut a: Vec<ZVec>, ncols: usize) -> (Vec<ZVec>, usize) {
    let m = a.len();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if !a[i][c].is_zero() && best.is_none_or(|b| a[i][c].abs() < a[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut done = true;
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..m).any(|i| !a[i][c].is_zero()) {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -&*x;
                }
            }
            // Size-reduce earlier rows against the new pivot.
            let pivot_row = a[r].clone();
            for i in 0..r {
                let q = a[i][c].div_floor(&pivot_row[c]);
                if !q.is_zero() {
                    for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    (a, r)
}

/// ℤ-basis of `{v ∈ ℤ^n : A v = 0}`.
pub fn integer_kernel(rows: &[ZVec], ncols: usize) -> Vec<ZVec> {
    let m = rows.len();
    // Work on Aᵀ augmented with the identity.
    let aug: Vec<ZVec> = (0..ncols)
        .map(|j| {
            let mut r: ZVec = rows.iter().map(|row| row[j].clone()).collect();
            r.extend((0..ncols).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let (ech, rank) = integer_echelon(aug, m);
    let mut basis: Vec<ZVec> = ech[rank..].iter().map(|r| r[m..].to_vec()).collect();
    hermite_reduce(&mut basis, ncols);
    basis
}

/// ℤ-basis (Hermite normal form rows) of the lattice generated by `gens`.
pub fn lattice_basis(gens: &[ZVec], ncols: usize) -> Vec<ZVec> {
    let mut basis: Vec<ZVec> = gens.to_vec();
    hermite_reduce(&mut basis, ncols);
    basis
}

fn hermite_reduce(basis: &mut Vec<ZVec>, ncols: usize) {
    let (ech, rank) = integer_echelon(std::mem::take(basis), ncols);
    *basis = ech.into_iter().take(rank).collect();
}

/// ℤ-basis of `S ∩ ℤ^n`.
pub fn saturated_lattice(s: &Subspace) -> Vec<ZVec> {
    let perp = s.orthogonal_complement();
    integer_kernel(&perp.integer_basis(), s.ambient())
}

/// ℤ-basis of the integer vectors orthogonal to `S`.
pub fn annihilator_lattice(s: &Subspace) -> Vec<ZVec> {
    integer_kernel(&s.integer_basis(), s.ambient())
}

/// Integer coordinates of `v` in the lattice basis, if `v` lies in the lattice.
pub fn integer_coordinates(basis: &[ZVec], v: &[BigInt]) -> Option<ZVec> {
    let qb: Vec<QVec> = basis.iter().map(|b| to_qvec(b)).collect();
    let c = solve_coordinates(&qb, &to_qvec(v))?;
    if c.iter().all(|q| q.is_integer()) {
        Some(c.iter().map(|q| q.to_integer()).collect())
    } else {
        None
    }
}
