use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::signal::{is_prime, kahan_sum, Signal, Subset};
use crate::error::{Error, Result};
use crate::linalg::{integer_coordinates, lattice_basis, to_qvec, QVec, Subspace, ZVec};
use crate::polycore::{rat, UniPoly};
use crate::progression::{complexity_profile, relation_space, Progression};

/// Default cap on loop iterations for [`linear_count_operator`].
pub const DEFAULT_BUDGET: u128 = 1 << 31;

/// `P(y) mod N` for `y = 0..N`; `P` must be integer valued.
pub fn poly_table(p: &UniPoly, n: usize) -> Vec<usize> {
    let nb = BigInt::from(n);
    (0..n)
        .map(|y| {
            let v = p.eval_int(y as i64).to_integer() % &nb;
            let v = if v < BigInt::zero() { v + &nb } else { v };
            v.to_usize().expect("residue fits")
        })
        .collect()
}

fn check_moduli(fs: &[Signal]) -> Result<usize> {
    let n = fs.first().ok_or_else(|| Error::InvalidArgument("no signals".into()))?.modulus();
    for f in fs {
        if f.modulus() != n {
            return Err(Error::ModulusMismatch { expected: n, found: f.modulus() });
        }
    }
    Ok(n)
}

/// Each signal repeated twice so that `x + o` with `x, o < N` needs no reduction.
fn doubled(fs: &[Signal]) -> Vec<Vec<Complex64>> {
    fs.iter().map(|f| f.values().iter().chain(f.values()).copied().collect()).collect()
}

fn inner_sum(tables: &[Vec<Complex64>], offsets: &[usize], n: usize) -> Complex64 {
    let mut acc = Complex64::zero();
    for x in 0..n {
        let mut p = tables[0][x + offsets[0]];
        for (t, &o) in tables.iter().zip(offsets).skip(1) {
            p *= t[x + o];
        }
        acc += p;
    }
    acc
}

/// `E_{x,y ∈ ℤ/Nℤ} Π_i f_i(x + P_i(y))`.
pub fn count_operator(fs: &[Signal], prog: &Progression) -> Result<Complex64> {
    if fs.len() != prog.t() + 1 {
        return Err(Error::InvalidArgument(format!("expected {} signals, got {}", prog.t() + 1, fs.len())));
    }
    let n = check_moduli(fs)?;
    let tables: Vec<Vec<usize>> = prog.terms().iter().map(|p| poly_table(p, n)).collect();
    let data = doubled(fs);
    let per_y: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|y| {
            let offs: Vec<usize> = tables.iter().map(|t| t[y]).collect();
            inner_sum(&data, &offs, n)
        })
        .collect();
    Ok(kahan_sum(per_y) / (n as f64 * n as f64))
}

/// `E_{x, y_1..y_d} Π_i f_i(x + Σ_j a_ij y_j)`.
pub fn linear_count_operator(fs: &[Signal], coeffs: &[Vec<i64>], budget: u128) -> Result<Complex64> {
    if fs.len() != coeffs.len() {
        return Err(Error::InvalidArgument("one coefficient row per signal required".into()));
    }
    let n = check_moduli(fs)?;
    let d = coeffs.first().map_or(0, Vec::len);
    if d == 0 || coeffs.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidArgument("coefficient rows must share a positive length d".into()));
    }
    let needed = (n as u128).saturating_pow(d as u32 + 1);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let a: Vec<Vec<usize>> =
        coeffs.iter().map(|r| r.iter().map(|&c| c.rem_euclid(n as i64) as usize).collect()).collect();
    let data = doubled(fs);
    let rest_count = n.pow(d as u32 - 1);
    let per_first: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|y1| {
            let mut ys = vec![0usize; d];
            ys[0] = y1;
            let mut partial = Vec::with_capacity(rest_count);
            for _ in 0..rest_count {
                let offs: Vec<usize> = a
                    .iter()
                    .map(|row| row.iter().zip(&ys).fold(0usize, |acc, (c, y)| (acc + c * y) % n))
                    .collect();
                partial.push(inner_sum(&data, &offs, n));
                for y in ys.iter_mut().skip(1) {
                    *y += 1;
                    if *y < n {
                        break;
                    }
                    *y = 0;
                }
            }
            kahan_sum(partial)
        })
        .collect();
    Ok(kahan_sum(per_first) / (needed as f64))
}

/// A ℤ-basis `Q_1..Q_d` of `{Σ b_i P_i : b ∈ ℤ^t}` and integer coefficients with
/// `P_i = Σ_j a_ij Q_j` (row 0 is `P_0 = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearModel {
    pub basis: Vec<UniPoly>,
    pub coeffs: Vec<Vec<i64>>,
}

pub fn linear_model(prog: &Progression) -> Result<LinearModel> {
    let width = prog.max_degree() + 1;
    let vec_of = |p: &UniPoly| -> ZVec {
        let b = p.to_binomial_basis();
        (0..width).map(|k| b.get(k).map_or_else(BigInt::zero, |q| q.to_integer())).collect()
    };
    let gens: Vec<ZVec> = prog.polys().iter().map(vec_of).collect();
    // Prefer members of the progression as the basis when they generate the lattice.
    let mut chosen: Vec<usize> = Vec::new();
    let mut span = Subspace::zero(width);
    for (i, g) in gens.iter().enumerate() {
        let q = to_qvec(g);
        if !span.contains(&q) {
            span = span.sum(&Subspace::span(width, &[q]));
            chosen.push(i);
        }
    }
    let greedy: Vec<ZVec> = chosen.iter().map(|&i| gens[i].clone()).collect();
    let basis_vecs = if gens.iter().all(|g| integer_coordinates(&greedy, g).is_some()) {
        greedy
    } else {
        lattice_basis(&gens, width)
    };
    let mut coeffs = vec![vec![0i64; basis_vecs.len()]];
    for g in &gens {
        let c = integer_coordinates(&basis_vecs, g).ok_or_else(|| Error::Internal("lattice coordinates".into()))?;
        coeffs.push(c.iter().map(|v| v.to_i64().expect("small coefficient")).collect());
    }
    let basis = basis_vecs
        .iter()
        .map(|v| {
            let q: QVec = std::iter::once(rat(0)).chain(to_qvec(v).into_iter().skip(1)).collect();
            UniPoly::from_binomial_basis(&q)
        })
        .collect();
    Ok(LinearModel { basis, coeffs })
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub n: usize,
    pub poly_count: Complex64,
    pub linear_count: Complex64,
    pub difference: f64,
}

/// Polynomial count against its linear model for `f_i = 1_A`.
pub fn compare_poly_vs_linear(a: &Subset, prog: &Progression, cap: usize) -> Result<CountReport> {
    compare_poly_vs_linear_with(a, prog, cap, DEFAULT_BUDGET)
}

/// As [`compare_poly_vs_linear`] with an explicit loop budget for the linear count.
pub fn compare_poly_vs_linear_with(a: &Subset, prog: &Progression, cap: usize, budget: u128) -> Result<CountReport> {
    let n = a.modulus();
    if !is_prime(n as u64) {
        return Err(Error::NotPrime(n as u64));
    }
    let profile = complexity_profile(prog, cap)?;
    if let Some(index) = profile.iter().position(|c| c.value > 1) {
        let space = relation_space(prog, cap)?;
        let witness = space
            .basis
            .iter()
            .find(|r| r.degree_profile()[index].is_some_and(|d| d > 1))
            .map(|r| r.render())
            .unwrap_or_default();
        return Err(Error::ComplexityTooHigh { index, relation: witness });
    }
    let model = linear_model(prog)?;
    let fs = vec![a.indicator(); prog.t() + 1];
    let poly_count = count_operator(&fs, prog)?;
    let linear_count = linear_count_operator(&fs, &model.coeffs, budget)?;
    Ok(CountReport { n, poly_count, linear_count, difference: (poly_count - linear_count).norm() })
}
