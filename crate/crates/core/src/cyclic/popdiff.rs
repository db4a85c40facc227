use rayon::prelude::*;
use serde::Serialize;

use super::count::poly_table;
use super::signal::{is_prime, Subset};
use crate::error::{Error, Result};
use crate::progression::Progression;

#[derive(Clone, Debug, Serialize)]
pub struct PopDiffReport {
    pub n: usize,
    pub alpha: f64,
    pub epsilon: f64,
    /// `(α^{t+1} - ε) N`.
    pub threshold: f64,
    /// `|A ∩ (A + P_1(n)) ∩ … ∩ (A + P_t(n))|` for every `n`.
    pub intersections: Vec<usize>,
    pub qualifying: Vec<usize>,
    pub fraction: f64,
}

/// Scans every `n ∈ ℤ/Nℤ` for `|A ∩ ∩_i (A + P_i(n))| > (α^{t+1} - ε) N`.
pub fn popular_differences(a: &Subset, prog: &Progression, epsilon: f64) -> Result<PopDiffReport> {
    let n = a.modulus();
    if !is_prime(n as u64) {
        return Err(Error::NotPrime(n as u64));
    }
    let alpha = a.density();
    let threshold = (alpha.powi(prog.t() as i32 + 1) - epsilon) * n as f64;
    let tables: Vec<Vec<usize>> = prog.polys().iter().map(|p| poly_table(p, n)).collect();
    let mask = a.mask();
    let members: Vec<usize> = a.iter().collect();
    let intersections: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|d| {
            let shifts: Vec<usize> = tables.iter().map(|t| t[d]).collect();
            // x - P_i(d) ∈ A for every i.
            members.iter().filter(|&&x| shifts.iter().all(|&s| mask[(x + n - s) % n])).count()
        })
        .collect();
    let qualifying: Vec<usize> = (0..n).filter(|&d| intersections[d] as f64 > threshold).collect();
    let fraction = qualifying.len() as f64 / n as f64;
    Ok(PopDiffReport { n, alpha, epsilon, threshold, intersections, qualifying, fraction })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_and_zero_difference() {
        let p = Progression::from_int_coeffs(&[&[0, 0, 1], &[0, 0, 2], &[0, 0, 0, 1], &[0, 0, 0, 2]]).unwrap();
        let full = popular_differences(&Subset::full(31), &p, 0.01).unwrap();
        assert_eq!(full.qualifying.len(), 31);
        let a = Subset::bernoulli(101, 0.3, 5);
        let r = popular_differences(&a, &p, 0.01).unwrap();
        assert!(r.qualifying.contains(&0));
        assert_eq!(r.intersections[0], a.len());
    }
}
