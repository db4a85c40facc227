use num_complex::Complex64;
use rustfft::FftPlanner;

use super::signal::{kahan_sum, kahan_sum_real, Signal};
use crate::error::{Error, Result};

/// `‖f‖_{U^s}` by the recursion `‖f‖^{2^s} = E_h ‖Δ_h f‖_{U^{s-1}}^{2^{s-1}}`,
/// `Δ_h f(x) = f(x+h) conj(f(x))`, with `‖f‖_{U^1} = |E f|`.
pub fn gowers_norm(f: &Signal, s: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidArgument("Gowers norm order must be at least 1".into()));
    }
    let mut scratch = vec![Vec::new(); s];
    let p = power(f.values(), s, &mut scratch).max(0.0);
    Ok(p.powf(1.0 / (1u64 << s) as f64))
}

/// `‖f‖_{U^s}^{2^s}`.
fn power(vals: &[Complex64], s: usize, scratch: &mut [Vec<Complex64>]) -> f64 {
    let n = vals.len();
    if s == 1 {
        return (kahan_sum(vals.iter().copied()) / n as f64).norm_sqr();
    }
    let (head, rest) = scratch.split_first_mut().expect("scratch sized to s");
    head.resize(n, Complex64::new(0.0, 0.0));
    let terms: Vec<f64> = (0..n)
        .map(|h| {
            for x in 0..n {
                let xh = if x + h >= n { x + h - n } else { x + h };
                head[x] = vals[xh] * vals[x].conj();
            }
            power(head, s - 1, rest)
        })
        .collect();
    kahan_sum_real(terms) / n as f64
}

/// `‖f‖_{U^2} = (Σ_ξ |f̂(ξ)|^4)^{1/4}` with `f̂(ξ) = E_x f(x) e(-xξ/N)`.
pub fn gowers_u2_fourier(f: &Signal) -> f64 {
    let n = f.modulus();
    let mut buf = f.values().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let sum = kahan_sum_real(buf.iter().map(|c| (c.norm_sqr() / (n as f64 * n as f64)).powi(2)));
    sum.powf(0.25)
}
