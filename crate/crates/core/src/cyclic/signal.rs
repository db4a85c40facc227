use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// `exp(2πiθ)`.
pub fn e(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * theta)
}

/// Compensated (Neumaier) sum of complex values in iteration order.
pub fn kahan_sum(values: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let (mut sr, mut cr, mut si, mut ci) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for v in values {
        neumaier(&mut sr, &mut cr, v.re);
        neumaier(&mut si, &mut ci, v.im);
    }
    Complex64::new(sr + cr, si + ci)
}

pub fn kahan_sum_real(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for v in values {
        neumaier(&mut s, &mut c, v);
    }
    s + c
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A complex-valued function on ℤ/Nℤ.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("signal modulus must be positive".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("signal values must be finite".into()));
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self { values: vec![c; n.max(1)] }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self { values: (0..n.max(1)).map(f).collect() }
    }

    /// `x ↦ e(num(x) / N)` with an exact integer numerator.
    pub fn phase(n: usize, num: impl Fn(usize) -> u64) -> Self {
        Self::from_fn(n, |x| e((num(x) % n as u64) as f64 / n as f64))
    }

    /// Independent uniform ±1 values.
    pub fn random_pm1(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(n, |_| Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0))
    }

    /// Independent values uniform in the unit disk.
    pub fn random_disk(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(n, |_| {
            let r: f64 = rng.gen::<f64>().sqrt();
            let th: f64 = rng.gen();
            e(th) * r
        })
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_one_bounded(&self) -> bool {
        self.values.iter().all(|v| v.norm() <= 1.0 + 1e-12)
    }

    pub fn mean(&self) -> Complex64 {
        kahan_sum(self.values.iter().copied()) / self.values.len() as f64
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn pointwise(&self, other: &Signal) -> Result<Self> {
        if other.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch { expected: self.modulus(), found: other.modulus() });
        }
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() })
    }

    pub fn add(&self, other: &Signal) -> Result<Self> {
        if other.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch { expected: self.modulus(), found: other.modulus() });
        }
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() })
    }

    /// `x ↦ f(x + h)`.
    pub fn translate(&self, h: usize) -> Self {
        let n = self.modulus();
        Self::from_fn(n, |x| self.values[(x + h) % n])
    }
}

/// A subset of ℤ/Nℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subset {
    mask: Vec<bool>,
}

impl Subset {
    pub fn from_residues(n: usize, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut mask = vec![false; n];
        for r in residues {
            mask[(r % n as u64) as usize] = true;
        }
        Ok(Self { mask })
    }

    pub fn full(n: usize) -> Self {
        Self { mask: vec![true; n.max(1)] }
    }

    pub fn empty(n: usize) -> Self {
        Self { mask: vec![false; n.max(1)] }
    }

    /// Each residue kept independently with probability `alpha`.
    pub fn bernoulli(n: usize, alpha: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self { mask: (0..n.max(1)).map(|_| rng.gen::<f64>() < alpha).collect() }
    }

    /// One residue per line; blank lines and `#` comments ignored.
    pub fn parse_text(n: usize, text: &str) -> Result<Self> {
        let mut residues = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v: i64 = line
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: not an integer: {:?}", lineno + 1, line)))?;
            residues.push(v.rem_euclid(n as i64) as u64);
        }
        Self::from_residues(n, residues)
    }

    pub fn to_text(&self) -> String {
        self.iter().map(|r| format!("{}\n", r)).collect()
    }

    pub fn modulus(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x % self.mask.len()]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn density(&self) -> f64 {
        self.len() as f64 / self.modulus() as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn indicator(&self) -> Signal {
        Signal::from_fn(self.modulus(), |x| Complex64::new(if self.mask[x] { 1.0 } else { 0.0 }, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(101) && is_prime(809) && is_prime(2));
        assert!(!is_prime(1) && !is_prime(64) && !is_prime(91));
    }

    #[test]
    fn subset_text_round_trip() {
        let a = Subset::bernoulli(37, 0.5, 7);
        assert_eq!(Subset::parse_text(37, &a.to_text()).unwrap(), a);
        assert!(Subset::parse_text(5, "1\nfoo\n").is_err());
    }

    #[test]
    fn kahan_beats_naive_on_cancellation() {
        let vals = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(kahan_sum_real(vals), 2.0);
    }
}
