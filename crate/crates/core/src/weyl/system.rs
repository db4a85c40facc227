use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::phase::{binom_wrapped, Phase};
use super::symbolic::SymReal;
use crate::cyclic::kahan_sum;
use crate::error::{Error, Result};
use crate::progression::Progression;

/// `g(n) = g_0 + g_1 n + … + g_d C(n, d)` on `ℝ^dim`.
#[derive(Clone, Debug)]
pub struct PolySequence {
    dim: usize,
    coeffs: Vec<Vec<SymReal>>,
    phases: Vec<Vec<Phase>>,
}

impl PolySequence {
    pub fn new(coeffs: Vec<Vec<SymReal>>) -> Result<Self> {
        let dim = coeffs.first().map_or(0, Vec::len);
        if dim == 0 || coeffs.iter().any(|g| g.len() != dim) {
            return Err(Error::InvalidArgument("sequence coefficients must share a positive dimension".into()));
        }
        let phases = coeffs.iter().map(|g| g.iter().map(SymReal::phase).collect()).collect();
        Ok(Self { dim, coeffs, phases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of the last nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|g| g.iter().any(|c| !c.is_zero())).unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Vec<SymReal>] {
        &self.coeffs
    }

    pub(crate) fn coeff_phases(&self) -> &[Vec<Phase>] {
        &self.phases
    }

    /// `g_k ∈ G_k = {0}^{k-1} × ℝ^{dim-k+1}` for every `k ≥ 1`.
    pub fn is_adapted(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .all(|(k, g)| g.iter().take(k - 1).all(SymReal::is_zero) && (k <= self.dim || g.iter().all(SymReal::is_zero)))
    }

    /// `g(n) mod 1`.
    pub fn eval(&self, n: i128) -> Vec<Phase> {
        let mut out = vec![Phase::ZERO; self.dim];
        for (k, g) in self.phases.iter().enumerate() {
            let b = binom_wrapped(n, k);
            for (o, c) in out.iter_mut().zip(g) {
                *o += c.mul_wrapped(b);
            }
        }
        out
    }

    /// Exact lift of coordinate `l` of `g(n)`.
    pub fn eval_symbolic(&self, n: i64, l: usize) -> SymReal {
        self.coeffs.iter().enumerate().fold(SymReal::zero(), |acc, (k, g)| {
            let b = crate::polycore::binomial_bigint(&n.into(), k);
            &acc + &g[l].scale(&b.into())
        })
    }
}

/// A standard Weyl system of order `s`: `T(a_1, …, a_s) = (a_1 + a_0, a_2 + a_1, …)`.
///
/// `a_0` is declared irrational by the caller.
#[derive(Clone, Debug)]
pub struct WeylSystem {
    pub s: usize,
    pub a0: SymReal,
    pub base: Vec<SymReal>,
    seq: PolySequence,
}

impl WeylSystem {
    pub fn new(a0: SymReal, base: Vec<SymReal>) -> Result<Self> {
        let s = base.len();
        if s == 0 {
            return Err(Error::InvalidArgument("Weyl system order must be at least 1".into()));
        }
        if a0.is_rational() {
            return Err(Error::InvalidArgument(format!("rotation a0 = {} is rational", a0)));
        }
        // g_i = (a_{1-i}, …, a_{s-i}) with a_{-k} = 0.
        let a = |j: isize| -> SymReal {
            match j {
                0 => a0.clone(),
                j if j > 0 => base[j as usize - 1].clone(),
                _ => SymReal::zero(),
            }
        };
        let coeffs = (0..=s).map(|i| (0..s).map(|l| a(l as isize + 1 - i as isize)).collect()).collect();
        Ok(Self { s, a0, base, seq: PolySequence::new(coeffs)? })
    }

    /// `a0` with base point zero.
    pub fn standard(s: usize, a0: SymReal) -> Result<Self> {
        Self::new(a0, vec![SymReal::zero(); s])
    }

    pub fn sequence(&self) -> &PolySequence {
        &self.seq
    }

    /// `T^n a`.
    pub fn orbit_point(&self, n: i128) -> Vec<Phase> {
        self.seq.eval(n)
    }

    /// One application of `T`.
    pub fn step(&self, p: &[Phase]) -> Vec<Phase> {
        let a0 = self.seq.coeff_phases()[1][0];
        (0..self.s).map(|l| p[l] + if l == 0 { a0 } else { p[l - 1] }).collect()
    }
}

/// `x ↦ e(freq · x)` on a torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TorusCharacter {
    pub frequencies: Vec<i64>,
}

impl TorusCharacter {
    pub fn new(frequencies: Vec<i64>) -> Self {
        Self { frequencies }
    }

    pub fn trivial(dim: usize) -> Self {
        Self { frequencies: vec![0; dim] }
    }

    pub fn is_trivial(&self) -> bool {
        self.frequencies.iter().all(|&f| f == 0)
    }

    pub fn phase(&self, p: &[Phase]) -> Phase {
        self.frequencies.iter().zip(p).fold(Phase::ZERO, |acc, (&f, &x)| acc + x.mul_int(f as i128))
    }

    pub fn eval(&self, p: &[Phase]) -> Complex64 {
        self.phase(p).e()
    }

    pub fn mul(&self, other: &TorusCharacter) -> TorusCharacter {
        TorusCharacter { frequencies: self.frequencies.iter().zip(&other.frequencies).map(|(a, b)| a + b).collect() }
    }
}

/// Conditional expectation of a character onto `𝒵_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Projection {
    /// The character depends only on the first `k` coordinates.
    Retained,
    /// The projection is zero.
    Killed,
}

pub fn factor_projection(chi: &TorusCharacter, k: usize) -> Result<Projection> {
    if k > chi.frequencies.len() {
        return Err(Error::InvalidArgument(format!("factor index {} exceeds order {}", k, chi.frequencies.len())));
    }
    Ok(if chi.frequencies[k..].iter().all(|&f| f == 0) { Projection::Retained } else { Projection::Killed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AverageMode {
    /// `E_{m,n < N} Π_i χ_i(T^{m + P_i(n)} a)`.
    TwoParameter,
    /// `E_{n < N} Π_i χ_i(T^{P_i(n)} a)`.
    SingleParameter,
}

/// `χ_i ∘ g` as a polynomial in the binomial basis.
fn character_coefficients(seq: &PolySequence, chi: &TorusCharacter) -> Vec<Phase> {
    seq.coeff_phases().iter().map(|g| chi.phase(g)).collect()
}

fn eval_poly_phase(coeffs: &[Phase], u: i128) -> Phase {
    coeffs.iter().enumerate().fold(Phase::ZERO, |acc, (k, c)| acc + c.mul_wrapped(binom_wrapped(u, k)))
}

pub fn multiple_average(
    seq: &PolySequence,
    chars: &[TorusCharacter],
    prog: &Progression,
    n: usize,
    mode: AverageMode,
) -> Result<Complex64> {
    if chars.len() != prog.t() + 1 {
        return Err(Error::InvalidArgument(format!("expected {} characters, got {}", prog.t() + 1, chars.len())));
    }
    if chars.iter().any(|c| c.frequencies.len() != seq.dim()) {
        return Err(Error::InvalidArgument("character dimension differs from the system".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("averaging length must be positive".into()));
    }
    let coeffs: Vec<Vec<Phase>> = chars.iter().map(|c| character_coefficients(seq, c)).collect();
    let terms = prog.terms();
    let shifts: Vec<Vec<i128>> = (0..n as i64)
        .map(|y| terms.iter().map(|p| p.eval_int(y).to_integer().try_into().expect("P(y) fits i128")).collect())
        .collect();
    let at = |m: i128, y: usize| -> Complex64 {
        coeffs.iter().zip(&shifts[y]).fold(Phase::ZERO, |acc, (c, &p)| acc + eval_poly_phase(c, m + p)).e()
    };
    let total = match mode {
        AverageMode::SingleParameter => kahan_sum((0..n).map(|y| at(0, y))) / n as f64,
        AverageMode::TwoParameter => {
            let rows = (0..n).map(|y| kahan_sum((0..n as i128).map(|m| at(m, y))));
            kahan_sum(rows) / (n as f64 * n as f64)
        }
    };
    Ok(if total.is_nan() { Complex64::zero() } else { total })
}
