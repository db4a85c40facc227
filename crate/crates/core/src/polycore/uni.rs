use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{binomial_bigint, is_integer, rat, RationalScalar};
use crate::error::{Error, Result};

/// Univariate polynomial with exact rational coefficients in the monomial basis.
///
/// Trailing zeros are never stored, so the zero polynomial has an empty
/// coefficient vector and `degree() == None`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<RationalScalar>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: RationalScalar) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The identity polynomial `u`.
    pub fn var() -> Self {
        Self::monomial(1, BigRational::one())
    }

    pub fn monomial(k: usize, c: RationalScalar) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<RationalScalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// Monomial coefficients, lowest degree first.
    pub fn coeffs(&self) -> &[RationalScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RationalScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&RationalScalar> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &RationalScalar) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, u: &RationalScalar) -> RationalScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * u + c)
    }

    pub fn eval_int(&self, u: i64) -> RationalScalar {
        self.eval(&rat(u))
    }

    /// `C(u, k)` in the monomial basis.
    pub fn binomial(k: usize) -> Self {
        let mut p = Self::constant(BigRational::one());
        for i in 0..k {
            let factor = Self::from_coeffs(vec![rat(-(i as i64)), BigRational::one()]);
            p = (&p * &factor).scale(&BigRational::new(BigInt::one(), BigInt::from(i + 1)));
        }
        p
    }

    /// Coefficients `b_0..b_d` with `p(u) = Σ b_k C(u,k)`; empty for zero.
    pub fn to_binomial_basis(&self) -> Vec<RationalScalar> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        // b_k = Δ^k p(0): repeated forward differences of the values p(0..=d).
        let mut vals: Vec<RationalScalar> = (0..=d as i64).map(|u| self.eval_int(u)).collect();
        let mut out = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            out.push(vals[0].clone());
            vals = vals.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        out
    }

    pub fn from_binomial_basis(b: &[RationalScalar]) -> Self {
        let mut acc = Self::zero();
        let mut basis = Self::constant(BigRational::one());
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc = &acc + &basis.scale(bk);
            }
            let factor = Self::from_coeffs(vec![rat(-(k as i64)), BigRational::one()]);
            basis = (&basis * &factor).scale(&BigRational::new(BigInt::one(), BigInt::from(k + 1)));
        }
        acc
    }

    /// `q(u+1) - q(u)`.
    pub fn discrete_derivative(&self) -> Self {
        &self.shift(&BigRational::one()) - self
    }

    /// `q(u + c)`.
    pub fn shift(&self, c: &RationalScalar) -> Self {
        let inner = Self::from_coeffs(vec![c.clone(), BigRational::one()]);
        self.compose(&inner)
    }

    /// `self(inner(u))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// `P(0) = 0` and `P(ℤ) ⊂ ℤ`: integer binomial coefficients with `b_0 = 0`.
    pub fn is_integral(&self) -> bool {
        self.integrality_witness().is_none()
    }

    /// Reason the polynomial fails integrality, if it does.
    pub fn integrality_witness(&self) -> Option<String> {
        let b = self.to_binomial_basis();
        if let Some(b0) = b.first() {
            if !b0.is_zero() {
                return Some(format!("value {} at 0", b0));
            }
        }
        for (k, bk) in b.iter().enumerate() {
            if !is_integer(bk) {
                // Smallest point with a non-integer value is k (values at 0..k-1 are integers).
                return Some(format!(
                    "coefficient {} of C(y,{}) is not an integer; value at {} is {}",
                    bk,
                    k,
                    k,
                    self.eval_int(k as i64)
                ));
            }
        }
        None
    }

    /// `P(ℤ) ⊂ ℤ`, without requiring `P(0) = 0`.
    pub fn is_integer_valued(&self) -> bool {
        self.to_binomial_basis().iter().all(is_integer)
    }

    /// `(P(r(y-1)+j) - P(j)) / r`.
    ///
    /// The result vanishes at `y = 1` and is generally neither integral nor
    /// integer valued; callers that need a polynomial vanishing at 0 should
    /// compose with `y + 1`.
    pub fn substitute_affine(&self, r: i64, j: i64) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("substitute_affine requires r != 0".into()));
        }
        let inner = Self::from_coeffs(vec![rat(j - r), rat(r)]);
        let shifted = &self.compose(&inner) - &Self::constant(self.eval_int(j));
        Ok(shifted.scale(&BigRational::new(BigInt::one(), BigInt::from(r))))
    }

    /// Evaluation at an integer modulo `n`; requires the denominators to be invertible mod `n`.
    pub fn eval_mod(&self, u: &BigInt, n: &BigInt) -> Option<BigInt> {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            let inv = mod_inverse(c.denom(), n)?;
            let term = (c.numer() * inv).mod_floor_pos(n);
            acc = (acc * u + term).mod_floor_pos(n);
        }
        Some(acc)
    }

    /// Integer values of `C(u,k)` at integer points, as a sanity helper.
    pub fn binomial_value(u: &BigInt, k: usize) -> BigInt {
        binomial_bigint(u, k)
    }

    /// Renders with variable `var`, lowest degree first.
    pub fn render(&self, var: &str) -> String {
        render_terms(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (c.clone(), power(var, k))),
        )
    }

    /// Renders in the binomial basis, `C(var,k)` atoms, lowest index first.
    pub fn render_binomial(&self, var: &str) -> String {
        render_terms(
            self.to_binomial_basis()
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| {
                    let atom = match k {
                        0 => String::new(),
                        1 => var.to_string(),
                        _ => format!("C({},{})", var, k),
                    };
                    (c, atom)
                }),
        )
    }
}

trait ModFloorPos {
    fn mod_floor_pos(&self, n: &BigInt) -> BigInt;
}

impl ModFloorPos for BigInt {
    fn mod_floor_pos(&self, n: &BigInt) -> BigInt {
        let r = self % n;
        if r.is_negative() {
            r + n
        } else {
            r
        }
    }
}

fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let (mut old_r, mut r) = (a.mod_floor_pos(n), n.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = &old_r / &r;
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
    }
    if old_r.is_one() || n.is_one() {
        Some(old_s.mod_floor_pos(n))
    } else {
        None
    }
}

fn power(var: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{}^{}", var, k),
    }
}

/// Joins `(coefficient, atom)` pairs; an empty atom is the constant term.
pub(crate) fn render_terms(terms: impl Iterator<Item = (RationalScalar, String)>) -> String {
    let mut out = String::new();
    for (c, atom) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coef = if mag.is_one() && !atom.is_empty() {
            String::new()
        } else if is_integer(&mag) {
            mag.to_string()
        } else if atom.is_empty() {
            mag.to_string()
        } else {
            format!("({})", mag)
        };
        out.push_str(&coef);
        out.push_str(&atom);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("u"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self.render("u"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}
