use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::phase::Phase;
use crate::error::{Error, Result};
use crate::polycore::RationalScalar;

/// Fractional bits used when evaluating atoms.
const BITS: usize = 256;

/// Irrational constants that may appear in a [`SymReal`].
///
/// `1` together with the atoms is assumed linearly independent over ℚ. This
/// holds for square roots of distinct squarefree integers; for `e` and `π`
/// it is taken as an input assertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `√n` with `n ≥ 2` squarefree.
    Sqrt(u64),
    E,
    Pi,
}

impl Atom {
    /// `⌊atom · 2^BITS⌋`.
    fn fixed(self) -> BigInt {
        match self {
            Atom::Sqrt(n) => (BigInt::from(n) << (2 * BITS)).sqrt(),
            Atom::E => fixed_e(),
            Atom::Pi => fixed_pi(),
        }
    }

    pub fn render(self) -> String {
        match self {
            Atom::Sqrt(n) => format!("sqrt({})", n),
            Atom::E => "e".into(),
            Atom::Pi => "pi".into(),
        }
    }
}

fn fixed_e() -> BigInt {
    let guard = BITS + 16;
    let one = BigInt::one() << guard;
    let (mut term, mut sum, mut k) = (one.clone(), one, 1u32);
    while !term.is_zero() {
        term /= k;
        sum += &term;
        k += 1;
    }
    sum >> 16
}

fn fixed_atan_inv(x: u32, guard: usize) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut power = (BigInt::one() << guard) / x;
    let mut sum = power.clone();
    let mut k = 1u32;
    while !power.is_zero() {
        power /= &x2;
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

fn fixed_pi() -> BigInt {
    let guard = BITS + 16;
    (fixed_atan_inv(5, guard) * 16 - fixed_atan_inv(239, guard) * 4) >> 16
}

/// `q + Σ c_a · a` with rational `q`, `c_a` and atoms `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymReal {
    rational: RationalScalar,
    terms: BTreeMap<Atom, RationalScalar>,
}

impl SymReal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: RationalScalar) -> Self {
        Self { rational: q, terms: BTreeMap::new() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn atom(a: Atom) -> Self {
        Self { rational: BigRational::zero(), terms: [(a, BigRational::one())].into() }
    }

    /// `√n` for `n ≥ 0`, reduced to `c·√m` with `m` squarefree.
    pub fn sqrt(n: u64) -> Self {
        let (mut outside, mut inside, mut d) = (1u64, n, 2u64);
        while d * d <= inside {
            while inside % (d * d) == 0 {
                inside /= d * d;
                outside *= d;
            }
            d += 1;
        }
        let c = BigRational::from_integer(outside.into());
        match (n, inside) {
            (0, _) => Self::zero(),
            (_, 1) => Self::from_rational(c),
            _ => Self::atom(Atom::Sqrt(inside)).scale(&c),
        }
    }

    /// `(1 + √5)/2`.
    pub fn golden_ratio() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        &Self::from_rational(half.clone()) + &Self::sqrt(5).scale(&half)
    }

    pub fn rational_part(&self) -> &RationalScalar {
        &self.rational
    }

    pub fn atom_terms(&self) -> &BTreeMap<Atom, RationalScalar> {
        &self.terms
    }

    pub fn coeff(&self, a: Atom) -> RationalScalar {
        self.terms.get(&a).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &RationalScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            rational: &self.rational * c,
            terms: self.terms.iter().map(|(a, v)| (*a, v * c)).collect(),
        }
    }

    /// Product, defined when at least one factor is rational.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_rational() {
            Ok(other.scale(&self.rational))
        } else if other.is_rational() {
            Ok(self.scale(&other.rational))
        } else {
            Err(Error::Parse(format!("product of irrationals ({}) * ({}) is not supported", self, other)))
        }
    }

    /// `⌊self · 2^BITS⌋`.
    fn fixed(&self) -> BigInt {
        let one = BigInt::one() << BITS;
        let mut acc = (self.rational.numer() * &one).div_floor(self.rational.denom());
        for (a, c) in &self.terms {
            acc += (c.numer() * a.fixed()).div_floor(c.denom());
        }
        acc
    }

    /// The value modulo 1, rounded to 128 bits.
    pub fn phase(&self) -> Phase {
        let modulus = BigInt::one() << BITS;
        let reduced = self.fixed().mod_floor(&modulus);
        let rounded = (reduced + (BigInt::one() << (BITS - 129))) >> (BITS - 128);
        Phase(rounded.mod_floor(&(BigInt::one() << 128)).to_u128().expect("fits 128 bits"))
    }

    pub fn to_f64(&self) -> f64 {
        let f = self.fixed();
        let shift = BITS - 60;
        let top = &f >> shift;
        top.to_f64().unwrap_or(f64::NAN) / (1u64 << 60) as f64
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.rational.is_zero() || self.terms.is_empty() {
            parts.push((self.rational.is_negative(), self.rational.abs().to_string()));
        }
        for (a, c) in &self.terms {
            let mag = c.abs();
            let body = if mag.is_one() {
                a.render()
            } else if mag.is_integer() {
                format!("{}*{}", mag, a.render())
            } else {
                format!("{}*{}/{}", mag.numer(), a.render(), mag.denom())
            };
            parts.push((c.is_negative(), body));
        }
        let mut out = String::new();
        for (i, (neg, body)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(body);
        }
        out
    }

    /// Parses sums of rational multiples of `sqrt(n)`, `e`, `pi`, `phi` and rationals.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(v)
    }

    fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }
}

impl fmt::Display for SymReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &SymReal {
    type Output = SymReal;
    fn add(self, o: &SymReal) -> SymReal {
        let mut terms = self.terms.clone();
        for (a, c) in &o.terms {
            *terms.entry(*a).or_insert_with(BigRational::zero) += c;
        }
        SymReal { rational: &self.rational + &o.rational, terms }.normalize()
    }
}

impl Neg for &SymReal {
    type Output = SymReal;
    fn neg(self) -> SymReal {
        self.scale(&-BigRational::one())
    }
}

impl Sub for &SymReal {
    type Output = SymReal;
    fn sub(self, o: &SymReal) -> SymReal {
        self + &(-o)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{} at position {}", msg, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<SymReal> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SymReal> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.checked_mul(&rhs)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if !rhs.is_rational() || rhs.rational.is_zero() {
                        return Err(self.error("division only by nonzero rationals"));
                    }
                    acc = acc.scale(&rhs.rational.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<SymReal> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<SymReal> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let n: BigInt = digits.parse().map_err(|_| self.error("bad integer"))?;
                Ok(SymReal::from_rational(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match name {
                    "e" => Ok(SymReal::atom(Atom::E)),
                    "pi" => Ok(SymReal::atom(Atom::Pi)),
                    "phi" => Ok(SymReal::golden_ratio()),
                    "sqrt" => {
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        let n = arg
                            .is_rational()
                            .then(|| arg.rational.clone())
                            .filter(|q| q.is_integer() && !q.is_negative())
                            .and_then(|q| q.to_integer().to_u64())
                            .ok_or_else(|| self.error("sqrt takes a nonnegative integer"))?;
                        Ok(SymReal::sqrt(n))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.error(&format!("unknown constant '{}'", name)))
                    }
                }
            }
            _ => Err(self.error("expected a number, constant or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_evaluate() {
        let v = SymReal::parse("sqrt(2) + 1/3").unwrap();
        assert!((v.to_f64() - (2f64.sqrt() + 1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(SymReal::parse("sqrt(8)").unwrap(), SymReal::sqrt(2).scale(&BigRational::from_integer(2.into())));
        assert_eq!(SymReal::parse("sqrt(9)").unwrap(), SymReal::from_int(3));
        let phi = SymReal::parse("phi").unwrap();
        assert!((phi.to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        assert!((SymReal::parse("pi").unwrap().to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!((SymReal::parse("e").unwrap().to_f64() - std::f64::consts::E).abs() < 1e-15);
        assert!(SymReal::parse("sqrt(2)*sqrt(3)").is_err());
        assert!(SymReal::parse("foo").is_err());
        assert!(SymReal::parse("1 +").is_err());
    }

    #[test]
    fn phase_reduces_mod_one() {
        let v = SymReal::parse("-sqrt(2)").unwrap();
        let expect = 2.0 - 2f64.sqrt();
        assert!((v.phase().turns() - expect).abs() < 1e-15);
        assert_eq!(SymReal::parse("1/2").unwrap().phase(), Phase(1u128 << 127));
    }

    #[test]
    fn render_round_trip() {
        for s in ["sqrt(2) + 1/3", "-3*sqrt(5)/2 + e", "2", "-pi"] {
            let v = SymReal::parse(s).unwrap();
            assert_eq!(SymReal::parse(&v.render()).unwrap(), v);
        }
    }
}
