//! Recursive-descent parser for progression text such as `x, x+y, x+2y, x+y^3`.
//!
//! ```text
//! progression := term ("," term)*
//! term        := "x" (("+" | "-") poly)?        first term is bare "x"
//! poly        := sign? product (sign product)*
//! product     := power (("*" | "/")? power)*     juxtaposition multiplies
//! power       := atom ("^" integer)?
//! atom        := integer | "y" | "C(y," integer ")" | "(" poly ")"
//! ```

use num_rational::BigRational;
use polyprog::polycore::{RationalScalar, UniPoly};
use polyprog::progression::Progression;
use thiserror::Error;

/// Largest exponent or binomial index accepted.
pub const MAX_POWER: u32 = 16;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error(transparent)]
    Rejected(#[from] polyprog::Error),
}

/// A parsed progression together with its source and canonical text.
#[derive(Clone, Debug)]
pub struct ProgressionExpr {
    pub source: String,
    /// Terms in source order.
    pub progression: Progression,
    /// Terms sorted by degree, ties kept in source order.
    pub canonical: String,
}

impl ProgressionExpr {
    /// The progression with terms in canonical order.
    pub fn canonical_progression(&self) -> Progression {
        canonical_order(&self.progression)
    }
}

pub fn canonical_order(prog: &Progression) -> Progression {
    let mut polys = prog.polys().to_vec();
    polys.sort_by_key(|p| p.degree());
    Progression::new(polys).expect("reordering keeps a valid progression")
}

pub fn render_canonical(prog: &Progression) -> String {
    canonical_order(prog).render()
}

pub fn parse_progression(text: &str) -> Result<ProgressionExpr, ParseError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let polys = p.progression()?;
    let progression = Progression::new(polys)?;
    let canonical = render_canonical(&progression);
    Ok(ProgressionExpr { source: text.to_string(), progression, canonical })
}

/// Parses a single polynomial in `y`, such as `2y + C(y,3)`.
pub fn parse_poly(text: &str) -> Result<UniPoly, ParseError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let poly = p.poly()?;
    p.expect_end()?;
    Ok(poly)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{}', found '{}'", c, found)),
                None => self.err(format!("expected '{}', found end of input", c)),
            }
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{}'", c)),
        }
    }

    fn progression(&mut self) -> Result<Vec<UniPoly>, ParseError> {
        let first = self.term()?;
        if !first.is_zero() {
            return self.err("the first term must be x");
        }
        let mut polys = Vec::new();
        while self.eat(',') {
            let start = self.pos;
            let p = self.term()?;
            if p.is_zero() {
                self.pos = start;
                self.skip_ws();
                return self.err("term repeats x; later terms need a nonzero shift");
            }
            polys.push(p);
        }
        self.expect_end()?;
        if polys.is_empty() {
            return self.err("a progression needs at least two terms");
        }
        Ok(polys)
    }

    /// `x` or `x ± poly`; returns the shift.
    fn term(&mut self) -> Result<UniPoly, ParseError> {
        if !self.eat('x') {
            return match self.peek() {
                Some(c) => self.err(format!("expected 'x', found '{}'", c)),
                None => self.err("expected 'x', found end of input"),
            };
        }
        match self.peek() {
            Some('+') | Some('-') => self.poly(),
            _ => Ok(UniPoly::zero()),
        }
    }

    fn poly(&mut self) -> Result<UniPoly, ParseError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.product()?
            }
            Some('+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<UniPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.power()?;
                    let c = match d.degree() {
                        None => {
                            self.pos = at;
                            return self.err("division by zero");
                        }
                        Some(0) => d.coeff(0),
                        Some(_) => {
                            self.pos = at;
                            return self.err("division is only allowed by constants");
                        }
                    };
                    acc = acc.scale(&(RationalScalar::from_integer(1.into()) / c));
                }
                Some('y') | Some('C') | Some('(') => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<UniPoly, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.small_integer()?;
        let mut out = UniPoly::constant(BigRational::from_integer(1.into()));
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<UniPoly, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(UniPoly::constant(BigRational::from_integer(n)))
            }
            Some('y') => {
                self.pos += 1;
                Ok(UniPoly::var())
            }
            Some('C') => {
                self.pos += 1;
                self.expect('(')?;
                self.expect('y')?;
                self.expect(',')?;
                let k = self.small_integer()?;
                self.expect(')')?;
                Ok(UniPoly::binomial(k as usize))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.poly()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('x') => self.err("x may only lead a term"),
            Some(c) => self.err(format!("unexpected '{}'", c)),
            None => self.err("unexpected end of input"),
        }
    }

    fn integer(&mut self) -> Result<num_bigint::BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn small_integer(&mut self) -> Result<u32, ParseError> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let n = self.integer()?;
        match u32::try_from(&n) {
            Ok(v) if v <= MAX_POWER => Ok(v),
            _ => {
                self.pos = at;
                self.err(format!("exponent or index {} exceeds {}", n, MAX_POWER))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prog(p: &[&[i64]]) -> Progression {
        Progression::from_int_coeffs(p).unwrap()
    }

    #[test]
    fn worked_progressions() {
        let e = parse_progression("x, x+y, x+2y, x+y^3").unwrap();
        assert_eq!(e.progression, prog(&[&[0, 1], &[0, 2], &[0, 0, 0, 1]]));
        assert_eq!(e.canonical, "x, x + y, x + 2y, x + y^3");
        let e = parse_progression("x, x+y^2, x+2y^2, x+y^3, x+2y^3").unwrap();
        assert_eq!(e.progression, prog(&[&[0, 0, 1], &[0, 0, 2], &[0, 0, 0, 1], &[0, 0, 0, 2]]));
    }

    #[test]
    fn rejections() {
        let err = parse_progression("x, x+y/2").unwrap_err();
        assert!(matches!(err, ParseError::Rejected(polyprog::Error::NotIntegral { .. })), "{}", err);
        assert!(matches!(
            parse_progression("x, x+y, x+y").unwrap_err(),
            ParseError::Rejected(polyprog::Error::DuplicatePolynomial(_))
        ));
        match parse_progression("x, x+y, x+*y").unwrap_err() {
            ParseError::Syntax { column, .. } => assert_eq!(column, 11),
            e => panic!("{}", e),
        }
        for bad in ["", "y", "x, y", "x, x", "x, x+y,", "x, x+y^99", "x, x+y/y", "x, x+(y", "x, x+x"] {
            assert!(parse_progression(bad).is_err(), "{:?}", bad);
        }
    }

    #[test]
    fn binomials_signs_and_division() {
        let e = parse_progression("x, x + C(y,2), x - y").unwrap();
        assert_eq!(e.progression.polys()[0], UniPoly::binomial(2));
        assert_eq!(e.canonical, "x, x - y, x + C(y,2)");
        let e = parse_progression("x, x + (y^2 + y)/2, x + 3*y*(y - 1)").unwrap();
        assert_eq!(e.progression.polys()[0], parse_poly("C(y,2) + y").unwrap());
        assert_eq!(parse_poly("-2y + y^2").unwrap(), UniPoly::from_ints(&[0, -2, 1]));
    }
}
