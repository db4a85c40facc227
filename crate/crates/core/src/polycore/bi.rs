use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{binomial_bigint, rat, RationalScalar};
use super::uni::{render_terms, UniPoly};

/// Exponent pair `(a, b)` for `x^a y^b`, or index pair for `C(x,a) C(y,b)`.
pub type Monomial = (u32, u32);

/// Sparse bivariate polynomial `Σ c_ab x^a y^b` with no stored zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<Monomial, RationalScalar>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: RationalScalar) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn x() -> Self {
        Self::from_terms([((1, 0), BigRational::one())])
    }

    pub fn y() -> Self {
        Self::from_terms([((0, 1), BigRational::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, RationalScalar)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: RationalScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, RationalScalar> {
        &self.terms
    }

    pub fn coeff(&self, m: Monomial) -> RationalScalar {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.0).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.1).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.0 + m.1).max()
    }

    pub fn scale(&self, c: &RationalScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    /// A polynomial in `y` alone.
    pub fn from_y(p: &UniPoly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(b, c)| ((0, b as u32), c.clone())))
    }

    /// A polynomial in `x` alone.
    pub fn from_x(p: &UniPoly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(a, c)| ((a as u32, 0), c.clone())))
    }

    /// `x + P(y)`.
    pub fn x_plus(p: &UniPoly) -> Self {
        &Self::x() + &Self::from_y(p)
    }

    /// `q(x + P(y))`, expanded by Horner in the monomial basis.
    pub fn compose_shift(q: &UniPoly, p: &UniPoly) -> Self {
        let inner = Self::x_plus(p);
        q.coeffs()
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &inner) + &Self::constant(c.clone()))
    }

    /// `C(x + P(y), k)`, via the falling-factorial product.
    pub fn shifted_binomial(p: &UniPoly, k: usize) -> Self {
        let inner = Self::x_plus(p);
        let mut acc = Self::constant(BigRational::one());
        for i in 0..k {
            let factor = &inner - &Self::constant(rat(i as i64));
            acc = (&acc * &factor).scale(&BigRational::new(BigInt::one(), BigInt::from(i + 1)));
        }
        acc
    }

    pub fn eval(&self, x: &RationalScalar, y: &RationalScalar) -> RationalScalar {
        self.terms.iter().fold(BigRational::zero(), |acc, ((a, b), c)| {
            acc + c * num_traits::pow(x.clone(), *a as usize) * num_traits::pow(y.clone(), *b as usize)
        })
    }

    pub fn eval_int(&self, x: i64, y: i64) -> RationalScalar {
        self.eval(&rat(x), &rat(y))
    }

    /// `R(x+1, y) - R(x, y)`.
    pub fn partial_discrete_derivative_x(&self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            for i in 0..*a {
                let binom = binomial_bigint(&BigInt::from(*a), i as usize);
                out.add_term((i, *b), c * BigRational::from_integer(binom));
            }
        }
        out
    }

    /// Coefficients in the basis `C(x,a) C(y,b)`.
    pub fn to_binomial_view(&self) -> BTreeMap<Monomial, RationalScalar> {
        // Each monomial x^a expands as Σ_i S(a,i) i! C(x,i); apply per variable.
        let mut out: BTreeMap<Monomial, RationalScalar> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            let xa = monomial_binomial_coeffs(*a as usize);
            let yb = monomial_binomial_coeffs(*b as usize);
            for (i, ci) in xa.iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                for (j, cj) in yb.iter().enumerate() {
                    if cj.is_zero() {
                        continue;
                    }
                    let e = out.entry((i as u32, j as u32)).or_insert_with(BigRational::zero);
                    *e += c * BigRational::from_integer(ci * cj);
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn from_binomial_view(view: &BTreeMap<Monomial, RationalScalar>) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in view {
            let px = UniPoly::binomial(*a as usize);
            let py = UniPoly::binomial(*b as usize);
            for (i, ci) in px.coeffs().iter().enumerate() {
                for (j, cj) in py.coeffs().iter().enumerate() {
                    out.add_term((i as u32, j as u32), c * ci * cj);
                }
            }
        }
        out
    }

    /// Renders with variables `x` and `y`: higher x-degree first, then increasing y-degree.
    pub fn render(&self) -> String {
        render_terms(display_order(self.terms.clone()).map(|((a, b), c)| (c, monomial_atom(a, b))))
    }

    /// Renders in the binomial view with `C(x,a)C(y,b)` atoms.
    pub fn render_binomial(&self) -> String {
        render_terms(display_order(self.to_binomial_view()).map(|((a, b), c)| {
            let ax = binomial_atom("x", a);
            let by = binomial_atom("y", b);
            let atom = match (ax.is_empty(), by.is_empty()) {
                (true, _) => by,
                (_, true) => ax,
                _ => format!("{}*{}", ax, by),
            };
            (c, atom)
        }))
    }
}

fn display_order(
    terms: BTreeMap<Monomial, RationalScalar>,
) -> impl Iterator<Item = (Monomial, RationalScalar)> {
    let mut v: Vec<_> = terms.into_iter().collect();
    v.sort_by(|(m1, _), (m2, _)| m2.0.cmp(&m1.0).then(m1.1.cmp(&m2.1)));
    v.into_iter()
}

/// Coefficients `S(n,i)·i!` with `u^n = Σ_i S(n,i) i! C(u,i)`.
fn monomial_binomial_coeffs(n: usize) -> Vec<BigInt> {
    // Δ^i u^n at 0 = Σ_j (-1)^{i-j} C(i,j) j^n.
    (0..=n)
        .map(|i| {
            (0..=i).fold(BigInt::zero(), |acc, j| {
                let term = binomial_bigint(&BigInt::from(i), j) * num_traits::pow(BigInt::from(j), n);
                if (i - j) % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect()
}

fn monomial_atom(a: u32, b: u32) -> String {
    let px = match a {
        0 => String::new(),
        1 => "x".into(),
        _ => format!("x^{}", a),
    };
    let py = match b {
        0 => String::new(),
        1 => "y".into(),
        _ => format!("y^{}", b),
    };
    format!("{}{}", px, py)
}

fn binomial_atom(var: &str, k: u32) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("C({},{})", var, k),
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({})", self.render())
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}
