//! Exact univariate and bivariate polynomials over the rationals.
//!
//! Every polynomial has two views: the monomial basis `u^k` and the
//! binomial basis `C(u,k)`. The discrete derivative acts on the latter as
//! an index shift.

mod bi;
mod scalar;
mod uni;

pub use bi::{BiPoly, Monomial};
pub use scalar::{
    binomial_bigint, binomial_rational, factorial, is_integer, lcm_of_denominators, rat, ratio,
    RationalScalar,
};
pub use uni::UniPoly;
