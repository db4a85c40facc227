//! Homogeneity, eligibility and algebraic complexity of integral polynomial
//! progressions, with finitary checks over cyclic groups and abelian Weyl systems.

pub mod cyclic;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod polycore;
pub mod progression;
pub mod weyl;

pub use error::{Error, Result};
