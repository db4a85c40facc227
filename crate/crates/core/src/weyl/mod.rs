//! Standard Weyl systems, orbit closures of `g^P` on tori and the
//! character-based lower-bound construction.

mod closure;
mod equidist;
mod phase;
mod symbolic;
mod system;
mod witness;

pub use closure::{closure_subspaces, gp_block_basis, AffineClosure, Dependency};
pub use equidist::{equidistribution_test, CharacterRow, EquidistReport};
pub use phase::{binom_wrapped, Phase};
pub use symbolic::{Atom, SymReal};
pub use system::{
    factor_projection, multiple_average, AverageMode, PolySequence, Projection, TorusCharacter, WeylSystem,
};
pub use witness::{lower_bound_witness, WitnessReport};
