//! Finitary computations over ℤ/Nℤ: Gowers norms, progression counts,
//! linear models, popular differences and relation-derived obstructions.

mod count;
mod gowers;
mod obstruction;
mod popdiff;
mod signal;

pub use count::{
    compare_poly_vs_linear, compare_poly_vs_linear_with, count_operator, linear_count_operator, linear_model, poly_table, CountReport,
    LinearModel, DEFAULT_BUDGET,
};
pub use gowers::{gowers_norm, gowers_u2_fourier};
pub use obstruction::{build_obstruction, true_complexity_probe, ProbeRow, ProbeTable};
pub use popdiff::{popular_differences, PopDiffReport};
pub use signal::{e, is_prime, kahan_sum, kahan_sum_real, Signal, Subset};
