//! Exponential sums, oscillatory integrals, and the exact DFT oracle
//! linking analytic moments back to the counting engine.

mod dft;
pub(crate) mod quad;
mod weyl;

pub use dft::dft_mean_value;
pub use quad::oscillatory_integral;
pub use weyl::{
    complete_sum, rational_approximation_gap, restricted_weyl_sum, weyl_sum, RationalPoint,
};
