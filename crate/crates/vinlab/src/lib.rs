//! A computational laboratory for mean values of exponential sums over
//! systems of power-sum equations: exact solution counting, exponential
//! sums and oscillatory integrals, circle-method quantities, congruence
//! conditioning experiments, equal-power-sum (Tarry) searches, and an
//! exact-rational exponent-bound calculator.

pub mod bounds;
pub mod circle;
pub mod congruence;
pub mod counting;
pub mod error;
pub mod expsum;
pub mod tarry;

pub use bounds::{
    classical_eta, gtilde_comparison, permissible_exponent, theorem_table, BoundSource,
    ExponentBound, TheoremTable, GTILDE_PRIOR,
};
pub use circle::{
    asymptotic_ratio, gamma, ratio_from_count, singular_integral, singular_series, waring_count,
    waring_main_term, waring_singular_series, IntegralTruncation, SeriesTruncation,
};
pub use congruence::{
    bset_census, bset_solutions, d3_max, lemma41_max, lift_count_check, well_conditioned_tuples,
    MaxReport, PrimeParams,
};
pub use counting::{
    brute_force_count, build_rep_table, constrained_count, difference_count, lower_bounds,
    mean_value, power_sums, Budget, Count, ExponentSet, Interval, PowerSumVector, RepTable,
    ResidueClass, SystemSpec, VariableBlock,
};
pub use error::{Error, Result};
pub use expsum::{
    complete_sum, dft_mean_value, oscillatory_integral, rational_approximation_gap,
    restricted_weyl_sum, weyl_sum, RationalPoint,
};
pub use tarry::{multigrade_classes, multigrade_search, tarry_criterion, MultigradeWitness};
