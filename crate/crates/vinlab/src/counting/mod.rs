//! Exact counting of solutions to simultaneous power-sum systems.

pub mod brute;
pub mod dense;
pub mod ops;
pub mod sparse;
pub mod spec;

pub use brute::brute_force_count;
pub use ops::{build_rep_table, constrained_count, difference_count, lower_bounds, mean_value};
pub use spec::{
    power_sums, Budget, Count, ExponentSet, Interval, PowerSumVector, RepTable, ResidueClass,
    SystemSpec, VariableBlock,
};
