//! Frequency selection: the deadline-constrained KKT solver, the per-level
//! unconstrained optimum, pairwise ratio relations and bounds, the `alpha = 2`
//! overload cubic, and reference-frequency formulas.

mod kkt;
mod reference;
mod relations;

pub use kkt::{
    solve_constrained, solve_constrained_with, unconstrained_level_frequency, OptimizationResult,
    SolveOptions, StationarityPolynomial,
};
pub use reference::{
    induced_assignment, reference_frequency_dynamic, reference_frequency_total, weighted_makespan,
    ReferenceEnergyProfile,
};
pub use relations::{
    cubic_ratio, cubic_ratio_at_overload, overload_limits, ratio_bounds, ratio_relation_residual,
    sweep_ratio_vs_overload, OverloadLimits, RatioBounds, SweepRow,
};
