//! Globally-optimal DVFS frequencies for memory-intensive task graphs on
//! multicore chips, and an energy-aware schedule ranking.
//!
//! The chip runs all cores at one frequency at a time. A schedule is
//! summarized by its parallelism vector `w` (cycles spent with exactly `m`
//! cores active) and the application by a single data-to-CPU quotient `d`.
//! Given a deadline, [`optimizer::solve_constrained`] picks one frequency per
//! parallelism level minimizing total CPU energy, including the dynamic energy
//! of idle cores and the energy burned while stalled on memory.
//!
//! Units are never converted: frequencies in Hz, times in seconds, workloads
//! in cycles.

// negated float comparisons are used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod model;
pub mod numeric;
pub mod optimizer;
pub mod oracle;
pub mod scheduler;

pub use error::{Error, Result};
