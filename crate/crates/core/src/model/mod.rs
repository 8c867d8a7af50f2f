//! Platform, application and schedule abstractions together with the power,
//! energy and completion-time formulas they induce.
//!
//! All functions are pure; the types are immutable once constructed.

mod energy;
mod graph;
mod platform;

pub use energy::{DeadlineProblem, EnergyBreakdown, FrequencyAssignment, ParallelismVector};
pub use graph::{Task, TaskGraph};
pub use platform::{EffectiveCores, Platform, PlatformParams};
