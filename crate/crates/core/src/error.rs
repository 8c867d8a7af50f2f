use thiserror::Error;

/// Errors raised by the model, optimizer, scheduler and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid platform: {0}")]
    InvalidPlatform(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("active-core count {m} outside 1..={cores}")]
    CoreCountOutOfRange { m: usize, cores: usize },

    #[error("frequency must be positive and finite, got {0}")]
    InvalidFrequency(f64),

    #[error("vector length {got} does not match core count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("missing frequency for level {level} which carries {cycles} cycles")]
    MissingFrequency { level: usize, cycles: f64 },

    /// The deadline is at or below the frequency-independent memory stall time.
    #[error("infeasible deadline {t_budget} s: memory floor is {memory_floor} s")]
    InfeasibleDeadline { t_budget: f64, memory_floor: f64 },

    #[error("infeasible deadline {t_budget} s: fastest completion at the frequency cap is {min_time} s")]
    CapInfeasible { t_budget: f64, min_time: f64 },

    /// With c3 = 0 the per-level energy is increasing in f; the infimum is at f -> 0.
    #[error("no interior minimizer: static offset c3 is zero, energy decreases monotonically as f -> 0")]
    NoInteriorMinimizer,

    #[error("operation requires alpha = 2, platform has alpha = {0}")]
    UnsupportedAlpha(f64),

    #[error("task graph contains a cycle")]
    CyclicGraph,

    #[error("enumeration capped at {max_tasks} tasks and {max_cores} cores, got {tasks} tasks on {cores} cores")]
    EnumerationCap {
        tasks: usize,
        cores: usize,
        max_tasks: usize,
        max_cores: usize,
    },

    #[error("root not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("non-finite function value at x = {0}")]
    NonFinite(f64),

    #[error("no feasible grid point")]
    NoFeasibleGridPoint,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
