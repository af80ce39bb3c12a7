//! Error type shared by all solver and oracle modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to parse {what}: {detail}")]
    Parse { what: String, detail: String },
    #[error("subset {subset} contains element {element}, but the universe has size {n}")]
    ElementOutOfRange {
        subset: usize,
        element: usize,
        n: usize,
    },
    #[error("subset {0} is empty")]
    EmptySubset(usize),
    #[error("element {0} is not covered by any subset")]
    ElementUncovered(usize),
    #[error("expected {expected} battery values, got {got}")]
    BatteryCount { expected: usize, got: usize },
    #[error("battery of subset {0} must be positive")]
    NonPositiveBattery(usize),
    #[error("universe must contain at least {need} elements, got {got}")]
    UniverseTooSmall { need: usize, got: usize },
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("graph edge ({0}, {1}) is invalid for {2} vertices")]
    BadEdge(usize, usize, usize),
    #[error("copy budget exceeded: normalisation needs {needed} subset copies, budget is {budget}")]
    CopyBudget { needed: String, budget: usize },
    #[error("schedule entry {entry} is not a set cover (element {element} uncovered)")]
    ScheduleNotCovering { entry: usize, element: usize },
    #[error("schedule uses subset {subset} for {used} time units, battery is {battery}")]
    ScheduleOverBudget {
        subset: usize,
        used: String,
        battery: String,
    },
    #[error("schedule entry {entry} has negative duration")]
    NegativeDuration { entry: usize },
    #[error("oracle cap exceeded: {0}")]
    CapExceeded(String),
    #[error("subset {0} is not a contiguous interval")]
    NotInterval(usize),
    #[error("this solver requires unit batteries; normalise the instance first")]
    UnitBatteriesRequired,
    #[error("element {element} has frequency {freq}, expected exactly 2")]
    FrequencyNotTwo { element: usize, freq: usize },
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    BadEpsilon(f64),
    #[error("resample limit of {0} exceeded before a full colouring was found")]
    ResampleLimit(usize),
    #[error(
        "phase {phase} exceeded {attempts} colouring attempts; largest saved component stayed \
         above the cap of {cap}"
    )]
    RetryLimit {
        phase: usize,
        attempts: usize,
        cap: usize,
    },
    #[error("expansiveness {delta_tau} must be at least 2 for the phase schedule")]
    DegenerateExpansiveness { delta_tau: f64 },
    #[error(
        "ln n = {ln_n:.4} is below expansiveness {delta_tau:.4}; the phase schedule is undefined, \
         fall back to the plain colouring"
    )]
    PhaseScheduleUndefined { ln_n: f64, delta_tau: f64 },
    #[error("packing solver made no progress after {0} iterations")]
    SolverStall(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
