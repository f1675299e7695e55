//! Instance data, derived coefficients, solutions and the energy ledger.

mod generator;
mod instance;
mod io;
mod ledger;
mod solution;
mod types;

pub use generator::{
    build_instance, standard_types, GeneratorConfig, DEFAULT_ALPHA, DEFAULT_COVERAGE, DEFAULT_HORIZON,
    PACKETS_PER_PERIOD,
};
pub use instance::{compute_budget, compute_coefficients, CommMatrix, CoverageMatrix, Instance, InstanceParts};
pub use io::{
    instance_from_json, instance_to_json, solution_from_json, solution_to_json, FORMAT_VERSION, INSTANCE_FORMAT,
    SOLUTION_FORMAT,
};
pub use ledger::EnergyLedger;
pub use solution::{Assignment, PeriodPlan, SensorFlow, SinkFlow, Solution};
pub use types::{BudgetLevel, EnergyLevel, Metric, Metrics, SensorId, SensorType, SINK_KIND};


#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("sensor type {kind}: {reason}")]
    InvalidType { kind: usize, reason: &'static str },
    #[error("unknown level '{0}' (expected low, medium or high)")]
    UnknownLevel(String),
    #[error("node count {0} is not a perfect square")]
    NonSquare(usize),
    #[error("grid has no nodes")]
    EmptyGrid,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("malformed document: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
