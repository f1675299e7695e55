//! Lifetime maximization for heterogeneous wireless sensor networks.
//!
//! The crate decides sink locations, sensor deployment, per-period activity,
//! sensor-to-sink assignment and minimum-energy routes on a square grid:
//!
//! * [`model`]: instances, solutions, the energy ledger and JSON documents.
//! * [`validate`]: checks a solution against every constraint family.
//! * [`routing`]: per-period minimum-energy routing as min-cost flow.
//! * [`construction`]: the constructive (CH) and disjunctive (DH) heuristics.
//! * [`search`]: local and tabu search over sink locations.
//! * [`milp`]: LP-format export of the full mixed-integer model.
//! * [`experiments`]: benchmark harness and exhaustive oracle.

pub mod construction;
pub mod exec;
pub mod fixtures;
pub mod experiments;
pub mod milp;
pub mod model;
pub mod routing;
pub mod search;
pub mod validate;

pub use exec::Exec;
pub use model::{Instance, Solution};
