//! Feasible solutions for fixed sink locations.
//!
//! Both heuristics start from the all-zero solution and build each period's
//! activity greedily: standby sensors are woken by energy-per-cost scores,
//! new sensors are bought by battery-per-cost scores, and idle sensors are
//! sold when the budget runs short. A run ends at the first period that
//! cannot be completed, so the lifetime is the last completed period.

mod builder;
mod ch;
mod dh;
pub mod scores;
pub mod trace;

use std::fmt;
use std::str::FromStr;

pub use builder::StopCause;
pub use ch::construct_ch_traced;
pub use dh::construct_dh_traced;
pub use scores::{GreedyScores, ScoreInput};
pub use trace::{JsonLines, NoTrace, Reason, TraceEvent, TraceSink};

use builder::{Builder, Labels, Period};
use trace::TraceEvent as Ev;

use crate::model::{EnergyLedger, Instance, PeriodPlan, SensorId, Solution, SINK_KIND};
use crate::routing::{solve_rp, update_energy, PeriodState};

/// A finished construction run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub solution: Solution,
    /// Why the run ended before the horizon, if it did.
    pub stop: Option<StopCause>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Ch,
    Dh,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Ch => "CH",
            Engine::Dh => "DH",
        }
    }

    pub fn run(self, instance: &Instance, sinks: &[usize]) -> Outcome {
        self.run_traced(instance, sinks, &mut NoTrace)
    }

    pub fn run_traced(self, instance: &Instance, sinks: &[usize], trace: &mut dyn TraceSink) -> Outcome {
        match self {
            Engine::Ch => construct_ch_traced(instance, sinks, trace),
            Engine::Dh => construct_dh_traced(instance, sinks, trace),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ch" => Ok(Engine::Ch),
            "dh" => Ok(Engine::Dh),
            other => Err(format!("unknown construction heuristic '{other}'")),
        }
    }
}

/// Constructive heuristic for the sink nodes `sinks` (0-based).
pub fn construct_ch(instance: &Instance, sinks: &[usize]) -> Solution {
    construct_ch_traced(instance, sinks, &mut NoTrace).solution
}

/// Disjunctive heuristic for the sink nodes `sinks` (0-based).
pub fn construct_dh(instance: &Instance, sinks: &[usize]) -> Solution {
    construct_dh_traced(instance, sinks, &mut NoTrace).solution
}

/// Routes a settled period and advances the ledger.
fn route_period(
    b: &mut Builder<'_, '_>,
    p: &Period,
    labels: &Labels,
    ledger: &mut EnergyLedger,
) -> Result<PeriodPlan, StopCause> {
    let active: Vec<SensorId> = p.active_list().into_iter().map(|s| b.id(s)).collect();
    let assignments = b.assignments(p, labels);
    let state = PeriodState {
        period: p.t,
        active: &active,
        assignments: &assignments,
        sinks: &b.sinks,
        remaining: ledger.row(p.t),
    };
    let result = solve_rp(b.inst, &state).map_err(|_| StopCause::Routing)?;
    update_energy(b.inst, ledger, p.t, &result).map_err(|_| StopCause::Routing)?;
    b.trace.record(Ev::PeriodDone {
        t: p.t,
        active: active.len(),
        energy: result.objective,
    });
    Ok(PeriodPlan {
        active,
        assignments,
        sensor_flows: result.sensor_flows,
        sink_flows: result.sink_flows,
    })
}

fn assemble(mut b: Builder<'_, '_>, plans: Vec<PeriodPlan>, stop: Option<StopCause>) -> Outcome {
    let lifetime = plans.len();
    b.drop_unused(lifetime + 1);
    let mut solution = Solution::empty(b.inst);
    solution.deployed = b
        .sinks
        .iter()
        .map(|&j| SensorId::new(j, SINK_KIND))
        .chain((0..b.deployed.len()).filter(|&s| b.deployed[s]).map(|s| b.id(s)))
        .collect();
    for (t, plan) in plans.into_iter().enumerate() {
        solution.periods[t] = plan;
    }
    solution.set_lifetime(lifetime);
    solution.normalize();
    Outcome { solution, stop }
}
