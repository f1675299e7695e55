//! Versioned JSON documents for instances and solutions.
//!
//! Node numbers are 1-based in every document; field names follow the
//! usual symbols (`c`, `f`, `T`, `B`, `S`, `L`, `n`, `x`, `z`, `u`, `y`, `g`).

use serde::{Deserialize, Serialize};

use super::instance::{Instance, InstanceParts};
use super::solution::{Assignment, PeriodPlan, SensorFlow, SinkFlow, Solution};
use super::types::SensorId;
use super::ModelError;

pub const INSTANCE_FORMAT: &str = "wsn-instance";
pub const SOLUTION_FORMAT: &str = "wsn-solution";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    format: String,
    version: u32,
    #[serde(flatten)]
    parts: InstanceParts,
}

pub fn instance_to_json(instance: &Instance) -> String {
    let doc = InstanceDoc {
        format: INSTANCE_FORMAT.into(),
        version: FORMAT_VERSION,
        parts: instance.parts().clone(),
    };
    serde_json::to_string_pretty(&doc).expect("instance serializes")
}

pub fn instance_from_json(text: &str) -> Result<Instance, ModelError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    check_header(&doc.format, doc.version, INSTANCE_FORMAT)?;
    Instance::new(doc.parts)
}

fn check_header(format: &str, version: u32, expected: &str) -> Result<(), ModelError> {
    if format != expected {
        return Err(ModelError::Format(format!("expected format '{expected}', found '{format}'")));
    }
    if version != FORMAT_VERSION {
        return Err(ModelError::Format(format!("unsupported {expected} version {version}")));
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct Slot {
    j: usize,
    k: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct AssignDoc {
    i: usize,
    j: usize,
    k: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct YDoc {
    i: usize,
    l: usize,
    j: usize,
    k: usize,
    value: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct GDoc {
    i: usize,
    l: usize,
    j: usize,
    value: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PeriodDoc {
    t: usize,
    #[serde(default)]
    z: Vec<Slot>,
    #[serde(default)]
    u: Vec<AssignDoc>,
    #[serde(default)]
    y: Vec<YDoc>,
    #[serde(default)]
    g: Vec<GDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SolutionDoc {
    format: String,
    version: u32,
    #[serde(rename = "N")]
    nodes: usize,
    #[serde(rename = "K")]
    kinds: usize,
    #[serde(rename = "T")]
    horizon: usize,
    #[serde(rename = "L")]
    lifetime: usize,
    n: Vec<u8>,
    x: Vec<Slot>,
    periods: Vec<PeriodDoc>,
}

fn slot(id: SensorId) -> Slot {
    Slot {
        j: id.node + 1,
        k: id.kind,
    }
}

fn node0(j: usize) -> Result<usize, ModelError> {
    j.checked_sub(1)
        .ok_or_else(|| ModelError::Format("node numbers are 1-based".into()))
}

fn sensor0(j: usize, k: usize) -> Result<SensorId, ModelError> {
    Ok(SensorId::new(node0(j)?, k))
}

pub fn solution_to_json(solution: &Solution) -> String {
    let periods = solution
        .periods
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_empty())
        .map(|(idx, p)| PeriodDoc {
            t: idx + 1,
            z: p.active.iter().map(|&s| slot(s)).collect(),
            u: p
                .assignments
                .iter()
                .map(|a| AssignDoc {
                    i: a.sink + 1,
                    j: a.sensor.node + 1,
                    k: a.sensor.kind,
                })
                .collect(),
            y: p
                .sensor_flows
                .iter()
                .map(|f| YDoc {
                    i: f.from.node + 1,
                    l: f.from.kind,
                    j: f.to.node + 1,
                    k: f.to.kind,
                    value: f.amount,
                })
                .collect(),
            g: p
                .sink_flows
                .iter()
                .map(|f| GDoc {
                    i: f.from.node + 1,
                    l: f.from.kind,
                    j: f.sink + 1,
                    value: f.amount,
                })
                .collect(),
        })
        .collect();
    let doc = SolutionDoc {
        format: SOLUTION_FORMAT.into(),
        version: FORMAT_VERSION,
        nodes: solution.nodes,
        kinds: solution.kinds,
        horizon: solution.horizon,
        lifetime: solution.lifetime,
        n: solution.period_on.iter().map(|&b| u8::from(b)).collect(),
        x: solution.deployed.iter().map(|&s| slot(s)).collect(),
        periods,
    };
    serde_json::to_string_pretty(&doc).expect("solution serializes")
}

/// Parses a solution document. Indices are only checked for being 1-based;
/// range checks against an instance belong to the validator.
pub fn solution_from_json(text: &str) -> Result<Solution, ModelError> {
    let doc: SolutionDoc = serde_json::from_str(text)?;
    check_header(&doc.format, doc.version, SOLUTION_FORMAT)?;
    let mut sol = Solution::zeroed(doc.nodes, doc.kinds, doc.horizon);
    sol.lifetime = doc.lifetime;
    sol.period_on = doc.n.iter().map(|&v| v != 0).collect();
    sol.deployed = doc
        .x
        .iter()
        .map(|s| sensor0(s.j, s.k))
        .collect::<Result<_, _>>()?;
    for p in doc.periods {
        if p.t == 0 {
            return Err(ModelError::Format("periods are 1-based".into()));
        }
        if p.t > sol.periods.len() {
            sol.periods.resize(p.t, PeriodPlan::default());
        }
        let plan = PeriodPlan {
            active: p.z.iter().map(|s| sensor0(s.j, s.k)).collect::<Result<_, _>>()?,
            assignments: p
                .u
                .iter()
                .map(|a| {
                    Ok(Assignment {
                        sink: node0(a.i)?,
                        sensor: sensor0(a.j, a.k)?,
                    })
                })
                .collect::<Result<_, ModelError>>()?,
            sensor_flows: p
                .y
                .iter()
                .map(|f| {
                    Ok(SensorFlow {
                        from: sensor0(f.i, f.l)?,
                        to: sensor0(f.j, f.k)?,
                        amount: f.value,
                    })
                })
                .collect::<Result<_, ModelError>>()?,
            sink_flows: p
                .g
                .iter()
                .map(|f| {
                    Ok(SinkFlow {
                        from: sensor0(f.i, f.l)?,
                        sink: node0(f.j)?,
                        amount: f.value,
                    })
                })
                .collect::<Result<_, ModelError>>()?,
        };
        sol.periods[p.t - 1] = plan;
    }
    Ok(sol)
}
