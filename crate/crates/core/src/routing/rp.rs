use std::fmt::Write as _;

use serde::Serialize;

use super::mcf::MinCostFlow;
use crate::model::{Assignment, EnergyLedger, Instance, PeriodPlan, SensorFlow, SensorId, SinkFlow};

/// Input of one routing subproblem: activity and assignments for period `t`
/// plus the remaining energy at its start.
#[derive(Debug, Clone, Copy)]
pub struct PeriodState<'a> {
    pub period: usize,
    pub active: &'a [SensorId],
    pub assignments: &'a [Assignment],
    pub sinks: &'a [usize],
    /// `E^rem` indexed by sensor index.
    pub remaining: &'a [f64],
}

impl<'a> PeriodState<'a> {
    pub fn from_plan(period: usize, plan: &'a PeriodPlan, sinks: &'a [usize], remaining: &'a [f64]) -> Self {
        Self {
            period,
            active: &plan.active,
            assignments: &plan.assignments,
            sinks,
            remaining,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoutingResult {
    #[serde(skip)]
    pub sensor_flows: Vec<SensorFlow>,
    #[serde(skip)]
    pub sink_flows: Vec<SinkFlow>,
    /// `epsilon` indexed by sensor index; zero for inactive sensors.
    pub consumption: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RoutingError {
    #[error("active sensor {0} has no sink assignment")]
    Unassigned(SensorId),
    #[error("sensor {0} is assigned more than once")]
    Reassigned(SensorId),
    #[error("sensor {sensor} is assigned to node {} which hosts no sink", .sink + 1)]
    NotASink { sensor: SensorId, sink: usize },
    #[error("sensor {0} is assigned but not active")]
    Inactive(SensorId),
    #[error("sensor {0} cannot afford sensing and sending its own packets")]
    EnergyCap(SensorId),
    #[error("sensor {0} has no energy-feasible route to its sink")]
    Stranded(SensorId),
}

/// `zeta_t = active * max h`: the most packets any active sensor could relay.
pub fn max_outflow_bound(active: usize, instance: &Instance) -> u64 {
    active as u64 * u64::from(instance.max_packets())
}

/// Packets a sensor may receive without exceeding its remaining energy
/// after sensing and sending its own `h` packets.
pub fn relay_capacity(instance: &Instance, s: usize, remaining: f64) -> Option<i64> {
    let ty = instance.sensor_kind(s);
    let spare = remaining - ty.sense_energy - ty.transmit_energy * f64::from(ty.packets);
    if spare < -1e-9 {
        return None;
    }
    let per = ty.receive_energy + ty.transmit_energy;
    if per <= 0.0 {
        return Some(i64::MAX / 4);
    }
    let cap = (spare.max(0.0) / per + 1e-9).floor();
    Some(if cap > (i64::MAX / 4) as f64 { i64::MAX / 4 } else { cap as i64 })
}

/// Solves the minimum-energy routing problem of one period exactly.
pub fn solve_rp(instance: &Instance, state: &PeriodState<'_>) -> Result<RoutingResult, RoutingError> {
    solve(instance, state, None)
}

/// Like [`solve_rp`], also returning per-commodity flow graphs as plain-text
/// edge lists (`from to capacity cost flow`, 1-based sensor labels).
pub fn solve_rp_with_dump(
    instance: &Instance,
    state: &PeriodState<'_>,
) -> (Result<RoutingResult, RoutingError>, String) {
    let mut dump = String::new();
    let res = solve(instance, state, Some(&mut dump));
    (res, dump)
}

fn solve(
    instance: &Instance,
    state: &PeriodState<'_>,
    mut dump: Option<&mut String>,
) -> Result<RoutingResult, RoutingError> {
    let ns = instance.sensor_count();
    let mut active = vec![false; ns];
    for &id in state.active {
        active[instance.sensor_index(id)] = true;
    }
    let mut sink_of: Vec<Option<usize>> = vec![None; ns];
    for a in state.assignments {
        let s = instance.sensor_index(a.sensor);
        if !active[s] {
            return Err(RoutingError::Inactive(a.sensor));
        }
        if sink_of[s].is_some() {
            return Err(RoutingError::Reassigned(a.sensor));
        }
        if !state.sinks.contains(&a.sink) {
            return Err(RoutingError::NotASink {
                sensor: a.sensor,
                sink: a.sink,
            });
        }
        sink_of[s] = Some(a.sink);
    }

    let mut consumption = vec![0.0; ns];
    let mut sensor_flows = Vec::new();
    let mut sink_flows = Vec::new();
    let mut members: Vec<usize> = (0..ns).filter(|&s| active[s]).collect();
    for &s in &members {
        if sink_of[s].is_none() {
            return Err(RoutingError::Unassigned(instance.sensor(s)));
        }
        consumption[s] = instance.sensor_kind(s).sense_energy;
    }

    let mut sinks: Vec<usize> = state.sinks.to_vec();
    sinks.sort_unstable();
    sinks.dedup();
    members.sort_unstable();
    for &sink in &sinks {
        let group: Vec<usize> = members.iter().copied().filter(|&s| sink_of[s] == Some(sink)).collect();
        if group.is_empty() {
            continue;
        }
        route_commodity(
            instance,
            state,
            sink,
            &group,
            &mut consumption,
            &mut sensor_flows,
            &mut sink_flows,
            dump.as_deref_mut(),
        )?;
    }
    let objective = consumption.iter().sum();
    Ok(RoutingResult {
        sensor_flows,
        sink_flows,
        consumption,
        objective,
    })
}

#[allow(clippy::too_many_arguments)]
fn route_commodity(
    instance: &Instance,
    state: &PeriodState<'_>,
    sink: usize,
    group: &[usize],
    consumption: &mut [f64],
    sensor_flows: &mut Vec<SensorFlow>,
    sink_flows: &mut Vec<SinkFlow>,
    dump: Option<&mut String>,
) -> Result<(), RoutingError> {
    // nodes: source, target, then (in, out) per member
    let m = group.len();
    let source = 2 * m;
    let target = 2 * m + 1;
    let mut g = MinCostFlow::new(2 * m + 2);
    let supply: i64 = group
        .iter()
        .map(|&s| i64::from(instance.sensor_kind(s).packets))
        .sum();
    let inflow_cap = instance.big_m1() as i64;

    let mut gen_arcs = Vec::with_capacity(m);
    for (p, &s) in group.iter().enumerate() {
        let cap = relay_capacity(instance, s, state.remaining[s])
            .ok_or(RoutingError::EnergyCap(instance.sensor(s)))?;
        let h = i64::from(instance.sensor_kind(s).packets);
        gen_arcs.push(g.add_edge(source, 2 * p + 1, h, 0.0));
        g.add_edge(2 * p, 2 * p + 1, cap.min(supply).min(inflow_cap), 0.0);
    }
    let mut relay_arcs = Vec::new();
    let mut sink_arcs = Vec::new();
    for (p, &s) in group.iter().enumerate() {
        let send = instance.sensor_kind(s).transmit_energy;
        for (q, &r) in group.iter().enumerate() {
            if p != q && instance.can_send(s, r) {
                let cost = send + instance.sensor_kind(r).receive_energy;
                relay_arcs.push((g.add_edge(2 * p + 1, 2 * q, supply, cost), s, r));
            }
        }
        if instance.can_reach_node(s, sink) {
            sink_arcs.push((g.add_edge(2 * p + 1, target, supply, send), s));
        }
    }

    let (flow, _) = g.run(source, target, supply);

    if let Some(out) = dump {
        let label = |v: usize| -> String {
            if v == source {
                "source".into()
            } else if v == target {
                format!("sink{}", sink + 1)
            } else {
                let id = instance.sensor(group[v / 2]);
                format!("{}_{}:{}", id.node + 1, id.kind, if v % 2 == 0 { "in" } else { "out" })
            }
        };
        let _ = writeln!(out, "# t={} sink={} supply={supply} routed={flow}", state.period, sink + 1);
        for (from, to, cap, cost, f) in g.edges() {
            let _ = writeln!(out, "{} {} {cap} {cost} {f}", label(from), label(to));
        }
    }

    if flow < supply {
        let stranded = group
            .iter()
            .zip(&gen_arcs)
            .find(|(&s, &arc)| g.flow_on(arc) < i64::from(instance.sensor_kind(s).packets))
            .map(|(&s, _)| s)
            .unwrap_or(group[0]);
        return Err(RoutingError::Stranded(instance.sensor(stranded)));
    }

    for &(arc, s, r) in &relay_arcs {
        let f = g.flow_on(arc);
        if f > 0 {
            let amount = f as f64;
            consumption[s] += instance.sensor_kind(s).transmit_energy * amount;
            consumption[r] += instance.sensor_kind(r).receive_energy * amount;
            sensor_flows.push(SensorFlow {
                from: instance.sensor(s),
                to: instance.sensor(r),
                amount,
            });
        }
    }
    for &(arc, s) in &sink_arcs {
        let f = g.flow_on(arc);
        if f > 0 {
            let amount = f as f64;
            consumption[s] += instance.sensor_kind(s).transmit_energy * amount;
            sink_flows.push(SinkFlow {
                from: instance.sensor(s),
                sink,
                amount,
            });
        }
    }
    Ok(())
}

/// Writes the flows of `result` into `plan` (replacing previous flows).
pub fn apply_routing(plan: &mut PeriodPlan, result: &RoutingResult) {
    plan.sensor_flows = result.sensor_flows.clone();
    plan.sink_flows = result.sink_flows.clone();
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("sensor {sensor} would end period {period} with negative energy {value}")]
pub struct LedgerError {
    pub sensor: SensorId,
    pub period: usize,
    pub value: f64,
}

/// Appends `E^rem_{t+1} = E^rem_t - epsilon^t` for period `t`.
pub fn update_energy(
    instance: &Instance,
    ledger: &mut EnergyLedger,
    t: usize,
    result: &RoutingResult,
) -> Result<(), LedgerError> {
    assert_eq!(ledger.last_period(), t, "ledger must end at period {t}");
    let row: Vec<f64> = ledger
        .row(t)
        .iter()
        .zip(&result.consumption)
        .map(|(e, c)| e - c)
        .collect();
    if let Some((s, &value)) = row.iter().enumerate().find(|(_, v)| **v < -1e-6) {
        return Err(LedgerError {
            sensor: instance.sensor(s),
            period: t,
            value,
        });
    }
    ledger.push(row.into_iter().map(|v| v.max(0.0)).collect());
    Ok(())
}
