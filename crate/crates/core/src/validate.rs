//! Constraint checker for complete solutions.
//!
//! Every check mirrors one family of the mixed-integer model and appends a
//! [`Violation`] with a strictly positive magnitude when it fails. Node
//! numbers in locations are 1-based.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::model::{Instance, SensorId, Solution, SINK_KIND};

/// Absolute tolerance for flow and energy comparisons, in packets or energy units.
pub const FLOW_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Dimension,
    LifetimeBounds,
    Coverage,
    ActivityLinking,
    AlphaConnectivity,
    SinkAssignment,
    FlowCapacity,
    SelfFlow,
    FlowBalance,
    SinkFlow,
    RouteConsistency,
    Energy,
    Budget,
    SinkCount,
}

impl Family {
    pub const ALL: [Family; 14] = [
        Family::Dimension,
        Family::LifetimeBounds,
        Family::Coverage,
        Family::ActivityLinking,
        Family::AlphaConnectivity,
        Family::SinkAssignment,
        Family::FlowCapacity,
        Family::SelfFlow,
        Family::FlowBalance,
        Family::SinkFlow,
        Family::RouteConsistency,
        Family::Energy,
        Family::Budget,
        Family::SinkCount,
    ];

    /// Stable identifier used in reports.
    pub fn id(self) -> &'static str {
        match self {
            Family::Dimension => "dimension",
            Family::LifetimeBounds => "lifetime-bounds",
            Family::Coverage => "coverage",
            Family::ActivityLinking => "activity-linking",
            Family::AlphaConnectivity => "alpha-connectivity",
            Family::SinkAssignment => "sink-assignment",
            Family::FlowCapacity => "flow-capacity",
            Family::SelfFlow => "self-flow",
            Family::FlowBalance => "flow-balance",
            Family::SinkFlow => "sink-flow",
            Family::RouteConsistency => "route-consistency",
            Family::Energy => "energy",
            Family::Budget => "budget",
            Family::SinkCount => "sink-count",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub family: Family,
    /// 1-based period, when the constraint is indexed by one.
    pub period: Option<usize>,
    /// Index tuple, e.g. `i=5` or `(3, 2)->(8, 0)`.
    pub location: String,
    pub magnitude: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.family, self.location)?;
        if let Some(t) = self.period {
            write!(f, " t={t}")?;
        }
        write!(f, " by {:.6}", self.magnitude)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            feasible: violations.is_empty(),
            violations,
        }
    }

    pub fn count(&self, family: Family) -> usize {
        self.violations.iter().filter(|v| v.family == family).count()
    }

    pub fn families(&self) -> Vec<Family> {
        let mut out: Vec<Family> = self.violations.iter().map(|v| v.family).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.feasible {
            return f.write_str("feasible");
        }
        writeln!(f, "infeasible: {} violation(s)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

struct Collector(Vec<Violation>);

impl Collector {
    fn push(&mut self, family: Family, period: Option<usize>, location: String, magnitude: f64) {
        debug_assert!(magnitude > 0.0);
        self.0.push(Violation {
            family,
            period,
            location,
            magnitude,
        });
    }

    /// Records `lhs <= rhs` failures beyond `tol`.
    fn le(&mut self, family: Family, period: Option<usize>, lhs: f64, rhs: f64, tol: f64, loc: impl FnOnce() -> String) {
        if lhs > rhs + tol {
            self.push(family, period, loc(), lhs - rhs);
        }
    }

    fn eq(&mut self, family: Family, period: Option<usize>, lhs: f64, rhs: f64, tol: f64, loc: impl FnOnce() -> String) {
        if (lhs - rhs).abs() > tol {
            self.push(family, period, loc(), (lhs - rhs).abs());
        }
    }
}

/// One period expanded into dense activity plus aggregated sparse flows,
/// all keyed by sensor index.
struct PeriodView {
    z: Vec<bool>,
    /// Sink nodes each sensor is assigned to (`u = 1`).
    u: Vec<Vec<usize>>,
    y: BTreeMap<(usize, usize), f64>,
    g: BTreeMap<(usize, usize), f64>,
    inflow: Vec<f64>,
    outflow: Vec<f64>,
    sinkflow: Vec<f64>,
}

fn in_range_sensor(inst: &Instance, id: SensorId) -> bool {
    id.node < inst.nodes() && id.kind >= 1 && id.kind <= inst.kinds()
}

fn check_dimensions(inst: &Instance, sol: &Solution, out: &mut Collector) {
    let mut dim = |what: String| out.push(Family::Dimension, None, what, 1.0);
    if sol.nodes != inst.nodes() {
        dim(format!("N={} expected {}", sol.nodes, inst.nodes()));
    }
    if sol.kinds != inst.kinds() {
        dim(format!("K={} expected {}", sol.kinds, inst.kinds()));
    }
    if sol.horizon != inst.horizon() {
        dim(format!("T={} expected {}", sol.horizon, inst.horizon()));
    }
    if sol.period_on.len() != inst.horizon() {
        dim(format!("n has {} entries, expected {}", sol.period_on.len(), inst.horizon()));
    }
    if sol.periods.len() != inst.horizon() {
        dim(format!("{} period plans, expected {}", sol.periods.len(), inst.horizon()));
    }
    for d in &sol.deployed {
        if d.node >= inst.nodes() || d.kind > inst.kinds() {
            dim(format!("x entry {d} out of range"));
        }
    }
    for (t, p) in sol.periods.iter().enumerate() {
        let t = t + 1;
        for &s in &p.active {
            if !in_range_sensor(inst, s) {
                dim(format!("z entry {s} out of range at t={t}"));
            }
        }
        for a in &p.assignments {
            if a.sink >= inst.nodes() || !in_range_sensor(inst, a.sensor) {
                dim(format!("u entry {}<-{} out of range at t={t}", a.sink + 1, a.sensor));
            }
        }
        for f in &p.sensor_flows {
            if !in_range_sensor(inst, f.from) || !in_range_sensor(inst, f.to) {
                dim(format!("y entry {}->{} out of range at t={t}", f.from, f.to));
            }
        }
        for f in &p.sink_flows {
            if !in_range_sensor(inst, f.from) || f.sink >= inst.nodes() {
                dim(format!("g entry {}->{} out of range at t={t}", f.from, f.sink + 1));
            }
        }
    }
}

fn expand(inst: &Instance, sol: &Solution, t: usize) -> PeriodView {
    let ns = inst.sensor_count();
    let plan = sol.period(t);
    let mut v = PeriodView {
        z: vec![false; ns],
        u: vec![Vec::new(); ns],
        y: BTreeMap::new(),
        g: BTreeMap::new(),
        inflow: vec![0.0; ns],
        outflow: vec![0.0; ns],
        sinkflow: vec![0.0; ns],
    };
    for &s in &plan.active {
        v.z[inst.sensor_index(s)] = true;
    }
    for a in &plan.assignments {
        let s = inst.sensor_index(a.sensor);
        if !v.u[s].contains(&a.sink) {
            v.u[s].push(a.sink);
        }
    }
    for f in &plan.sensor_flows {
        let (a, b) = (inst.sensor_index(f.from), inst.sensor_index(f.to));
        *v.y.entry((a, b)).or_insert(0.0) += f.amount;
        v.outflow[a] += f.amount;
        v.inflow[b] += f.amount;
    }
    for f in &plan.sink_flows {
        let a = inst.sensor_index(f.from);
        *v.g.entry((a, f.sink)).or_insert(0.0) += f.amount;
        v.sinkflow[a] += f.amount;
    }
    v
}

/// Checks `solution` against every constraint family.
pub fn validate(instance: &Instance, solution: &Solution) -> ValidationReport {
    let mut out = Collector(Vec::new());
    check_dimensions(instance, solution, &mut out);
    if !out.0.is_empty() {
        return ValidationReport::from_violations(out.0);
    }
    let inst = instance;
    let n = inst.nodes();
    let kk = inst.kinds() + 1;
    let horizon = inst.horizon();
    let m1 = inst.big_m1();
    let m2 = inst.big_m2();

    let mut x = vec![false; n * kk];
    for d in &solution.deployed {
        x[d.node * kk + d.kind] = true;
    }
    let is_sink = |j: usize| x[j * kk + SINK_KIND];

    // lifetime bounds: 0 <= L <= T and T n_t >= L + 1 - t
    let lifetime = solution.lifetime;
    if lifetime > horizon {
        out.push(Family::LifetimeBounds, None, "L".into(), (lifetime - horizon) as f64);
    }
    for t in 1..=horizon {
        let on = solution.period_on[t - 1];
        let need = lifetime as f64 + 1.0 - t as f64;
        let have = if on { horizon as f64 } else { 0.0 };
        if have < need {
            out.push(Family::LifetimeBounds, Some(t), format!("n_{t}"), need - have);
        }
    }

    for t in 1..=horizon {
        let on = solution.period_on[t - 1];
        let n_t = if on { 1.0 } else { 0.0 };
        let v = expand(inst, solution, t);
        let pt = Some(t);

        for i in 0..n {
            let covered = inst.covered_by(i).iter().filter(|&&s| v.z[s]).count() as f64;
            let need = f64::from(inst.coverage_req(i)) * n_t;
            if covered < need {
                out.push(Family::Coverage, pt, format!("i={}", i + 1), need - covered);
            }
        }

        for s in 0..inst.sensor_count() {
            let id = inst.sensor(s);
            if !v.z[s] {
                continue;
            }
            if !x[id.node * kk + id.kind] {
                out.push(Family::ActivityLinking, pt, format!("z{id} > x{id}"), 1.0);
            }
            if !on {
                out.push(Family::ActivityLinking, pt, format!("z{id} > n_t"), 1.0);
            }
            let neighbours = inst.sends_to(s).iter().filter(|&&q| v.z[q]).count() as u32;
            if neighbours < inst.alpha() {
                out.push(
                    Family::AlphaConnectivity,
                    pt,
                    format!("{id}"),
                    f64::from(inst.alpha() - neighbours),
                );
            }
        }

        // u <= x_{i0}, u <= z, sum_i u = z
        for s in 0..inst.sensor_count() {
            let id = inst.sensor(s);
            for &sink in &v.u[s] {
                if !is_sink(sink) {
                    out.push(Family::SinkAssignment, pt, format!("u {}<-{id} without sink", sink + 1), 1.0);
                }
                if !v.z[s] {
                    out.push(Family::SinkAssignment, pt, format!("u {}<-{id} while inactive", sink + 1), 1.0);
                }
            }
            let total = v.u[s].len() as f64;
            let want = if v.z[s] { 1.0 } else { 0.0 };
            out.eq(Family::SinkAssignment, pt, total, want, 0.0, || format!("sum u for {id}"));
        }

        for (&(a, b), &amount) in &v.y {
            let (ia, ib) = (inst.sensor(a), inst.sensor(b));
            if amount < -FLOW_TOL {
                out.push(Family::FlowCapacity, pt, format!("y {ia}->{ib} negative"), -amount);
            }
            if a == b {
                if amount.abs() > FLOW_TOL {
                    out.push(Family::SelfFlow, pt, format!("y {ia}->{ia}"), amount.abs());
                }
                continue;
            }
            let cap = if inst.b(ia.node, ia.kind, ib.node) { m1 } else { 0.0 };
            out.le(Family::FlowCapacity, pt, amount, cap, FLOW_TOL, || format!("y {ia}->{ib}"));
            if amount > FLOW_TOL {
                // u_{v,a} <= u_{v,b} for every v
                for &sink in &v.u[a] {
                    if !v.u[b].contains(&sink) {
                        out.push(
                            Family::RouteConsistency,
                            pt,
                            format!("y {ia}->{ib} crosses sink {}", sink + 1),
                            1.0,
                        );
                    }
                }
            }
        }
        let mut sink_in = vec![0.0; n];
        for (&(a, j), &amount) in &v.g {
            let ia = inst.sensor(a);
            if amount < -FLOW_TOL {
                out.push(Family::FlowCapacity, pt, format!("g {ia}->{} negative", j + 1), -amount);
            }
            let cap = if inst.b(ia.node, ia.kind, j) { m2 } else { 0.0 };
            out.le(Family::FlowCapacity, pt, amount, cap, FLOW_TOL, || format!("g {ia}->{}", j + 1));
            sink_in[j] += amount;
            if amount > FLOW_TOL {
                // u_{v,a} <= 1_j(v) x_{j0}
                for &sink in &v.u[a] {
                    if sink != j || !is_sink(j) {
                        out.push(
                            Family::RouteConsistency,
                            pt,
                            format!("g {ia}->{} but assigned to {}", j + 1, sink + 1),
                            1.0,
                        );
                    }
                }
            }
        }
        for s in 0..inst.sensor_count() {
            let id = inst.sensor(s);
            let zc = if v.z[s] { m1 } else { 0.0 };
            out.le(Family::FlowCapacity, pt, v.outflow[s], zc, FLOW_TOL, || format!("outflow {id}"));
            out.le(Family::FlowCapacity, pt, v.inflow[s], zc, FLOW_TOL, || format!("inflow {id}"));
            let h = if v.z[s] { f64::from(inst.sensor_kind(s).packets) } else { 0.0 };
            out.eq(
                Family::FlowBalance,
                pt,
                v.inflow[s] + h,
                v.outflow[s] + v.sinkflow[s],
                FLOW_TOL,
                || format!("{id}"),
            );
        }
        let mut assigned_packets = vec![0.0; n];
        for s in 0..inst.sensor_count() {
            for &sink in &v.u[s] {
                assigned_packets[sink] += f64::from(inst.sensor_kind(s).packets);
            }
        }
        for j in 0..n {
            let cap = if is_sink(j) { m2 } else { 0.0 };
            out.le(Family::FlowCapacity, pt, sink_in[j], cap, FLOW_TOL, || format!("sink inflow {}", j + 1));
            out.eq(Family::SinkFlow, pt, sink_in[j], assigned_packets[j], FLOW_TOL, || {
                format!("sink {}", j + 1)
            });
        }
    }

    let used = lifetime_energy_audit(inst, solution);
    for (s, &e) in used.iter().enumerate() {
        let cap = inst.sensor_kind(s).battery_or_inf();
        out.le(Family::Energy, None, e, cap, FLOW_TOL.max(cap * 1e-12), || {
            format!("{}", inst.sensor(s))
        });
    }

    let cost = solution.deployment_cost(inst);
    out.le(Family::Budget, None, cost, inst.budget(), 1e-9, || "B".into());

    let sinks = (0..n).filter(|&j| is_sink(j)).count();
    out.eq(Family::SinkCount, None, sinks as f64, inst.sink_count() as f64, 0.0, || "S".into());

    ValidationReport::from_violations(out.0)
}

/// Total energy each sensor spends over the horizon, indexed by sensor index:
/// `sum_t e^s z + e^r inflow + e^c (outflow + sink flow)`.
pub fn lifetime_energy_audit(instance: &Instance, solution: &Solution) -> Vec<f64> {
    let mut used = vec![0.0; instance.sensor_count()];
    for plan in solution.periods.iter().take(instance.horizon()) {
        for &s in &plan.active {
            if in_range_sensor(instance, s) {
                used[instance.sensor_index(s)] += instance.sensor_type(s.kind).sense_energy;
            }
        }
        for f in &plan.sensor_flows {
            if in_range_sensor(instance, f.from) && in_range_sensor(instance, f.to) {
                used[instance.sensor_index(f.from)] += instance.sensor_type(f.from.kind).transmit_energy * f.amount;
                used[instance.sensor_index(f.to)] += instance.sensor_type(f.to.kind).receive_energy * f.amount;
            }
        }
        for f in &plan.sink_flows {
            if in_range_sensor(instance, f.from) {
                used[instance.sensor_index(f.from)] += instance.sensor_type(f.from.kind).transmit_energy * f.amount;
            }
        }
    }
    used
}

/// Audit keyed by sensor, skipping sensors that never spend energy.
pub fn energy_by_sensor(instance: &Instance, solution: &Solution) -> BTreeMap<SensorId, f64> {
    lifetime_energy_audit(instance, solution)
        .into_iter()
        .enumerate()
        .filter(|(_, e)| *e > 0.0)
        .map(|(s, e)| (instance.sensor(s), e))
        .collect()
}
