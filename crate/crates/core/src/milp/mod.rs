//! The full mixed-integer model in LP text format.
//!
//! [`export_model`] registers every decision variable, including the route
//! indicators `w`, and emits the constraint rows family by family with
//! big-M linearized route consistency. [`assign`] maps a [`Solution`] onto
//! the registry so rows can be checked by substitution, and
//! [`import_solution`] reads a `name value` listing back.

mod lp;
mod values;

use std::collections::HashMap;
use std::fmt;

pub use lp::write_lp;
pub use values::{import_solution, parse_values, solution_from_values, write_values, ImportError};

use crate::model::{Instance, Solution, SINK_KIND};
use crate::validate::FLOW_TOL;

pub const DEFAULT_ROW_CAP: usize = 200_000;

/// Canonical file name for an exported model.
pub fn file_name(instance: &Instance) -> String {
    format!(
        "spsrc_N{}_K{}_T{}.lp",
        instance.nodes(),
        instance.kinds(),
        instance.horizon()
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarType {
    Binary,
    Integer,
    Continuous,
}

/// Index tuple of a variable. Nodes are 0-based here and 1-based in names;
/// periods are 1-based everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKey {
    Lifetime,
    Period(usize),
    Deploy { node: usize, kind: usize },
    Active { node: usize, kind: usize, t: usize },
    Assign { sink: usize, node: usize, kind: usize, t: usize },
    Flow { from: (usize, usize), to: (usize, usize), t: usize },
    SinkFlow { from: (usize, usize), sink: usize, t: usize },
    /// `kind == 0` in `to` marks the arc into a sink.
    Route { from: (usize, usize), to: (usize, usize), t: usize },
}

impl VarKey {
    pub fn name(&self) -> String {
        match *self {
            VarKey::Lifetime => "L".into(),
            VarKey::Period(t) => format!("n_{t}"),
            VarKey::Deploy { node, kind } => format!("x_{}_{kind}", node + 1),
            VarKey::Active { node, kind, t } => format!("z_{}_{kind}_{t}", node + 1),
            VarKey::Assign { sink, node, kind, t } => format!("u_{}_{}_{kind}_{t}", sink + 1, node + 1),
            VarKey::Flow { from, to, t } => {
                format!("y_{}_{}_{}_{}_{t}", from.0 + 1, from.1, to.0 + 1, to.1)
            }
            VarKey::SinkFlow { from, sink, t } => format!("g_{}_{}_{}_{t}", from.0 + 1, from.1, sink + 1),
            VarKey::Route { from, to, t } => {
                format!("w_{}_{}_{}_{}_{t}", from.0 + 1, from.1, to.0 + 1, to.1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Var {
    pub key: VarKey,
    pub name: String,
    pub ty: VarType,
    pub lower: f64,
    pub upper: f64,
}

/// Every variable of the model in canonical order.
#[derive(Debug, Clone)]
pub struct Registry {
    pub vars: Vec<Var>,
    index: HashMap<VarKey, usize>,
    names: HashMap<String, usize>,
}

impl Registry {
    pub fn new(inst: &Instance) -> Self {
        let (n, kinds, horizon) = (inst.nodes(), inst.kinds(), inst.horizon());
        let mut reg = Registry {
            vars: Vec::new(),
            index: HashMap::new(),
            names: HashMap::new(),
        };
        reg.add(VarKey::Lifetime, VarType::Integer, horizon as f64);
        for t in 1..=horizon {
            reg.add(VarKey::Period(t), VarType::Binary, 1.0);
        }
        for node in 0..n {
            for kind in 0..=kinds {
                reg.add(VarKey::Deploy { node, kind }, VarType::Binary, 1.0);
            }
        }
        let sensors: Vec<(usize, usize)> = inst.sensors().map(|s| (s.node, s.kind)).collect();
        for t in 1..=horizon {
            for &(node, kind) in &sensors {
                reg.add(VarKey::Active { node, kind, t }, VarType::Binary, 1.0);
            }
            for sink in 0..n {
                for &(node, kind) in &sensors {
                    reg.add(VarKey::Assign { sink, node, kind, t }, VarType::Binary, 1.0);
                }
            }
            for &from in &sensors {
                for &to in &sensors {
                    reg.add(VarKey::Flow { from, to, t }, VarType::Continuous, f64::INFINITY);
                }
            }
            for &from in &sensors {
                for sink in 0..n {
                    reg.add(VarKey::SinkFlow { from, sink, t }, VarType::Continuous, f64::INFINITY);
                }
            }
            for &from in &sensors {
                for &to in &sensors {
                    reg.add(VarKey::Route { from, to, t }, VarType::Binary, 1.0);
                }
                for sink in 0..n {
                    let to = (sink, SINK_KIND);
                    reg.add(VarKey::Route { from, to, t }, VarType::Binary, 1.0);
                }
            }
        }
        reg
    }

    fn add(&mut self, key: VarKey, ty: VarType, upper: f64) {
        let name = key.name();
        let idx = self.vars.len();
        self.index.insert(key, idx);
        self.names.insert(name.clone(), idx);
        self.vars.push(Var {
            key,
            name,
            ty,
            lower: 0.0,
            upper,
        });
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn get(&self, key: VarKey) -> usize {
        self.index[&key]
    }

    pub fn by_name(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }
}

/// Closed-form variable count: `N(K+1) + NKT + N*NKT + (NK)^2 T + N^2 K T + T + 1`
/// plus the route block `(NK)^2 T + N^2 K T`.
pub fn variable_count(nodes: usize, kinds: usize, horizon: usize) -> usize {
    let nk = nodes * kinds;
    let route = nk * nk * horizon + nodes * nodes * kinds * horizon;
    nodes * (kinds + 1)
        + nk * horizon
        + nodes * nk * horizon
        + nk * nk * horizon
        + nodes * nodes * kinds * horizon
        + horizon
        + 1
        + route
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowFamily {
    Lifetime,
    Coverage,
    ActivityLinking,
    Connectivity,
    SinkAssignment,
    FlowCapacity,
    FlowBalance,
    SinkFlow,
    RouteConsistency,
    Energy,
    Budget,
    SinkCount,
    OutflowCut,
}

impl RowFamily {
    pub fn id(self) -> &'static str {
        match self {
            RowFamily::Lifetime => "lifetime",
            RowFamily::Coverage => "coverage",
            RowFamily::ActivityLinking => "activity-linking",
            RowFamily::Connectivity => "alpha-connectivity",
            RowFamily::SinkAssignment => "sink-assignment",
            RowFamily::FlowCapacity => "flow-capacity",
            RowFamily::FlowBalance => "flow-balance",
            RowFamily::SinkFlow => "sink-flow",
            RowFamily::RouteConsistency => "route-consistency",
            RowFamily::Energy => "energy",
            RowFamily::Budget => "budget",
            RowFamily::SinkCount => "sink-count",
            RowFamily::OutflowCut => "outflow-cut",
        }
    }
}

impl fmt::Display for RowFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub family: RowFamily,
    /// `(variable index, coefficient)`, no zero coefficients.
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// How far `values` violates the row; zero when satisfied.
    pub fn excess(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportOptions {
    /// Pins `x_{j0}` to the given 0-based nodes.
    pub fixed_sinks: Option<Vec<usize>>,
    /// Adds the outflow cut `sum_{(j,k)} w_{iljkt} <= alpha`.
    pub alpha_cut: bool,
    pub row_cap: usize,
}

impl Default for ExportOptions {
    fn default() -> Self {
        Self {
            fixed_sinks: None,
            alpha_cut: true,
            row_cap: DEFAULT_ROW_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExportError {
    #[error("model needs more than {cap} rows; export is meant for small instances (raise --row-cap to force)")]
    TooLarge { cap: usize },
    #[error("fixed sink node {0} outside the grid")]
    BadSink(usize),
    #[error("{given} fixed sinks given but the instance asks for {expected}")]
    SinkCount { given: usize, expected: usize },
}

#[derive(Debug, Clone)]
pub struct ExportModel {
    pub registry: Registry,
    pub rows: Vec<Row>,
    pub m1: f64,
    pub m2: f64,
    pub header: String,
}

impl ExportModel {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows_of(&self, family: RowFamily) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.family == family)
    }

    pub fn to_lp(&self) -> String {
        write_lp(self)
    }
}

struct Rows<'r> {
    reg: &'r Registry,
    rows: Vec<Row>,
    cap: usize,
}

impl Rows<'_> {
    fn push(
        &mut self,
        name: String,
        family: RowFamily,
        terms: Vec<(VarKey, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> Result<(), ExportError> {
        if self.rows.len() >= self.cap {
            return Err(ExportError::TooLarge { cap: self.cap });
        }
        let terms = terms
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(k, c)| (self.reg.get(k), c))
            .collect();
        self.rows.push(Row {
            name,
            family,
            terms,
            sense,
            rhs,
        });
        Ok(())
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Builds the complete model for `instance`.
pub fn export_model(instance: &Instance, options: &ExportOptions) -> Result<ExportModel, ExportError> {
    let inst = instance;
    let (n, horizon) = (inst.nodes(), inst.horizon());
    if let Some(fixed) = &options.fixed_sinks {
        if let Some(&bad) = fixed.iter().find(|&&j| j >= n) {
            return Err(ExportError::BadSink(bad + 1));
        }
        let mut distinct = fixed.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != inst.sink_count() {
            return Err(ExportError::SinkCount {
                given: distinct.len(),
                expected: inst.sink_count(),
            });
        }
    }
    let mut registry = Registry::new(inst);
    if let Some(fixed) = &options.fixed_sinks {
        for j in 0..n {
            let v = registry.get(VarKey::Deploy { node: j, kind: SINK_KIND });
            let on = flag(fixed.contains(&j));
            registry.vars[v].lower = on;
            registry.vars[v].upper = on;
        }
    }
    let m1 = inst.big_m1();
    let m2 = inst.big_m2();
    let alpha = f64::from(inst.alpha());
    let sensors: Vec<(usize, usize)> = inst.sensors().map(|s| (s.node, s.kind)).collect();
    let h = |s: (usize, usize)| f64::from(inst.sensor_type(s.1).packets);
    let z = |s: (usize, usize), t| VarKey::Active { node: s.0, kind: s.1, t };
    let u = |sink, s: (usize, usize), t| VarKey::Assign { sink, node: s.0, kind: s.1, t };
    let y = |from, to, t| VarKey::Flow { from, to, t };
    let g = |from, sink, t| VarKey::SinkFlow { from, sink, t };
    let w = |from, to, t| VarKey::Route { from, to, t };
    let x0 = |j| VarKey::Deploy { node: j, kind: SINK_KIND };
    let tag = |s: (usize, usize)| format!("{}_{}", s.0 + 1, s.1);

    let mut rows = Rows {
        reg: &registry,
        rows: Vec::new(),
        cap: options.row_cap,
    };

    for t in 1..=horizon {
        rows.push(
            format!("life_{t}"),
            RowFamily::Lifetime,
            vec![(VarKey::Period(t), horizon as f64), (VarKey::Lifetime, -1.0)],
            Sense::Ge,
            1.0 - t as f64,
        )?;
    }

    for t in 1..=horizon {
        let nt = VarKey::Period(t);
        for i in 0..n {
            let mut terms: Vec<(VarKey, f64)> = sensors
                .iter()
                .filter(|s| inst.a(i, s.0, s.1))
                .map(|&s| (z(s, t), 1.0))
                .collect();
            terms.push((nt, -f64::from(inst.coverage_req(i))));
            rows.push(format!("cov_{}_{t}", i + 1), RowFamily::Coverage, terms, Sense::Ge, 0.0)?;
        }
        for &s in &sensors {
            let xs = VarKey::Deploy { node: s.0, kind: s.1 };
            rows.push(
                format!("zx_{}_{t}", tag(s)),
                RowFamily::ActivityLinking,
                vec![(z(s, t), 1.0), (xs, -1.0)],
                Sense::Le,
                0.0,
            )?;
            rows.push(
                format!("zn_{}_{t}", tag(s)),
                RowFamily::ActivityLinking,
                vec![(z(s, t), 1.0), (nt, -1.0)],
                Sense::Le,
                0.0,
            )?;
        }
        for &s in &sensors {
            let mut terms: Vec<(VarKey, f64)> = sensors
                .iter()
                .filter(|&&q| q != s && inst.b(s.0, s.1, q.0))
                .map(|&q| (z(q, t), 1.0))
                .collect();
            terms.push((z(s, t), -alpha));
            rows.push(format!("conn_{}_{t}", tag(s)), RowFamily::Connectivity, terms, Sense::Ge, 0.0)?;
        }
        for &s in &sensors {
            for sink in 0..n {
                rows.push(
                    format!("ux_{}_{}_{t}", sink + 1, tag(s)),
                    RowFamily::SinkAssignment,
                    vec![(u(sink, s, t), 1.0), (x0(sink), -1.0)],
                    Sense::Le,
                    0.0,
                )?;
                rows.push(
                    format!("uz_{}_{}_{t}", sink + 1, tag(s)),
                    RowFamily::SinkAssignment,
                    vec![(u(sink, s, t), 1.0), (z(s, t), -1.0)],
                    Sense::Le,
                    0.0,
                )?;
            }
            let mut terms: Vec<(VarKey, f64)> = (0..n).map(|sink| (u(sink, s, t), 1.0)).collect();
            terms.push((z(s, t), -1.0));
            rows.push(format!("usum_{}_{t}", tag(s)), RowFamily::SinkAssignment, terms, Sense::Eq, 0.0)?;
        }

        for &s in &sensors {
            rows.push(
                format!("yself_{}_{t}", tag(s)),
                RowFamily::FlowCapacity,
                vec![(y(s, s, t), 1.0)],
                Sense::Eq,
                0.0,
            )?;
            for &q in &sensors {
                if q != s {
                    rows.push(
                        format!("ycap_{}_{}_{t}", tag(s), tag(q)),
                        RowFamily::FlowCapacity,
                        vec![(y(s, q, t), 1.0)],
                        Sense::Le,
                        m1 * flag(inst.b(s.0, s.1, q.0)),
                    )?;
                }
            }
            let mut out: Vec<(VarKey, f64)> = sensors.iter().map(|&q| (y(s, q, t), 1.0)).collect();
            out.push((z(s, t), -m1));
            rows.push(format!("out_{}_{t}", tag(s)), RowFamily::FlowCapacity, out, Sense::Le, 0.0)?;
            let mut inn: Vec<(VarKey, f64)> = sensors.iter().map(|&q| (y(q, s, t), 1.0)).collect();
            inn.push((z(s, t), -m1));
            rows.push(format!("in_{}_{t}", tag(s)), RowFamily::FlowCapacity, inn, Sense::Le, 0.0)?;
            for sink in 0..n {
                rows.push(
                    format!("gcap_{}_{}_{t}", tag(s), sink + 1),
                    RowFamily::FlowCapacity,
                    vec![(g(s, sink, t), 1.0)],
                    Sense::Le,
                    m2 * flag(inst.b(s.0, s.1, sink)),
                )?;
            }
        }
        for sink in 0..n {
            let mut terms: Vec<(VarKey, f64)> = sensors.iter().map(|&s| (g(s, sink, t), 1.0)).collect();
            terms.push((x0(sink), -m2));
            rows.push(format!("gin_{}_{t}", sink + 1), RowFamily::FlowCapacity, terms, Sense::Le, 0.0)?;
        }

        // inflow + h z = outflow + sink flow
        for &s in &sensors {
            let mut terms: Vec<(VarKey, f64)> = Vec::new();
            for &q in &sensors {
                if q != s {
                    terms.push((y(q, s, t), 1.0));
                    terms.push((y(s, q, t), -1.0));
                }
            }
            terms.extend((0..n).map(|sink| (g(s, sink, t), -1.0)));
            terms.push((z(s, t), h(s)));
            rows.push(format!("bal_{}_{t}", tag(s)), RowFamily::FlowBalance, terms, Sense::Eq, 0.0)?;
        }
        for sink in 0..n {
            let mut terms: Vec<(VarKey, f64)> = sensors.iter().map(|&s| (g(s, sink, t), 1.0)).collect();
            terms.extend(sensors.iter().map(|&s| (u(sink, s, t), -h(s))));
            rows.push(format!("sink_{}_{t}", sink + 1), RowFamily::SinkFlow, terms, Sense::Eq, 0.0)?;
        }

        for &s in &sensors {
            for &q in &sensors {
                if q == s {
                    continue;
                }
                rows.push(
                    format!("lin1_{}_{}_{t}", tag(s), tag(q)),
                    RowFamily::RouteConsistency,
                    vec![(y(s, q, t), 1.0), (w(s, q, t), -m1)],
                    Sense::Le,
                    0.0,
                )?;
            }
            for sink in 0..n {
                rows.push(
                    format!("lin2_{}_{}_{t}", tag(s), sink + 1),
                    RowFamily::RouteConsistency,
                    vec![(g(s, sink, t), 1.0), (w(s, (sink, SINK_KIND), t), -m2)],
                    Sense::Le,
                    0.0,
                )?;
            }
        }
        // u_{v,il} - u_{v,jk} <= 1 - w_{iljk}
        for v in 0..n {
            for &s in &sensors {
                for &q in &sensors {
                    if q == s {
                        continue;
                    }
                    rows.push(
                        format!("lin3_{}_{}_{}_{t}", v + 1, tag(s), tag(q)),
                        RowFamily::RouteConsistency,
                        vec![(u(v, s, t), 1.0), (u(v, q, t), -1.0), (w(s, q, t), 1.0)],
                        Sense::Le,
                        1.0,
                    )?;
                }
                // u_{v,il} - 1_j(v) x_{j0} <= 1 - w_{ilj0}
                for sink in 0..n {
                    let mut terms = vec![(u(v, s, t), 1.0), (w(s, (sink, SINK_KIND), t), 1.0)];
                    if sink == v {
                        terms.push((x0(sink), -1.0));
                    }
                    rows.push(
                        format!("lin4_{}_{}_{}_{t}", v + 1, tag(s), sink + 1),
                        RowFamily::RouteConsistency,
                        terms,
                        Sense::Le,
                        1.0,
                    )?;
                }
            }
        }
        if options.alpha_cut {
            for &s in &sensors {
                let terms: Vec<(VarKey, f64)> =
                    sensors.iter().filter(|&&q| q != s).map(|&q| (w(s, q, t), 1.0)).collect();
                rows.push(format!("acut_{}_{t}", tag(s)), RowFamily::OutflowCut, terms, Sense::Le, alpha)?;
            }
        }
    }

    for &s in &sensors {
        let ty = inst.sensor_type(s.1);
        let Some(battery) = ty.battery else { continue };
        let mut terms: Vec<(VarKey, f64)> = Vec::new();
        for t in 1..=horizon {
            terms.push((z(s, t), ty.sense_energy));
            for &q in &sensors {
                if q != s {
                    terms.push((y(q, s, t), ty.receive_energy));
                    terms.push((y(s, q, t), ty.transmit_energy));
                }
            }
            terms.extend((0..n).map(|sink| (g(s, sink, t), ty.transmit_energy)));
        }
        rows.push(format!("energy_{}", tag(s)), RowFamily::Energy, terms, Sense::Le, battery)?;
    }

    let mut budget: Vec<(VarKey, f64)> = Vec::new();
    for node in 0..n {
        for kind in 0..=inst.kinds() {
            budget.push((VarKey::Deploy { node, kind }, inst.cost(node, kind)));
        }
    }
    rows.push("budget".into(), RowFamily::Budget, budget, Sense::Le, inst.budget())?;
    let sinks: Vec<(VarKey, f64)> = (0..n).map(|j| (x0(j), 1.0)).collect();
    rows.push("sinks".into(), RowFamily::SinkCount, sinks, Sense::Eq, inst.sink_count() as f64)?;

    let rows = rows.rows;
    let header = format!(
        "spsrc N={} K={} T={} S={} alpha={} M1={} M2={}",
        n,
        inst.kinds(),
        horizon,
        inst.sink_count(),
        inst.alpha(),
        m1,
        m2
    );
    Ok(ExportModel {
        registry,
        rows,
        m1,
        m2,
        header,
    })
}

/// Variable values for `solution` in registry order. Route indicators are
/// set wherever the matching flow is positive.
pub fn assign(registry: &Registry, instance: &Instance, solution: &Solution) -> Vec<f64> {
    let mut v = vec![0.0; registry.len()];
    v[registry.get(VarKey::Lifetime)] = solution.lifetime as f64;
    for (t, &on) in solution.period_on.iter().enumerate() {
        v[registry.get(VarKey::Period(t + 1))] = flag(on);
    }
    for d in &solution.deployed {
        v[registry.get(VarKey::Deploy { node: d.node, kind: d.kind })] = 1.0;
    }
    for (t, plan) in solution.periods.iter().enumerate().take(instance.horizon()) {
        let t = t + 1;
        for s in &plan.active {
            v[registry.get(VarKey::Active { node: s.node, kind: s.kind, t })] = 1.0;
        }
        for a in &plan.assignments {
            let key = VarKey::Assign {
                sink: a.sink,
                node: a.sensor.node,
                kind: a.sensor.kind,
                t,
            };
            v[registry.get(key)] = 1.0;
        }
        for f in &plan.sensor_flows {
            let (from, to) = ((f.from.node, f.from.kind), (f.to.node, f.to.kind));
            v[registry.get(VarKey::Flow { from, to, t })] += f.amount;
        }
        for f in &plan.sink_flows {
            let from = (f.from.node, f.from.kind);
            v[registry.get(VarKey::SinkFlow { from, sink: f.sink, t })] += f.amount;
        }
    }
    for (idx, var) in registry.vars.iter().enumerate() {
        let flow = match var.key {
            VarKey::Route { from, to, t } if to.1 == SINK_KIND => VarKey::SinkFlow { from, sink: to.0, t },
            VarKey::Route { from, to, t } => VarKey::Flow { from, to, t },
            _ => continue,
        };
        v[idx] = flag(v[registry.get(flow)] > FLOW_TOL);
    }
    v
}

/// A row or bound that a value vector fails.
#[derive(Debug, Clone, PartialEq)]
pub struct RowViolation {
    pub name: String,
    pub family: Option<RowFamily>,
    pub amount: f64,
}

/// Substitutes `values` into every bound, integrality condition and row,
/// returning each one violated beyond `tol` (scaled by the row's rhs).
pub fn check_values(model: &ExportModel, values: &[f64], tol: f64) -> Vec<RowViolation> {
    let mut out = Vec::new();
    for (var, &x) in model.registry.vars.iter().zip(values) {
        let off = (var.lower - x).max(x - var.upper).max(0.0);
        let frac = if var.ty == VarType::Continuous {
            0.0
        } else {
            (x - x.round()).abs()
        };
        if off.max(frac) > tol {
            out.push(RowViolation {
                name: var.name.clone(),
                family: None,
                amount: off.max(frac),
            });
        }
    }
    for row in &model.rows {
        let excess = row.excess(values);
        if excess > tol * row.rhs.abs().max(1.0) {
            out.push(RowViolation {
                name: row.name.clone(),
                family: Some(row.family),
                amount: excess,
            });
        }
    }
    out
}

/// Row substitution for a solution.
pub fn check_solution(model: &ExportModel, instance: &Instance, solution: &Solution) -> Vec<RowViolation> {
    let values = assign(&model.registry, instance, solution);
    check_values(model, &values, FLOW_TOL)
}

#[cfg(test)]
mod tests;
