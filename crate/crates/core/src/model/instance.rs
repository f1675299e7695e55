use serde::{Deserialize, Serialize};

use super::types::{BudgetLevel, Metrics, SensorId, SensorType, SINK_KIND};
use super::ModelError;

/// Raw, serializable description of an instance. Coefficient matrices are
/// derived from it and never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceParts {
    pub width: usize,
    pub height: usize,
    #[serde(default)]
    pub metrics: Metrics,
    /// Indexed by kind; entry 0 is the sink.
    pub types: Vec<SensorType>,
    /// `c[j][k]`, node-major.
    #[serde(rename = "c")]
    pub costs: Vec<Vec<f64>>,
    #[serde(rename = "f")]
    pub coverage_req: Vec<u32>,
    pub alpha: u32,
    #[serde(rename = "T")]
    pub horizon: usize,
    #[serde(rename = "B")]
    pub budget: f64,
    #[serde(rename = "S")]
    pub sink_count: usize,
}

/// `a[i][j][k]`: node `i` lies within the sensing range of sensor `(j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageMatrix {
    nodes: usize,
    kinds: usize,
    bits: Vec<bool>,
}

impl CoverageMatrix {
    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.bits[(i * self.nodes + j) * self.kinds + k]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}

/// `b[i][l][j]`: node `j` lies within the communication range of sensor `(i, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommMatrix {
    nodes: usize,
    kinds: usize,
    bits: Vec<bool>,
}

impl CommMatrix {
    pub fn get(&self, i: usize, l: usize, j: usize) -> bool {
        self.bits[(i * self.kinds + l) * self.nodes + j]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}

/// Fills both coefficient matrices from grid geometry, ranges and metrics.
/// Sinks neither sense nor transmit, so their rows stay zero.
pub fn compute_coefficients(parts: &InstanceParts) -> (CoverageMatrix, CommMatrix) {
    let n = parts.width * parts.height;
    let kinds = parts.types.len();
    let coord = |j: usize| ((j % parts.width) as i64, (j / parts.width) as i64);
    let mut a = vec![false; n * n * kinds];
    let mut b = vec![false; n * kinds * n];
    for i in 0..n {
        for j in 0..n {
            let sense_d = parts.metrics.sensing.distance(coord(i), coord(j));
            let comm_d = parts.metrics.communication.distance(coord(i), coord(j));
            for (k, ty) in parts.types.iter().enumerate() {
                if k == SINK_KIND {
                    continue;
                }
                a[(i * n + j) * kinds + k] = sense_d <= ty.sensing_range + 1e-9;
                b[(i * kinds + k) * n + j] = comm_d <= ty.comm_range + 1e-9;
            }
        }
    }
    (
        CoverageMatrix {
            nodes: n,
            kinds,
            bits: a,
        },
        CommMatrix {
            nodes: n,
            kinds,
            bits: b,
        },
    )
}

#[derive(Debug, Clone, PartialEq, Default)]
struct Adjacency {
    covers: Vec<Vec<usize>>,
    covered_by: Vec<Vec<usize>>,
    reaches: Vec<Vec<usize>>,
    reached_by: Vec<Vec<usize>>,
    sends_to: Vec<Vec<usize>>,
    hears_from: Vec<Vec<usize>>,
}

/// Immutable network description. Cheap to share between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    parts: InstanceParts,
    coverage: CoverageMatrix,
    comm: CommMatrix,
    adj: Adjacency,
    max_packets: u32,
}

impl Instance {
    pub fn new(parts: InstanceParts) -> Result<Self, ModelError> {
        let n = parts.width * parts.height;
        if n == 0 {
            return Err(ModelError::EmptyGrid);
        }
        if parts.types.len() < 2 {
            return Err(ModelError::Dimension("at least one sensor kind besides the sink is required".into()));
        }
        for (k, ty) in parts.types.iter().enumerate() {
            if ty.kind != k {
                return Err(ModelError::Dimension(format!("type at position {k} declares kind {}", ty.kind)));
            }
            ty.check()?;
        }
        if parts.costs.len() != n || parts.costs.iter().any(|row| row.len() != parts.types.len()) {
            return Err(ModelError::Dimension(format!(
                "cost table must be {n} x {}",
                parts.types.len()
            )));
        }
        if parts.coverage_req.len() != n {
            return Err(ModelError::Dimension(format!("coverage requirements must have {n} entries")));
        }
        if parts.costs.iter().flatten().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(ModelError::Dimension("costs must be finite and non-negative".into()));
        }
        if parts.sink_count > n {
            return Err(ModelError::Dimension(format!("{} sinks do not fit on {n} nodes", parts.sink_count)));
        }
        let (coverage, comm) = compute_coefficients(&parts);
        let max_packets = parts.types.iter().map(|t| t.packets).max().unwrap_or(0);
        let mut inst = Self {
            parts,
            coverage,
            comm,
            adj: Adjacency::default(),
            max_packets,
        };
        inst.adj = inst.build_adjacency();
        Ok(inst)
    }

    fn build_adjacency(&self) -> Adjacency {
        let n = self.nodes();
        let ns = self.sensor_count();
        let mut adj = Adjacency {
            covers: vec![Vec::new(); ns],
            covered_by: vec![Vec::new(); n],
            reaches: vec![Vec::new(); ns],
            reached_by: vec![Vec::new(); n],
            sends_to: vec![Vec::new(); ns],
            hears_from: vec![Vec::new(); ns],
        };
        for s in 0..ns {
            let id = self.sensor(s);
            for i in 0..n {
                if self.coverage.get(i, id.node, id.kind) {
                    adj.covers[s].push(i);
                    adj.covered_by[i].push(s);
                }
                if self.comm.get(id.node, id.kind, i) {
                    adj.reaches[s].push(i);
                    adj.reached_by[i].push(s);
                }
            }
        }
        for s in 0..ns {
            for &j in &adj.reaches[s] {
                for k in 1..=self.kinds() {
                    let t = self.sensor_index(SensorId::new(j, k));
                    if t != s {
                        adj.sends_to[s].push(t);
                        adj.hears_from[t].push(s);
                    }
                }
            }
        }
        for list in &mut adj.hears_from {
            list.sort_unstable();
        }
        adj
    }

    pub fn parts(&self) -> &InstanceParts {
        &self.parts
    }

    pub fn into_parts(self) -> InstanceParts {
        self.parts
    }

    /// Number of candidate nodes `N`.
    pub fn nodes(&self) -> usize {
        self.parts.width * self.parts.height
    }

    pub fn width(&self) -> usize {
        self.parts.width
    }

    pub fn height(&self) -> usize {
        self.parts.height
    }

    /// Number of sensor kinds `K` (sinks excluded).
    pub fn kinds(&self) -> usize {
        self.parts.types.len() - 1
    }

    pub fn sensor_count(&self) -> usize {
        self.nodes() * self.kinds()
    }

    pub fn horizon(&self) -> usize {
        self.parts.horizon
    }

    pub fn alpha(&self) -> u32 {
        self.parts.alpha
    }

    pub fn budget(&self) -> f64 {
        self.parts.budget
    }

    pub fn sink_count(&self) -> usize {
        self.parts.sink_count
    }

    pub fn coverage_req(&self, node: usize) -> u32 {
        self.parts.coverage_req[node]
    }

    pub fn metrics(&self) -> Metrics {
        self.parts.metrics
    }

    pub fn sensor_type(&self, kind: usize) -> &SensorType {
        &self.parts.types[kind]
    }

    pub fn types(&self) -> &[SensorType] {
        &self.parts.types
    }

    /// Deployment cost `c[j][k]`; `k = 0` is the sink.
    pub fn cost(&self, node: usize, kind: usize) -> f64 {
        self.parts.costs[node][kind]
    }

    pub fn sink_cost(&self, node: usize) -> f64 {
        self.parts.costs[node][SINK_KIND]
    }

    pub fn coords(&self, node: usize) -> (usize, usize) {
        (node % self.parts.width, node / self.parts.width)
    }

    pub fn coverage(&self) -> &CoverageMatrix {
        &self.coverage
    }

    pub fn comm(&self) -> &CommMatrix {
        &self.comm
    }

    pub fn a(&self, i: usize, j: usize, k: usize) -> bool {
        self.coverage.get(i, j, k)
    }

    pub fn b(&self, i: usize, l: usize, j: usize) -> bool {
        self.comm.get(i, l, j)
    }

    pub fn max_packets(&self) -> u32 {
        self.max_packets
    }

    /// Big-M bounding a sensor's total in- or outflow: `max h * (NK - 1)`.
    pub fn big_m1(&self) -> f64 {
        f64::from(self.max_packets) * (self.sensor_count() as f64 - 1.0).max(0.0)
    }

    /// Big-M bounding a sink's total inflow: `max h * NK`.
    pub fn big_m2(&self) -> f64 {
        f64::from(self.max_packets) * self.sensor_count() as f64
    }

    pub fn sensor_index(&self, id: SensorId) -> usize {
        debug_assert!(id.kind >= 1 && id.kind <= self.kinds() && id.node < self.nodes());
        id.node * self.kinds() + id.kind - 1
    }

    pub fn sensor(&self, index: usize) -> SensorId {
        SensorId::new(index / self.kinds(), index % self.kinds() + 1)
    }

    pub fn sensors(&self) -> impl Iterator<Item = SensorId> + '_ {
        (0..self.sensor_count()).map(|s| self.sensor(s))
    }

    pub fn sensor_cost(&self, s: usize) -> f64 {
        let id = self.sensor(s);
        self.cost(id.node, id.kind)
    }

    pub fn sensor_kind(&self, s: usize) -> &SensorType {
        &self.parts.types[s % self.kinds() + 1]
    }

    /// Nodes sensed by sensor index `s`.
    pub fn covers(&self, s: usize) -> &[usize] {
        &self.adj.covers[s]
    }

    /// Sensor indices that sense node `i`.
    pub fn covered_by(&self, i: usize) -> &[usize] {
        &self.adj.covered_by[i]
    }

    /// Nodes within the communication range of sensor index `s`.
    pub fn reaches(&self, s: usize) -> &[usize] {
        &self.adj.reaches[s]
    }

    /// Sensor indices whose communication range contains node `j`.
    pub fn reached_by(&self, j: usize) -> &[usize] {
        &self.adj.reached_by[j]
    }

    /// Other sensors that `s` can transmit to.
    pub fn sends_to(&self, s: usize) -> &[usize] {
        &self.adj.sends_to[s]
    }

    /// Other sensors that can transmit to `s`.
    pub fn hears_from(&self, s: usize) -> &[usize] {
        &self.adj.hears_from[s]
    }

    /// Whether sensor `s` can transmit to sensor `t`.
    pub fn can_send(&self, s: usize, t: usize) -> bool {
        let id = self.sensor(s);
        s != t && self.comm.get(id.node, id.kind, self.sensor(t).node)
    }

    /// Whether sensor `s` can transmit to a sink placed at `node`.
    pub fn can_reach_node(&self, s: usize, node: usize) -> bool {
        let id = self.sensor(s);
        self.comm.get(id.node, id.kind, node)
    }

    /// Budget for a tier: `(S/N) sum c0 + b1 sum c1 + b2 sum c2`.
    pub fn budget_for(&self, level: BudgetLevel) -> Result<f64, ModelError> {
        compute_budget(&self.parts, level)
    }

    pub fn with_budget(&self, budget: f64) -> Self {
        let mut out = self.clone();
        out.parts.budget = budget;
        out
    }

    pub fn with_sink_count(&self, sink_count: usize) -> Result<Self, ModelError> {
        let mut parts = self.parts.clone();
        parts.sink_count = sink_count;
        Self::new(parts)
    }
}

pub fn compute_budget(parts: &InstanceParts, level: BudgetLevel) -> Result<f64, ModelError> {
    if parts.types.len() != 3 {
        return Err(ModelError::Dimension(
            "budget tiers are defined for exactly two sensor kinds".into(),
        ));
    }
    let n = parts.costs.len();
    if n == 0 {
        return Err(ModelError::EmptyGrid);
    }
    let sum = |k: usize| parts.costs.iter().map(|row| row[k]).sum::<f64>();
    let (b1, b2) = level.shares();
    Ok(parts.sink_count as f64 / n as f64 * sum(0) + b1 * sum(1) + b2 * sum(2))
}

impl TryFrom<InstanceParts> for Instance {
    type Error = ModelError;

    fn try_from(parts: InstanceParts) -> Result<Self, Self::Error> {
        Instance::new(parts)
    }
}
