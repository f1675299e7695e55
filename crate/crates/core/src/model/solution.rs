use super::types::{SensorId, SINK_KIND};
use super::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    /// Node hosting the sink.
    pub sink: usize,
    pub sensor: SensorId,
}

/// `y`: packets sent from one sensor to another in a period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorFlow {
    pub from: SensorId,
    pub to: SensorId,
    pub amount: f64,
}

/// `g`: packets delivered from a sensor to the sink at `sink`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinkFlow {
    pub from: SensorId,
    pub sink: usize,
    pub amount: f64,
}

/// Decisions for one period: `z`, `u`, `y` and `g` slices, stored sparsely.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeriodPlan {
    pub active: Vec<SensorId>,
    pub assignments: Vec<Assignment>,
    pub sensor_flows: Vec<SensorFlow>,
    pub sink_flows: Vec<SinkFlow>,
}

impl PeriodPlan {
    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
            && self.assignments.is_empty()
            && self.sensor_flows.is_empty()
            && self.sink_flows.is_empty()
    }

    pub fn is_active(&self, id: SensorId) -> bool {
        self.active.contains(&id)
    }

    pub fn sink_of(&self, id: SensorId) -> Option<usize> {
        self.assignments.iter().find(|a| a.sensor == id).map(|a| a.sink)
    }

    /// Sorts every list so that equal plans compare equal.
    pub fn normalize(&mut self) {
        self.active.sort_unstable();
        self.active.dedup();
        self.assignments.sort_unstable();
        self.sensor_flows
            .sort_by(|a, b| (a.from, a.to).cmp(&(b.from, b.to)));
        self.sink_flows
            .sort_by(|a, b| (a.from, a.sink).cmp(&(b.from, b.sink)));
    }
}

/// A full decision vector `(L, n, x, z, u, y, g)`. Dimensions are carried
/// along so that mismatches against an instance can be reported.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub nodes: usize,
    pub kinds: usize,
    pub horizon: usize,
    pub lifetime: usize,
    /// `n_t` for `t = 1..=T`.
    pub period_on: Vec<bool>,
    /// Every `(j, k)` with `x_jk = 1`, sinks included as kind 0.
    pub deployed: Vec<SensorId>,
    /// One plan per period `t = 1..=T`.
    pub periods: Vec<PeriodPlan>,
}

impl Solution {
    /// The all-zero solution (`L = 0`).
    pub fn empty(instance: &Instance) -> Self {
        Self::zeroed(instance.nodes(), instance.kinds(), instance.horizon())
    }

    pub fn zeroed(nodes: usize, kinds: usize, horizon: usize) -> Self {
        Self {
            nodes,
            kinds,
            horizon,
            lifetime: 0,
            period_on: vec![false; horizon],
            deployed: Vec::new(),
            periods: vec![PeriodPlan::default(); horizon],
        }
    }

    pub fn sinks(&self) -> Vec<usize> {
        self.deployed
            .iter()
            .filter(|d| d.kind == SINK_KIND)
            .map(|d| d.node)
            .collect()
    }

    pub fn is_deployed(&self, id: SensorId) -> bool {
        self.deployed.contains(&id)
    }

    /// 1-based period access.
    pub fn period(&self, t: usize) -> &PeriodPlan {
        &self.periods[t - 1]
    }

    pub fn period_mut(&mut self, t: usize) -> &mut PeriodPlan {
        &mut self.periods[t - 1]
    }

    /// Sets `L` and the matching `n` vector.
    pub fn set_lifetime(&mut self, lifetime: usize) {
        self.lifetime = lifetime;
        for (t, on) in self.period_on.iter_mut().enumerate() {
            *on = t < lifetime;
        }
    }

    /// Drops every decision after period `lifetime`.
    pub fn truncate(&mut self, lifetime: usize) {
        self.set_lifetime(lifetime);
        for plan in self.periods.iter_mut().skip(lifetime) {
            *plan = PeriodPlan::default();
        }
    }

    pub fn normalize(&mut self) {
        self.deployed.sort_unstable();
        self.deployed.dedup();
        for p in &mut self.periods {
            p.normalize();
        }
    }

    /// Total deployment cost of sinks and sensors.
    pub fn deployment_cost(&self, instance: &Instance) -> f64 {
        self.deployed
            .iter()
            .filter(|d| d.node < instance.nodes() && d.kind <= instance.kinds())
            .map(|d| instance.cost(d.node, d.kind))
            .sum()
    }
}
