//! Mutable deployment state shared by both heuristics, plus the per-period
//! repair steps: coverage and budget, connectivity and assignment,
//! deactivation of unnecessary sensors and the energy screen.

use std::collections::VecDeque;

use super::scores::{best, GreedyScores, ScoreInput};
use super::trace::{label, Reason, TraceEvent, TraceSink};
use crate::model::{Assignment, Instance, SensorId};

/// Why a run stopped before the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StopCause {
    Coverage,
    Budget,
    Connectivity,
    Routing,
}

impl StopCause {
    pub fn as_str(self) -> &'static str {
        match self {
            StopCause::Coverage => "coverage",
            StopCause::Budget => "budget",
            StopCause::Connectivity => "connectivity",
            StopCause::Routing => "routing",
        }
    }
}

/// Working copy of one period's activity.
#[derive(Debug, Clone)]
pub(crate) struct Period {
    pub t: usize,
    pub active: Vec<bool>,
    pub count: usize,
    /// Active sensors covering each node.
    pub cover: Vec<u32>,
    /// Sensors screened out for lack of energy in this period.
    pub banned: Vec<bool>,
}

impl Period {
    pub fn new(inst: &Instance, t: usize) -> Self {
        Self {
            t,
            active: vec![false; inst.sensor_count()],
            count: 0,
            cover: vec![0; inst.nodes()],
            banned: vec![false; inst.sensor_count()],
        }
    }

    pub fn active_list(&self) -> Vec<usize> {
        (0..self.active.len()).filter(|&s| self.active[s]).collect()
    }
}

/// Sink labels from breadth-first search over active sensors.
#[derive(Debug, Clone)]
pub(crate) struct Labels {
    pub sink: Vec<Option<usize>>,
}

impl Labels {
    pub fn labeled(&self) -> Vec<bool> {
        self.sink.iter().map(Option::is_some).collect()
    }
}

pub(crate) struct Builder<'a, 't> {
    pub inst: &'a Instance,
    pub sinks: Vec<usize>,
    pub deployed: Vec<bool>,
    /// Number of planned periods in which each sensor is active.
    pub uses: Vec<u32>,
    /// Part of `uses` that falls after the period being worked on.
    pub pending: Vec<u32>,
    pub spent: f64,
    /// Budget left for sensors once the sinks are paid.
    pub allowance: f64,
    pub trace: &'t mut dyn TraceSink,
}

impl<'a, 't> Builder<'a, 't> {
    pub fn new(inst: &'a Instance, sinks: &[usize], trace: &'t mut dyn TraceSink) -> Self {
        let mut sinks = sinks.to_vec();
        sinks.sort_unstable();
        sinks.dedup();
        let sink_cost: f64 = sinks.iter().map(|&j| inst.sink_cost(j)).sum();
        Self {
            inst,
            allowance: inst.budget() - sink_cost,
            sinks,
            deployed: vec![false; inst.sensor_count()],
            uses: vec![0; inst.sensor_count()],
            pending: vec![0; inst.sensor_count()],
            spent: 0.0,
            trace,
        }
    }

    pub fn id(&self, s: usize) -> SensorId {
        self.inst.sensor(s)
    }

    fn left(&self) -> f64 {
        self.allowance - self.spent
    }

    pub fn budget_ok(&self) -> bool {
        self.left() >= -1e-9
    }

    /// Energy a sensor must hold to be active alongside `count` active sensors:
    /// `e^s + zeta (e^r + e^c)`.
    pub fn threshold(&self, s: usize, count: usize) -> f64 {
        let ty = self.inst.sensor_kind(s);
        let zeta = count as f64 * f64::from(self.inst.max_packets());
        ty.sense_energy + zeta * (ty.receive_energy + ty.transmit_energy)
    }

    pub fn activate(&mut self, p: &mut Period, s: usize) {
        debug_assert!(!p.active[s] && self.deployed[s]);
        p.active[s] = true;
        p.count += 1;
        self.uses[s] += 1;
        for &i in self.inst.covers(s) {
            p.cover[i] += 1;
        }
    }

    /// Starts a period with the previous period's active sensors.
    pub fn carry(&mut self, p: &mut Period, previous: &[usize]) {
        for &s in previous {
            if self.deployed[s] && !p.active[s] {
                self.activate(p, s);
            }
        }
    }

    pub fn deactivate(&mut self, p: &mut Period, s: usize) {
        debug_assert!(p.active[s]);
        p.active[s] = false;
        p.count -= 1;
        self.uses[s] -= 1;
        for &i in self.inst.covers(s) {
            p.cover[i] -= 1;
        }
    }

    fn deploy(&mut self, s: usize) {
        self.deployed[s] = true;
        self.spent += self.inst.sensor_cost(s);
    }

    fn undeploy(&mut self, t: usize, s: usize, reason: Reason) {
        self.deployed[s] = false;
        let refund = self.inst.sensor_cost(s);
        self.spent -= refund;
        self.trace.record(TraceEvent::Delete {
            t,
            sensor: label(self.id(s)),
            reason,
            refund,
        });
    }

    pub fn covered(&self, p: &Period) -> bool {
        (0..self.inst.nodes()).all(|i| p.cover[i] >= self.inst.coverage_req(i))
    }

    /// Deployed sensors on standby in every period up to the current one,
    /// most expensive first.
    fn idle_by_cost(&self) -> Vec<usize> {
        let mut idle: Vec<usize> = (0..self.deployed.len())
            .filter(|&s| self.deployed[s] && self.uses[s] == self.pending[s])
            .collect();
        idle.sort_by(|&a, &b| {
            self.inst
                .sensor_cost(b)
                .total_cmp(&self.inst.sensor_cost(a))
                .then(a.cmp(&b))
        });
        idle
    }

    /// Deletes idle sensors, most expensive first, until `need` money is free.
    fn recover_budget(&mut self, t: usize, need: f64) -> bool {
        for s in self.idle_by_cost() {
            if self.left() >= need - 1e-9 {
                break;
            }
            self.undeploy(t, s, Reason::Budget);
        }
        self.left() >= need - 1e-9
    }

    /// First-period fallback: delete active sensors whose removal keeps coverage.
    fn trim_active(&mut self, p: &mut Period) {
        let mut order = p.active_list();
        order.sort_by(|&a, &b| {
            self.inst
                .sensor_cost(b)
                .total_cmp(&self.inst.sensor_cost(a))
                .then(a.cmp(&b))
        });
        for s in order {
            if self.budget_ok() {
                break;
            }
            let spare = self
                .inst
                .covers(s)
                .iter()
                .all(|&i| p.cover[i] > self.inst.coverage_req(i));
            if spare {
                self.deactivate(p, s);
                self.undeploy(p.t, s, Reason::Budget);
            }
        }
    }

    fn scores(&self, p: &Period, energy: &[f64], labels: Option<&[bool]>) -> GreedyScores {
        GreedyScores::compute(
            self.inst,
            ScoreInput {
                active: &p.active,
                deployed: &self.deployed,
                remaining: energy,
                labeled: labels,
            },
        )
    }

    fn standby_ok(&self, p: &Period, energy: &[f64], s: usize) -> bool {
        self.deployed[s] && !p.active[s] && !p.banned[s] && energy[s] >= self.threshold(s, p.count + 1)
    }

    fn fresh_ok(&self, p: &Period, energy: &[f64], s: usize) -> bool {
        !self.deployed[s] && !p.banned[s] && energy[s] >= self.threshold(s, p.count + 1)
    }

    /// Buys sensor `s` after freeing budget if needed. `false` means the
    /// period cannot be completed.
    fn buy(&mut self, p: &mut Period, s: usize, reason: Reason, score: f64) -> bool {
        let cost = self.inst.sensor_cost(s);
        if self.left() < cost - 1e-9 && !self.recover_budget(p.t, cost) {
            return false;
        }
        self.deploy(s);
        self.activate(p, s);
        self.trace.record(TraceEvent::Deploy {
            t: p.t,
            sensor: label(self.id(s)),
            reason,
            score,
            cost,
        });
        true
    }

    /// Coverage and budget repair for one period.
    pub fn repair_coverage(&mut self, p: &mut Period, energy: &[f64]) -> Result<(), StopCause> {
        if self.covered(p) {
            if !self.budget_ok() {
                self.recover_budget(p.t, 0.0);
                if !self.budget_ok() && p.t == 1 {
                    self.trim_active(p);
                }
                if !self.budget_ok() {
                    return Err(StopCause::Budget);
                }
            }
            return Ok(());
        }
        while !self.covered(p) {
            let sc = self.scores(p, energy, None);
            let Some((s, v)) = best(self.inst, &sc.cep, |s| self.standby_ok(p, energy, s)) else {
                break;
            };
            self.activate(p, s);
            self.trace.record(TraceEvent::Activate {
                t: p.t,
                sensor: label(self.id(s)),
                reason: Reason::Cep,
                score: v,
            });
        }
        while !self.covered(p) {
            let sc = self.scores(p, energy, None);
            let Some((s, v)) = best(self.inst, &sc.ccr, |s| self.fresh_ok(p, energy, s)) else {
                return Err(StopCause::Coverage);
            };
            if !self.buy(p, s, Reason::Ccr, v) {
                return Err(StopCause::Budget);
            }
        }
        Ok(())
    }

    /// Breadth-first sink labeling over active sensors. Sinks are seeded in
    /// ascending node order, discoveries appended in ascending sensor order.
    pub fn bfs(&self, p: &Period) -> Labels {
        let ns = self.inst.sensor_count();
        let mut sink = vec![None; ns];
        let active = p.active_list();
        let mut queue = VecDeque::new();
        for &j in &self.sinks {
            for &s in &active {
                if sink[s].is_none() && self.inst.can_reach_node(s, j) {
                    sink[s] = Some(j);
                    queue.push_back(s);
                }
            }
        }
        while let Some(q) = queue.pop_front() {
            for &s in &active {
                if sink[s].is_none() && self.inst.can_send(s, q) {
                    sink[s] = sink[q];
                    queue.push_back(s);
                }
            }
        }
        Labels { sink }
    }

    fn connected(&self, p: &Period, labels: &Labels) -> bool {
        let alpha = self.inst.alpha() as usize;
        p.active_list().into_iter().all(|s| {
            labels.sink[s].is_some() && self.inst.sends_to(s).iter().filter(|&&q| p.active[q]).count() >= alpha
        })
    }

    /// Connectivity and sink assignment repair for one period.
    pub fn repair_connectivity(&mut self, p: &mut Period, energy: &[f64]) -> Result<Labels, StopCause> {
        loop {
            let labels = self.bfs(p);
            if self.connected(p, &labels) {
                return Ok(labels);
            }
            let flags = labels.labeled();
            let sc = self.scores(p, energy, Some(&flags));
            if let Some((s, v)) = best(self.inst, &sc.coep, |s| self.standby_ok(p, energy, s)) {
                self.activate(p, s);
                self.trace.record(TraceEvent::Activate {
                    t: p.t,
                    sensor: label(self.id(s)),
                    reason: Reason::Coep,
                    score: v,
                });
                continue;
            }
            let Some((s, v)) = best(self.inst, &sc.cocr, |s| self.fresh_ok(p, energy, s)) else {
                return Err(StopCause::Connectivity);
            };
            if !self.buy(p, s, Reason::Cocr, v) {
                return Err(StopCause::Budget);
            }
        }
    }

    /// Deactivates active sensors, most expensive first, whenever coverage,
    /// alpha-connectivity and sink reachability survive without them.
    pub fn polish(&mut self, p: &mut Period) -> Labels {
        let mut order = p.active_list();
        order.sort_by(|&a, &b| {
            self.inst
                .sensor_cost(b)
                .total_cmp(&self.inst.sensor_cost(a))
                .then(a.cmp(&b))
        });
        let alpha = self.inst.alpha() as usize;
        for s in order {
            let spare = self
                .inst
                .covers(s)
                .iter()
                .all(|&i| p.cover[i] > self.inst.coverage_req(i));
            if !spare {
                continue;
            }
            let degree_ok = self.inst.hears_from(s).iter().all(|&r| {
                !p.active[r] || self.inst.sends_to(r).iter().filter(|&&q| p.active[q] && q != s).count() >= alpha
            });
            if !degree_ok {
                continue;
            }
            self.deactivate(p, s);
            let labels = self.bfs(p);
            if p.active_list().iter().all(|&r| labels.sink[r].is_some()) {
                self.trace.record(TraceEvent::Deactivate {
                    t: p.t,
                    sensor: label(self.id(s)),
                    reason: Reason::Polish,
                });
            } else {
                self.activate(p, s);
            }
        }
        self.bfs(p)
    }

    /// Deactivates and bans sensors that cannot afford the period with the
    /// current throughput bound. Returns whether anything changed.
    pub fn screen(&mut self, p: &mut Period, energy: &[f64]) -> bool {
        let mut changed = false;
        for s in 0..p.active.len() {
            if p.active[s] && energy[s] < self.threshold(s, p.count) {
                self.deactivate(p, s);
                p.banned[s] = true;
                changed = true;
                self.trace.record(TraceEvent::Deactivate {
                    t: p.t,
                    sensor: label(self.id(s)),
                    reason: Reason::Energy,
                });
            }
        }
        changed
    }

    pub fn assignments(&self, p: &Period, labels: &Labels) -> Vec<Assignment> {
        p.active_list()
            .into_iter()
            .map(|s| Assignment {
                sink: labels.sink[s].expect("active sensors are labeled"),
                sensor: self.id(s),
            })
            .collect()
    }

    /// Removes sensors that no kept period uses.
    pub fn drop_unused(&mut self, t: usize) {
        for s in 0..self.deployed.len() {
            if self.deployed[s] && self.uses[s] == 0 {
                self.undeploy(t, s, Reason::Cleanup);
            }
        }
    }
}
