//! Exhaustive lifetime search for very small instances.
//!
//! Sink sets are enumerated explicitly. For each one only inclusion-maximal
//! affordable deployments are tried, since deploying more never removes a
//! schedule. Periods are then explored depth first over every active set
//! that meets coverage and connectivity and every sink assignment that
//! routes, keeping only children whose remaining energy is not dominated by
//! a sibling's.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{
    compute_budget, Assignment, BudgetLevel, EnergyLedger, Instance, InstanceParts, Metrics, PeriodPlan, SensorId,
    SensorType, Solution, PACKETS_PER_PERIOD, SINK_KIND,
};
use crate::routing::{solve_rp, PeriodState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_nodes: usize,
    pub max_kinds: usize,
    pub max_horizon: usize,
    pub max_sinks: usize,
    /// Routing subproblems solved before giving up.
    pub node_budget: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            max_nodes: 6,
            max_kinds: 2,
            max_horizon: 3,
            max_sinks: 2,
            node_budget: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("search budget of {0} routing solves exhausted")]
    NodeBudget(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub lifetime: usize,
    /// A schedule reaching `lifetime`.
    pub solution: Solution,
    /// Routing subproblems solved.
    pub explored: usize,
}

fn check_caps(inst: &Instance, caps: &OracleCaps) -> Result<(), OracleError> {
    let limits = [
        ("N", inst.nodes(), caps.max_nodes),
        ("K", inst.kinds(), caps.max_kinds),
        ("T", inst.horizon(), caps.max_horizon),
        ("S", inst.sink_count(), caps.max_sinks),
    ];
    for (what, value, cap) in limits {
        if value > cap {
            return Err(OracleError::CapExceeded { what, value, cap });
        }
    }
    Ok(())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Affordable sensor subsets to which no further sensor can be added.
fn maximal_deployments(inst: &Instance, money: f64) -> Vec<Vec<usize>> {
    let ns = inst.sensor_count();
    let cost: Vec<f64> = (0..ns).map(|s| inst.sensor_cost(s)).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << ns) {
        let spent: f64 = (0..ns).filter(|s| mask >> s & 1 == 1).map(|s| cost[s]).sum();
        if spent > money + 1e-9 {
            continue;
        }
        let maximal = (0..ns).all(|s| mask >> s & 1 == 1 || spent + cost[s] > money + 1e-9);
        if maximal {
            out.push((0..ns).filter(|s| mask >> s & 1 == 1).collect());
        }
    }
    out
}

struct Search<'a> {
    inst: &'a Instance,
    sinks: Vec<usize>,
    deployed: Vec<usize>,
    solves: usize,
    budget: usize,
}

impl Search<'_> {
    fn coverage_and_alpha(&self, active: &[usize]) -> bool {
        let inst = self.inst;
        let covered = (0..inst.nodes()).all(|i| {
            let c = active.iter().filter(|&&s| inst.covers(s).contains(&i)).count();
            c as u32 >= inst.coverage_req(i)
        });
        covered
            && active.iter().all(|&s| {
                let nb = active.iter().filter(|&&q| inst.can_send(s, q)).count();
                nb as u32 >= inst.alpha()
            })
    }

    /// Sinks each active sensor could possibly route to through active sensors.
    fn sink_options(&self, active: &[usize]) -> Vec<Vec<usize>> {
        let inst = self.inst;
        let mut options = vec![Vec::new(); active.len()];
        for &j in &self.sinks {
            let mut reach: Vec<bool> = active.iter().map(|&s| inst.can_reach_node(s, j)).collect();
            let mut changed = true;
            while changed {
                changed = false;
                for a in 0..active.len() {
                    if !reach[a] && (0..active.len()).any(|b| reach[b] && inst.can_send(active[a], active[b])) {
                        reach[a] = true;
                        changed = true;
                    }
                }
            }
            for a in 0..active.len() {
                if reach[a] {
                    options[a].push(j);
                }
            }
        }
        options
    }

    /// Every routable `(plan, next energy row)` for period `t`, with dominated
    /// energy rows removed.
    fn children(&mut self, t: usize, remaining: &[f64]) -> Result<Vec<(PeriodPlan, Vec<f64>)>, OracleError> {
        let inst = self.inst;
        let usable: Vec<usize> = self
            .deployed
            .iter()
            .copied()
            .filter(|&s| remaining[s] >= inst.sensor_kind(s).sense_energy)
            .collect();
        let mut found: Vec<(PeriodPlan, Vec<f64>)> = Vec::new();
        for mask in 0u32..(1 << usable.len()) {
            let active: Vec<usize> = (0..usable.len()).filter(|b| mask >> b & 1 == 1).map(|b| usable[b]).collect();
            if !self.coverage_and_alpha(&active) {
                continue;
            }
            let options = self.sink_options(&active);
            if options.iter().any(|o| o.is_empty()) {
                continue;
            }
            let ids: Vec<SensorId> = active.iter().map(|&s| inst.sensor(s)).collect();
            let mut pick = vec![0usize; active.len()];
            loop {
                let assignments: Vec<Assignment> = (0..active.len())
                    .map(|a| Assignment {
                        sink: options[a][pick[a]],
                        sensor: ids[a],
                    })
                    .collect();
                self.solves += 1;
                if self.solves > self.budget {
                    return Err(OracleError::NodeBudget(self.budget));
                }
                let state = PeriodState {
                    period: t,
                    active: &ids,
                    assignments: &assignments,
                    sinks: &self.sinks,
                    remaining,
                };
                if let Ok(result) = solve_rp(inst, &state) {
                    let next: Vec<f64> = remaining
                        .iter()
                        .zip(&result.consumption)
                        .map(|(e, c)| (e - c).max(0.0))
                        .collect();
                    let plan = PeriodPlan {
                        active: ids.clone(),
                        assignments,
                        sensor_flows: result.sensor_flows,
                        sink_flows: result.sink_flows,
                    };
                    found.push((plan, next));
                }
                // next assignment in mixed radix
                let mut a = 0;
                while a < pick.len() {
                    pick[a] += 1;
                    if pick[a] < options[a].len() {
                        break;
                    }
                    pick[a] = 0;
                    a += 1;
                }
                if a == pick.len() {
                    break;
                }
            }
        }
        let dominated = |i: usize| {
            found.iter().enumerate().any(|(j, (_, other))| {
                j != i
                    && other.iter().zip(&found[i].1).all(|(o, m)| o >= m)
                    && (other != &found[i].1 || j < i)
            })
        };
        let keep: Vec<bool> = (0..found.len()).map(|i| !dominated(i)).collect();
        let mut kept: Vec<(PeriodPlan, Vec<f64>)> =
            found.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
        kept.sort_by(|a, b| {
            let sa: f64 = a.1.iter().filter(|e| e.is_finite()).sum();
            let sb: f64 = b.1.iter().filter(|e| e.is_finite()).sum();
            sb.total_cmp(&sa)
        });
        Ok(kept)
    }

    /// Longest schedule from period `t` on, stopping early at the horizon.
    fn deepest(&mut self, t: usize, remaining: &[f64], floor: usize) -> Result<Vec<PeriodPlan>, OracleError> {
        let horizon = self.inst.horizon();
        if t > horizon || t - 1 + (horizon - t + 1) <= floor {
            return Ok(Vec::new());
        }
        let mut best: Vec<PeriodPlan> = Vec::new();
        for (plan, next) in self.children(t, remaining)? {
            let need = floor.max(t - 1 + best.len());
            let mut tail = self.deepest(t + 1, &next, need)?;
            if 1 + tail.len() > best.len() {
                tail.insert(0, plan);
                best = tail;
            }
            if t - 1 + best.len() == horizon {
                break;
            }
        }
        Ok(best)
    }
}

/// Largest lifetime any feasible solution reaches, by enumeration.
pub fn exhaustive_oracle(instance: &Instance, caps: &OracleCaps) -> Result<OracleResult, OracleError> {
    check_caps(instance, caps)?;
    let inst = instance;
    let ns = inst.sensor_count();
    if ns > 16 {
        return Err(OracleError::CapExceeded {
            what: "N*K",
            value: ns,
            cap: 16,
        });
    }
    let mut best: Option<(usize, Vec<usize>, Vec<usize>, Vec<PeriodPlan>)> = None;
    let mut solves = 0;
    'sinks: for sinks in combinations(inst.nodes(), inst.sink_count()) {
        let sink_cost: f64 = sinks.iter().map(|&j| inst.sink_cost(j)).sum();
        if sink_cost > inst.budget() + 1e-9 {
            continue;
        }
        for deployed in maximal_deployments(inst, inst.budget() - sink_cost) {
            let mut search = Search {
                inst,
                sinks: sinks.clone(),
                deployed: deployed.clone(),
                solves,
                budget: caps.node_budget,
            };
            let floor = best.as_ref().map_or(0, |b| b.0);
            let ledger = EnergyLedger::new(inst);
            let plans = search.deepest(1, ledger.row(1), floor)?;
            solves = search.solves;
            if best.is_none() || plans.len() > floor {
                best = Some((plans.len(), sinks.clone(), deployed, plans));
            }
            if best.as_ref().is_some_and(|b| b.0 == inst.horizon()) {
                break 'sinks;
            }
        }
    }
    let mut solution = Solution::empty(inst);
    let lifetime = match best {
        Some((lifetime, sinks, deployed, plans)) => {
            solution.deployed = sinks
                .iter()
                .map(|&j| SensorId::new(j, SINK_KIND))
                .chain(deployed.iter().map(|&s| inst.sensor(s)))
                .collect();
            for (t, plan) in plans.into_iter().enumerate() {
                solution.periods[t] = plan;
            }
            lifetime
        }
        // no affordable sink set: only the all-zero solution remains
        None => 0,
    };
    solution.set_lifetime(lifetime);
    solution.normalize();
    Ok(OracleResult {
        lifetime,
        solution,
        explored: solves,
    })
}

/// A random instance inside the default caps: at most six nodes, two
/// sensor kinds, three periods and batteries lasting one or two periods,
/// so that lifetimes are decided by energy and budget.
pub fn tiny_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (width, height) = [(2, 2), (3, 1), (2, 3), (3, 2), (4, 1)][rng.random_range(0..5)];
    let n = width * height;
    let round = |x: f64| (x * 100.0).round() / 100.0;
    let battery = |rng: &mut ChaCha8Rng| 760.0 * f64::from(rng.random_range(1..=2u8));
    let sensor = |kind: usize, sensing: f64, comm: f64, transmit: f64, rng: &mut ChaCha8Rng| SensorType {
        kind,
        cost_range: (1.0, 10.0),
        packets: PACKETS_PER_PERIOD,
        sensing_range: sensing,
        comm_range: comm,
        sense_energy: 744.0,
        receive_energy: 0.01,
        transmit_energy: transmit,
        battery: Some(battery(rng)),
    };
    let types = vec![
        SensorType::sink((10.0, 15.0)),
        sensor(1, 1.0, 1.5, 0.013, &mut rng),
        sensor(2, 2.0, 3.0, 0.018, &mut rng),
    ];
    let costs: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let c1 = round(rng.random_range(1.0..10.0));
            vec![round(rng.random_range(10.0..15.0)), c1, round(c1 + rng.random_range(0.0..5.0))]
        })
        .collect();
    let sink_count = rng.random_range(1..=2);
    let level = BudgetLevel::ALL[rng.random_range(0..3)];
    let mut parts = InstanceParts {
        width,
        height,
        metrics: Metrics::default(),
        types,
        costs,
        coverage_req: (0..n).map(|_| rng.random_range(1..=2)).collect(),
        alpha: 1,
        horizon: 3,
        budget: 0.0,
        sink_count,
    };
    parts.budget = compute_budget(&parts, level).expect("known level");
    Instance::new(parts).expect("tiny instance is valid")
}
