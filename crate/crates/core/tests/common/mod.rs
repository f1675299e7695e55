#![allow(dead_code)]

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsn_core::model::{build_instance, Assignment, BudgetLevel, EnergyLevel, GeneratorConfig, SensorId};
use wsn_core::routing::PeriodState;
use wsn_core::Instance;

pub fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// A random routing subproblem with at most six active sensors.
pub struct RandomPeriod {
    pub instance: Instance,
    pub active: Vec<SensorId>,
    pub assignments: Vec<Assignment>,
    pub sinks: Vec<usize>,
    pub remaining: Vec<f64>,
}

impl RandomPeriod {
    pub fn state(&self) -> PeriodState<'_> {
        PeriodState {
            period: 1,
            active: &self.active,
            assignments: &self.assignments,
            sinks: &self.sinks,
            remaining: &self.remaining,
        }
    }
}

pub fn random_period(seed: u64) -> RandomPeriod {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = [9, 16][rng.random_range(0..2)];
    let cfg = GeneratorConfig {
        nodes,
        sink_count: rng.random_range(1..=2),
        budget_level: BudgetLevel::Low,
        energy_level: EnergyLevel::ALL[rng.random_range(0..3)],
        horizon: 1,
        ..GeneratorConfig::default()
    };
    let inst = build_instance(&cfg, seed).unwrap();
    let sinks = rand::seq::index::sample(&mut rng, nodes, cfg.sink_count).into_vec();
    let count = rng.random_range(1..=6);
    let picked = rand::seq::index::sample(&mut rng, inst.sensor_count(), count).into_vec();
    let active: Vec<SensorId> = picked.iter().map(|&s| inst.sensor(s)).collect();
    let assignments = active
        .iter()
        .map(|&sensor| Assignment {
            sink: sinks[rng.random_range(0..sinks.len())],
            sensor,
        })
        .collect();
    let mut remaining: Vec<f64> = (0..inst.sensor_count())
        .map(|s| inst.sensor_kind(s).battery_or_inf())
        .collect();
    for &s in &picked {
        let ty = inst.sensor_kind(s);
        let base = ty.sense_energy + ty.transmit_energy * f64::from(ty.packets);
        remaining[s] = match rng.random_range(0..4) {
            // room to relay exactly m packets
            0 => base + f64::from(rng.random_range(0..60u32)) * (ty.receive_energy + ty.transmit_energy),
            1 => base - 1.0,
            _ => remaining[s],
        };
    }
    RandomPeriod {
        instance: inst,
        active,
        assignments,
        sinks,
        remaining,
    }
}

/// Dense LP of the routing subproblem: flows only between sensors sharing a
/// sink, balance, sink arcs by range, inflow bound `M1` and remaining energy.
/// `None` when infeasible.
pub fn lp_routing_optimum(p: &RandomPeriod) -> Option<f64> {
    let inst = &p.instance;
    let idx: Vec<usize> = p.active.iter().map(|&a| inst.sensor_index(a)).collect();
    let sink_of = |a: usize| p.assignments.iter().find(|x| x.sensor == p.active[a]).unwrap().sink;
    let m = idx.len();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let mut y = vec![vec![None; m]; m];
    let mut g = vec![None; m];
    for a in 0..m {
        let ta = inst.sensor_kind(idx[a]);
        for b in 0..m {
            if a != b && sink_of(a) == sink_of(b) && inst.can_send(idx[a], idx[b]) {
                let tb = inst.sensor_kind(idx[b]);
                y[a][b] = Some(lp.add_var(ta.transmit_energy + tb.receive_energy, (0.0, f64::INFINITY)));
            }
        }
        if inst.can_reach_node(idx[a], sink_of(a)) {
            g[a] = Some(lp.add_var(ta.transmit_energy, (0.0, f64::INFINITY)));
        }
    }
    let mut constant = 0.0;
    for a in 0..m {
        let ty = inst.sensor_kind(idx[a]);
        constant += ty.sense_energy;
        let mut balance = Vec::new();
        let mut energy = Vec::new();
        let mut inflow = Vec::new();
        for b in 0..m {
            if let Some(v) = y[b][a] {
                balance.push((v, 1.0));
                energy.push((v, ty.receive_energy));
                inflow.push((v, 1.0));
            }
            if let Some(v) = y[a][b] {
                balance.push((v, -1.0));
                energy.push((v, ty.transmit_energy));
            }
        }
        if let Some(v) = g[a] {
            balance.push((v, -1.0));
            energy.push((v, ty.transmit_energy));
        }
        lp.add_constraint(balance.as_slice(), ComparisonOp::Eq, -f64::from(ty.packets));
        lp.add_constraint(energy.as_slice(), ComparisonOp::Le, p.remaining[idx[a]] - ty.sense_energy);
        if !inflow.is_empty() {
            lp.add_constraint(inflow.as_slice(), ComparisonOp::Le, inst.big_m1());
        }
    }
    lp.solve().ok().map(|s| s.objective() + constant)
}
