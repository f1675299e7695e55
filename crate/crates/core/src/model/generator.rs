//! Random instances following the experimental parameter table: square grids,
//! two sensor kinds, uniform costs and Mica2-derived energy figures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::instance::{compute_budget, Instance, InstanceParts};
use super::types::{BudgetLevel, EnergyLevel, Metrics, SensorType, SINK_KIND};
use super::ModelError;

pub const DEFAULT_HORIZON: usize = 400;
pub const DEFAULT_ALPHA: u32 = 1;
pub const DEFAULT_COVERAGE: u32 = 2;
pub const PACKETS_PER_PERIOD: u32 = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Node count; must be a perfect square.
    pub nodes: usize,
    pub sink_count: usize,
    pub budget_level: BudgetLevel,
    pub energy_level: EnergyLevel,
    pub horizon: usize,
    pub alpha: u32,
    pub coverage: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            nodes: 16,
            sink_count: 2,
            budget_level: BudgetLevel::Low,
            energy_level: EnergyLevel::Low,
            horizon: DEFAULT_HORIZON,
            alpha: DEFAULT_ALPHA,
            coverage: DEFAULT_COVERAGE,
        }
    }
}

impl GeneratorConfig {
    pub fn with_side(side: usize) -> Self {
        Self {
            nodes: side * side,
            ..Self::default()
        }
    }

    pub fn side(&self) -> Result<usize, ModelError> {
        let side = (self.nodes as f64).sqrt().round() as usize;
        if side * side != self.nodes || side == 0 {
            return Err(ModelError::NonSquare(self.nodes));
        }
        Ok(side)
    }
}

/// Sensor catalog for the two-kind experiments at a given battery tier.
pub fn standard_types(energy: EnergyLevel) -> Vec<SensorType> {
    let (e1, e2) = energy.batteries();
    vec![
        SensorType::sink((10.0, 15.0)),
        SensorType {
            kind: 1,
            cost_range: (1.0, 10.0),
            packets: PACKETS_PER_PERIOD,
            sensing_range: 1.0,
            comm_range: 1.5,
            sense_energy: 744.0,
            receive_energy: 0.01,
            transmit_energy: 0.013,
            battery: Some(e1),
        },
        SensorType {
            kind: 2,
            // shifted per node: (c_j1, c_j1 + 5)
            cost_range: (0.0, 5.0),
            packets: PACKETS_PER_PERIOD,
            sensing_range: 2.0,
            comm_range: 3.0,
            sense_energy: 744.0,
            receive_energy: 0.01,
            transmit_energy: 0.018,
            battery: Some(e2),
        },
    ]
}

pub(crate) fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn draw(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    round2(rng.random_range(lo..hi))
}

/// Builds a reproducible random instance; the same seed always yields the
/// same costs and therefore byte-identical serialization.
pub fn build_instance(config: &GeneratorConfig, seed: u64) -> Result<Instance, ModelError> {
    let side = config.side()?;
    let n = config.nodes;
    if config.sink_count > n {
        return Err(ModelError::Dimension(format!(
            "{} sinks do not fit on {n} nodes",
            config.sink_count
        )));
    }
    let types = standard_types(config.energy_level);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s_lo, s_hi) = types[SINK_KIND].cost_range;
    let (c1_lo, c1_hi) = types[1].cost_range;
    let (d_lo, d_hi) = types[2].cost_range;
    let costs = (0..n)
        .map(|_| {
            let c0 = draw(&mut rng, s_lo, s_hi);
            let c1 = draw(&mut rng, c1_lo, c1_hi);
            let c2 = round2(c1 + rng.random_range(d_lo..d_hi));
            vec![c0, c1, c2]
        })
        .collect();
    let mut parts = InstanceParts {
        width: side,
        height: side,
        metrics: Metrics::default(),
        types,
        costs,
        coverage_req: vec![config.coverage; n],
        alpha: config.alpha,
        horizon: config.horizon,
        budget: 0.0,
        sink_count: config.sink_count,
    };
    parts.budget = compute_budget(&parts, config.budget_level)?;
    Instance::new(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_parameter_table() {
        let inst = build_instance(&GeneratorConfig::with_side(4), 1).unwrap();
        assert_eq!(inst.nodes(), 16);
        assert_eq!(inst.kinds(), 2);
        assert_eq!(inst.horizon(), 400);
        assert_eq!(inst.alpha(), 1);
        assert!((0..16).all(|i| inst.coverage_req(i) == 2));
    }

    #[test]
    fn costs_within_ranges() {
        let inst = build_instance(&GeneratorConfig::with_side(7), 99).unwrap();
        for j in 0..inst.nodes() {
            let (c0, c1, c2) = (inst.cost(j, 0), inst.cost(j, 1), inst.cost(j, 2));
            assert!((10.0..=15.0).contains(&c0));
            assert!((1.0..=10.0).contains(&c1));
            assert!(c2 >= c1 && c2 <= c1 + 5.0);
            assert_eq!(round2(c1), c1);
        }
    }

    #[test]
    fn non_square_rejected() {
        let cfg = GeneratorConfig {
            nodes: 15,
            ..GeneratorConfig::default()
        };
        assert!(matches!(build_instance(&cfg, 0), Err(ModelError::NonSquare(15))));
    }

    #[test]
    fn single_node_grid() {
        let cfg = GeneratorConfig {
            nodes: 1,
            sink_count: 0,
            ..GeneratorConfig::default()
        };
        let inst = build_instance(&cfg, 3).unwrap();
        assert_eq!(inst.nodes(), 1);
        // only self-links exist; nothing connects distinct nodes
        assert!(inst.sensors().all(|s| inst.reaches(inst.sensor_index(s)) == [0]));
        assert!(!inst.b(0, 0, 0));
    }
}
