//! Small hand-made instances shared by tests, benches and the CLI.

use crate::model::{
    Assignment, Instance, InstanceParts, Metric, Metrics, PeriodPlan, SensorFlow, SensorId, SensorType, SinkFlow,
    Solution, PACKETS_PER_PERIOD,
};

/// Type-1 sensor with the standard Mica2-style energy figures.
pub fn type_one(sensing_range: f64, comm_range: f64, battery: f64) -> SensorType {
    SensorType {
        kind: 1,
        cost_range: (1.0, 10.0),
        packets: PACKETS_PER_PERIOD,
        sensing_range,
        comm_range,
        sense_energy: 744.0,
        receive_energy: 0.01,
        transmit_energy: 0.013,
        battery: Some(battery),
    }
}

pub fn type_two(sensing_range: f64, comm_range: f64, battery: f64) -> SensorType {
    SensorType {
        kind: 2,
        cost_range: (1.0, 15.0),
        packets: PACKETS_PER_PERIOD,
        sensing_range,
        comm_range,
        sense_energy: 744.0,
        receive_energy: 0.01,
        transmit_energy: 0.018,
        battery: Some(battery),
    }
}

/// A `len x 1` strip with one type-1 kind, one sink and three periods.
pub fn line_instance(len: usize, sensing_range: f64, comm_range: f64) -> Instance {
    Instance::new(InstanceParts {
        width: len,
        height: 1,
        metrics: Metrics::default(),
        types: vec![SensorType::sink((10.0, 15.0)), type_one(sensing_range, comm_range, 19200.0)],
        costs: vec![vec![12.0, 5.0]; len],
        coverage_req: vec![1; len],
        alpha: 1,
        horizon: 3,
        budget: 100.0,
        sink_count: 1,
    })
    .expect("line instance is valid")
}

/// The 4x4 two-period example network: sensing ranges 1 and 2 measured on
/// the grid's square neighbourhood, communication ranges 2 and 4, `f = 1`,
/// `alpha = 1`, two sinks.
pub fn figure_one_instance() -> Instance {
    let n = 16;
    Instance::new(InstanceParts {
        width: 4,
        height: 4,
        metrics: Metrics {
            sensing: Metric::Chebyshev,
            communication: Metric::Euclidean,
        },
        types: vec![
            SensorType::sink((10.0, 15.0)),
            type_one(1.0, 2.0, 19200.0),
            type_two(2.0, 4.0, 28800.0),
        ],
        costs: vec![vec![12.0, 5.0, 8.0]; n],
        coverage_req: vec![1; n],
        alpha: 1,
        horizon: 2,
        budget: 80.0,
        sink_count: 2,
    })
    .expect("example instance is valid")
}

fn sid(node: usize, kind: usize) -> SensorId {
    SensorId::new(node - 1, kind)
}

fn assign(sink: usize, node: usize, kind: usize) -> Assignment {
    Assignment {
        sink: sink - 1,
        sensor: sid(node, kind),
    }
}

fn relay(from: (usize, usize), to: (usize, usize), amount: f64) -> SensorFlow {
    SensorFlow {
        from: sid(from.0, from.1),
        to: sid(to.0, to.1),
        amount,
    }
}

fn deliver(from: (usize, usize), sink: usize, amount: f64) -> SinkFlow {
    SinkFlow {
        from: sid(from.0, from.1),
        sink: sink - 1,
        amount,
    }
}

/// The published two-period schedule for [`figure_one_instance`]. Node
/// numbers in the literals below are 1-based.
pub fn figure_one_solution() -> Solution {
    let inst = figure_one_instance();
    let mut sol = Solution::empty(&inst);
    sol.deployed = vec![
        sid(8, 0),
        sid(14, 0),
        sid(1, 1),
        sid(2, 1),
        sid(10, 1),
        sid(16, 1),
        sid(3, 2),
        sid(4, 2),
        sid(11, 2),
        sid(15, 2),
    ];
    sol.set_lifetime(2);
    sol.periods[0] = PeriodPlan {
        active: vec![sid(1, 1), sid(10, 1), sid(3, 2), sid(15, 2)],
        assignments: vec![assign(8, 1, 1), assign(8, 3, 2), assign(14, 10, 1), assign(14, 15, 2)],
        sensor_flows: vec![relay((1, 1), (3, 2), 24.0)],
        sink_flows: vec![deliver((3, 2), 8, 48.0), deliver((10, 1), 14, 24.0), deliver((15, 2), 14, 24.0)],
    };
    sol.periods[1] = PeriodPlan {
        active: vec![sid(2, 1), sid(10, 1), sid(16, 1), sid(4, 2), sid(11, 2)],
        assignments: vec![
            assign(8, 2, 1),
            assign(8, 4, 2),
            assign(14, 10, 1),
            assign(14, 16, 1),
            assign(14, 11, 2),
        ],
        sensor_flows: vec![relay((2, 1), (4, 2), 24.0)],
        sink_flows: vec![
            deliver((4, 2), 8, 48.0),
            deliver((10, 1), 14, 24.0),
            deliver((16, 1), 14, 24.0),
            deliver((11, 2), 14, 24.0),
        ],
    };
    sol.normalize();
    sol
}
