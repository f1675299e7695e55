//! Per-period minimum-energy routing and the energy ledger update.
//!
//! Route consistency forbids flow between sensors with different sinks, so
//! each sink is an independent commodity. Each commodity becomes a min-cost
//! flow with split sensor nodes: `in -> out` carries relayed packets up to
//! the energy headroom, a generation arc feeds `h` packets into `out`.

pub mod mcf;
mod rp;

pub use rp::{
    apply_routing, max_outflow_bound, relay_capacity, solve_rp, solve_rp_with_dump, update_energy, LedgerError,
    PeriodState, RoutingError, RoutingResult,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{Assignment, EnergyLedger, SensorId};

    fn chain() -> (crate::Instance, Vec<SensorId>, Vec<Assignment>) {
        // sink at node 1, type-1 sensors at nodes 2 and 3 of a 1x3 line
        let inst = fixtures::line_instance(3, 1.0, 1.0);
        let a = SensorId::new(2, 1);
        let b = SensorId::new(1, 1);
        let assignments = vec![Assignment { sink: 0, sensor: a }, Assignment { sink: 0, sensor: b }];
        (inst, vec![b, a], assignments)
    }

    #[test]
    fn chain_forces_relay() {
        let (inst, active, assignments) = chain();
        let ledger = EnergyLedger::new(&inst);
        let state = PeriodState {
            period: 1,
            active: &active,
            assignments: &assignments,
            sinks: &[0],
            remaining: ledger.row(1),
        };
        let res = solve_rp(&inst, &state).unwrap();
        assert_eq!(res.sensor_flows.len(), 1);
        assert_eq!(res.sensor_flows[0].amount, 24.0);
        assert_eq!(res.sink_flows.len(), 1);
        assert_eq!(res.sink_flows[0].amount, 48.0);
        let expected = 2.0 * 744.0 + 0.01 * 24.0 + 0.013 * (24.0 + 48.0);
        assert!((res.objective - expected).abs() < 1e-9);
        assert!((res.objective - 1489.176).abs() < 1e-9);
    }

    #[test]
    fn direct_neighbour() {
        let inst = fixtures::line_instance(2, 1.0, 1.0);
        let s = SensorId::new(1, 1);
        let assignments = [Assignment { sink: 0, sensor: s }];
        let ledger = EnergyLedger::new(&inst);
        let state = PeriodState {
            period: 1,
            active: &[s],
            assignments: &assignments,
            sinks: &[0],
            remaining: ledger.row(1),
        };
        let res = solve_rp(&inst, &state).unwrap();
        assert!(res.sensor_flows.is_empty());
        assert_eq!(res.sink_flows[0].amount, 24.0);
        assert!((res.objective - (744.0 + 0.013 * 24.0)).abs() < 1e-9);
    }

    #[test]
    fn relay_without_headroom_strands() {
        let (inst, active, assignments) = chain();
        let mut row = EnergyLedger::new(&inst).row(1).to_vec();
        // node 2 can sense and send its own packets but relay nothing
        row[inst.sensor_index(SensorId::new(1, 1))] = 744.0 + 0.013 * 24.0;
        let state = PeriodState {
            period: 1,
            active: &active,
            assignments: &assignments,
            sinks: &[0],
            remaining: &row,
        };
        assert_eq!(solve_rp(&inst, &state), Err(RoutingError::Stranded(SensorId::new(2, 1))));
    }

    #[test]
    fn zeta() {
        let inst = fixtures::line_instance(2, 1.0, 1.0);
        assert_eq!(max_outflow_bound(4, &inst), 96);
        assert_eq!(max_outflow_bound(0, &inst), 0);
        assert_eq!(max_outflow_bound(1, &inst), 24);
    }

    #[test]
    fn ledger_update() {
        let (inst, active, assignments) = chain();
        let mut ledger = EnergyLedger::new(&inst);
        let state = PeriodState {
            period: 1,
            active: &active,
            assignments: &assignments,
            sinks: &[0],
            remaining: ledger.row(1),
        };
        let res = solve_rp(&inst, &state).unwrap();
        update_energy(&inst, &mut ledger, 1, &res).unwrap();
        let relay = inst.sensor_index(SensorId::new(1, 1));
        // relay: 744 + 0.01 * 24 + 0.013 * 48
        assert!((ledger.remaining(2, relay) - (19200.0 - 744.864)).abs() < 1e-9);
        assert!((ledger.remaining(2, relay) - 18455.136).abs() < 1e-9);
        let idle = inst.sensor_index(SensorId::new(0, 1));
        assert_eq!(ledger.remaining(2, idle), 19200.0);
    }

    #[test]
    fn idle_periods_drain_sense_energy_only() {
        let inst = fixtures::line_instance(2, 1.0, 1.0);
        let s = SensorId::new(1, 1);
        let assignments = [Assignment { sink: 0, sensor: s }];
        let mut ledger = EnergyLedger::new(&inst);
        let mut spent = 0.0;
        for t in 1..=25 {
            let state = PeriodState {
                period: t,
                active: &[s],
                assignments: &assignments,
                sinks: &[0],
                remaining: ledger.row(t),
            };
            let res = solve_rp(&inst, &state).unwrap();
            spent += res.consumption[inst.sensor_index(s)] - 744.0;
            update_energy(&inst, &mut ledger, t, &res).unwrap();
        }
        let left = ledger.remaining(26, inst.sensor_index(s));
        assert!((left + spent - 600.0).abs() < 1e-6);
    }
}
