use super::builder::{Builder, Labels, Period, StopCause};
use super::trace::{TraceEvent, TraceSink};
use super::{assemble, route_period, Outcome};
use crate::model::{EnergyLedger, Instance};

fn settle_period(b: &mut Builder<'_, '_>, p: &mut Period, energy: &[f64]) -> Result<Labels, StopCause> {
    loop {
        b.repair_coverage(p, energy)?;
        b.repair_connectivity(p, energy)?;
        let labels = b.polish(p);
        if b.screen(p, energy) {
            continue;
        }
        return Ok(labels);
    }
}

/// Disjunctive heuristic: every period is made fully feasible (coverage,
/// budget, connectivity, assignment, polish, routing) before the next starts.
pub fn construct_dh_traced(instance: &Instance, sinks: &[usize], trace: &mut dyn TraceSink) -> Outcome {
    let mut b = Builder::new(instance, sinks, trace);
    let mut ledger = EnergyLedger::new(instance);
    let mut plans = Vec::new();
    let mut stop = None;
    let mut previous: Vec<usize> = Vec::new();
    for t in 1..=instance.horizon() {
        let saved = (b.deployed.clone(), b.uses.clone(), b.spent);
        let energy = ledger.row(t).to_vec();
        let mut p = Period::new(instance, t);
        b.carry(&mut p, &previous);
        b.screen(&mut p, &energy);
        let routed = settle_period(&mut b, &mut p, &energy)
            .and_then(|labels| route_period(&mut b, &p, &labels, &mut ledger));
        match routed {
            Ok(plan) => {
                previous = p.active_list();
                plans.push(plan);
            }
            Err(cause) => {
                (b.deployed, b.uses, b.spent) = saved;
                b.trace.record(TraceEvent::Stop {
                    t,
                    lifetime: t - 1,
                    cause: cause.as_str(),
                });
                stop = Some(cause);
                break;
            }
        }
    }
    assemble(b, plans, stop)
}
