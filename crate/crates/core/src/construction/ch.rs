use std::collections::VecDeque;

use super::builder::{Builder, Period, StopCause};
use super::trace::{label, Reason, TraceEvent, TraceSink};
use super::{assemble, route_period, Outcome};
use crate::model::{EnergyLedger, Instance};

/// Constructive heuristic. Coverage and budget are settled for the whole
/// horizon first, against a ledger that charges every active sensor its full
/// throughput reserve; connectivity, assignment and routing follow period by
/// period on the true ledger.
pub fn construct_ch_traced(instance: &Instance, sinks: &[usize], trace: &mut dyn TraceSink) -> Outcome {
    let mut b = Builder::new(instance, sinks, trace);
    let mut stop = None;

    let mut reserve: Vec<f64> = EnergyLedger::new(instance).row(1).to_vec();
    let mut schedule: Vec<Period> = Vec::new();
    for t in 1..=instance.horizon() {
        let saved = (b.deployed.clone(), b.uses.clone(), b.spent);
        let mut p = Period::new(instance, t);
        if let Some(last) = schedule.last() {
            b.carry(&mut p, &last.active_list());
        }
        let settled = loop {
            if let Err(cause) = b.repair_coverage(&mut p, &reserve) {
                break Err(cause);
            }
            if !b.screen(&mut p, &reserve) {
                break Ok(());
            }
        };
        if let Err(cause) = settled {
            (b.deployed, b.uses, b.spent) = saved;
            b.trace.record(TraceEvent::Stop {
                t,
                lifetime: t - 1,
                cause: cause.as_str(),
            });
            stop = Some(cause);
            break;
        }
        for s in p.active_list() {
            reserve[s] -= b.threshold(s, p.count);
        }
        schedule.push(p);
    }

    let mut ledger = EnergyLedger::new(instance);
    let mut plans = Vec::with_capacity(schedule.len());
    let horizon = schedule.len();
    let mut schedule: VecDeque<Period> = schedule.into();
    for q in &schedule {
        for s in q.active_list() {
            b.pending[s] += 1;
        }
    }
    for t in 1..=horizon {
        let mut p = schedule.pop_front().expect("one working period per planned period");
        let planned = p.active.clone();
        for s in p.active_list() {
            b.pending[s] -= 1;
        }
        let energy = ledger.row(t).to_vec();
        let routed = connect_period(&mut b, &mut p, &energy, &reserve)
            .and_then(|labels| route_period(&mut b, &p, &labels, &mut ledger));
        forget_deleted(&mut b, &mut schedule);
        match routed {
            Ok(plan) => {
                for s in p.active_list() {
                    if !planned[s] {
                        reserve[s] -= b.threshold(s, p.count);
                    }
                }
                plans.push(plan);
            }
            Err(cause) => {
                // forget this and every later period
                for q in std::iter::once(p).chain(schedule.drain(..)) {
                    for s in q.active_list() {
                        b.uses[s] -= 1;
                    }
                }
                b.pending.fill(0);
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

/// Takes sensors deleted to pay for connectivity out of the later periods
/// that planned on them.
fn forget_deleted(b: &mut Builder<'_, '_>, schedule: &mut VecDeque<Period>) {
    for q in schedule.iter_mut() {
        for s in q.active_list() {
            if !b.deployed[s] {
                b.deactivate(q, s);
                b.pending[s] -= 1;
                b.trace.record(TraceEvent::Deactivate {
                    t: q.t,
                    sensor: label(b.id(s)),
                    reason: Reason::Budget,
                });
            }
        }
    }
}

/// Connectivity repair on top of a planned period. Sensors already in the
/// plan are screened against `energy`; extra sensors may only draw on `spare`,
/// the energy no planned period has reserved.
fn connect_period(
    b: &mut Builder<'_, '_>,
    p: &mut Period,
    energy: &[f64],
    spare: &[f64],
) -> Result<super::builder::Labels, StopCause> {
    b.screen(p, energy);
    if !b.covered(p) {
        return Err(StopCause::Coverage);
    }
    loop {
        let labels = b.repair_connectivity(p, spare)?;
        if b.screen(p, energy) {
            if !b.covered(p) {
                return Err(StopCause::Coverage);
            }
            continue;
        }
        return Ok(labels);
    }
}
