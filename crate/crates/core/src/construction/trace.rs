use std::io::Write;

use serde::Serialize;

use crate::model::SensorId;

/// Which greedy rule or screen produced an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reason {
    Cep,
    Ccr,
    Coep,
    Cocr,
    Energy,
    Polish,
    Budget,
    Cleanup,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Activate {
        t: usize,
        sensor: (usize, usize),
        reason: Reason,
        score: f64,
    },
    Deploy {
        t: usize,
        sensor: (usize, usize),
        reason: Reason,
        score: f64,
        cost: f64,
    },
    Deactivate {
        t: usize,
        sensor: (usize, usize),
        reason: Reason,
    },
    Delete {
        t: usize,
        sensor: (usize, usize),
        reason: Reason,
        refund: f64,
    },
    PeriodDone {
        t: usize,
        active: usize,
        energy: f64,
    },
    Stop {
        t: usize,
        lifetime: usize,
        cause: &'static str,
    },
}

/// 1-based `(node, kind)` pair as written to traces.
pub(crate) fn label(id: SensorId) -> (usize, usize) {
    (id.node + 1, id.kind)
}

pub trait TraceSink {
    fn record(&mut self, event: TraceEvent);
}

/// Discards every event.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoTrace;

impl TraceSink for NoTrace {
    fn record(&mut self, _: TraceEvent) {}
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: TraceEvent) {
        self.push(event);
    }
}

/// Writes one JSON object per line. Write errors are remembered, not raised,
/// so a failing log never changes the heuristic's result.
pub struct JsonLines<W: Write> {
    out: W,
    pub error: Option<std::io::Error>,
}

impl<W: Write> JsonLines<W> {
    pub fn new(out: W) -> Self {
        Self { out, error: None }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> TraceSink for JsonLines<W> {
    fn record(&mut self, event: TraceEvent) {
        if self.error.is_some() {
            return;
        }
        let line = serde_json::to_string(&event).expect("trace event serializes");
        if let Err(e) = writeln!(self.out, "{line}") {
            self.error = Some(e);
        }
    }
}
