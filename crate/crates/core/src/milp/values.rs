use std::fmt::Write;

use super::{Registry, VarKey, VarType};
use crate::model::{Assignment, Instance, SensorFlow, SensorId, SinkFlow, Solution};
use crate::validate::FLOW_TOL;

/// Largest distance from an integer a binary or integer value may have.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ImportError {
    #[error("line {line}: unknown variable '{name}'")]
    UnknownVariable { line: usize, name: String },
    #[error("line {line}: expected 'name value', got '{text}'")]
    Malformed { line: usize, text: String },
    #[error("line {line}: {name} = {value} is not integral")]
    NotIntegral { line: usize, name: String, value: f64 },
}

/// Reads `name value` lines into a registry-ordered vector. Missing
/// variables are zero; blank lines and lines starting with `#` or `\` are
/// skipped.
pub fn parse_values(text: &str, registry: &Registry) -> Result<Vec<f64>, ImportError> {
    let mut values = vec![0.0; registry.len()];
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('\\') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(ImportError::Malformed {
                line,
                text: trimmed.into(),
            });
        };
        let value: f64 = value.parse().map_err(|_| ImportError::Malformed {
            line,
            text: trimmed.into(),
        })?;
        let idx = registry.by_name(name).ok_or_else(|| ImportError::UnknownVariable {
            line,
            name: name.into(),
        })?;
        if registry.vars[idx].ty != VarType::Continuous && (value - value.round()).abs() > INTEGRALITY_TOL {
            return Err(ImportError::NotIntegral {
                line,
                name: name.into(),
                value,
            });
        }
        values[idx] = value;
    }
    Ok(values)
}

/// Rebuilds a solution from registry-ordered values. Binaries are rounded;
/// flows at or below the flow tolerance are dropped.
pub fn solution_from_values(registry: &Registry, instance: &Instance, values: &[f64]) -> Solution {
    let mut sol = Solution::empty(instance);
    let on = |x: f64| x > 0.5;
    for (var, &x) in registry.vars.iter().zip(values) {
        match var.key {
            VarKey::Lifetime => sol.lifetime = x.round().max(0.0) as usize,
            VarKey::Period(t) => sol.period_on[t - 1] = on(x),
            VarKey::Deploy { node, kind } if on(x) => sol.deployed.push(SensorId::new(node, kind)),
            VarKey::Active { node, kind, t } if on(x) => {
                sol.period_mut(t).active.push(SensorId::new(node, kind));
            }
            VarKey::Assign { sink, node, kind, t } if on(x) => sol.period_mut(t).assignments.push(Assignment {
                sink,
                sensor: SensorId::new(node, kind),
            }),
            VarKey::Flow { from, to, t } if x > FLOW_TOL => sol.period_mut(t).sensor_flows.push(SensorFlow {
                from: SensorId::new(from.0, from.1),
                to: SensorId::new(to.0, to.1),
                amount: x,
            }),
            VarKey::SinkFlow { from, sink, t } if x > FLOW_TOL => sol.period_mut(t).sink_flows.push(SinkFlow {
                from: SensorId::new(from.0, from.1),
                sink,
                amount: x,
            }),
            _ => {}
        }
    }
    sol.normalize();
    sol
}

/// Parses a value listing in the exporter's naming into a solution.
pub fn import_solution(text: &str, instance: &Instance) -> Result<Solution, ImportError> {
    let registry = Registry::new(instance);
    let values = parse_values(text, &registry)?;
    Ok(solution_from_values(&registry, instance, &values))
}

/// Nonzero values as `name value` lines in registry order.
pub fn write_values(registry: &Registry, values: &[f64]) -> String {
    let mut out = String::new();
    for (var, &x) in registry.vars.iter().zip(values) {
        if x != 0.0 {
            let _ = writeln!(out, "{} {}", var.name, x);
        }
    }
    out
}
