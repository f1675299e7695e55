use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Kind index reserved for sinks.
pub const SINK_KIND: usize = 0;

/// Static description of one device kind. Kind 0 is the sink.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorType {
    pub kind: usize,
    /// Half-open interval the per-node deployment cost is drawn from.
    pub cost_range: (f64, f64),
    /// Packets generated per active period.
    pub packets: u32,
    pub sensing_range: f64,
    pub comm_range: f64,
    /// Energy for sensing and processing during one active period.
    pub sense_energy: f64,
    /// Energy per received packet.
    pub receive_energy: f64,
    /// Energy per transmitted packet.
    pub transmit_energy: f64,
    /// Initial battery; `None` means unbounded (sinks).
    pub battery: Option<f64>,
}

impl SensorType {
    pub fn sink(cost_range: (f64, f64)) -> Self {
        Self {
            kind: SINK_KIND,
            cost_range,
            packets: 0,
            sensing_range: 0.0,
            comm_range: 0.0,
            sense_energy: 0.0,
            receive_energy: 0.0,
            transmit_energy: 0.0,
            battery: None,
        }
    }

    pub fn is_sink(&self) -> bool {
        self.kind == SINK_KIND
    }

    pub fn battery_or_inf(&self) -> f64 {
        self.battery.unwrap_or(f64::INFINITY)
    }

    pub(crate) fn check(&self) -> Result<(), ModelError> {
        let values = [
            self.sensing_range,
            self.comm_range,
            self.sense_energy,
            self.receive_energy,
            self.transmit_energy,
            self.battery.unwrap_or(0.0),
        ];
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(ModelError::InvalidType {
                kind: self.kind,
                reason: "energies and ranges must be finite and non-negative",
            });
        }
        if self.is_sink() {
            let silent = self.packets == 0
                && self.sensing_range == 0.0
                && self.comm_range == 0.0
                && self.sense_energy == 0.0
                && self.receive_energy == 0.0
                && self.transmit_energy == 0.0
                && self.battery.is_none();
            if !silent {
                return Err(ModelError::InvalidType {
                    kind: self.kind,
                    reason: "sink kind must have zero packets, ranges, energies and an unbounded battery",
                });
            }
        } else if self.battery.is_none() {
            return Err(ModelError::InvalidType {
                kind: self.kind,
                reason: "sensor kinds need a finite battery",
            });
        }
        Ok(())
    }
}

/// A sensor slot: kind `kind` (>= 1) at 0-based node `node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SensorId {
    pub node: usize,
    pub kind: usize,
}

impl SensorId {
    pub fn new(node: usize, kind: usize) -> Self {
        Self { node, kind }
    }
}

impl fmt::Display for SensorId {
    // 1-based node, as in every external format
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.node + 1, self.kind)
    }
}

/// Distance used to turn ranges into coefficient matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Euclidean,
    Chebyshev,
    Manhattan,
}

impl Metric {
    pub fn distance(self, a: (i64, i64), b: (i64, i64)) -> f64 {
        let dx = (a.0 - b.0).abs() as f64;
        let dy = (a.1 - b.1).abs() as f64;
        match self {
            Metric::Euclidean => (dx * dx + dy * dy).sqrt(),
            Metric::Chebyshev => dx.max(dy),
            Metric::Manhattan => dx + dy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub sensing: Metric,
    pub communication: Metric,
}

macro_rules! level_enum {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "lowercase")]
        pub enum $name {
            Low,
            Medium,
            High,
        }

        impl $name {
            pub const ALL: [$name; 3] = [$name::Low, $name::Medium, $name::High];

            pub fn as_str(self) -> &'static str {
                match self {
                    $name::Low => "low",
                    $name::Medium => "medium",
                    $name::High => "high",
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = ModelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.to_ascii_lowercase().as_str() {
                    "low" => Ok($name::Low),
                    "medium" => Ok($name::Medium),
                    "high" => Ok($name::High),
                    _ => Err(ModelError::UnknownLevel(s.to_string())),
                }
            }
        }
    };
}

level_enum!(
    /// Budget tier; fixes the share of type-1 vs type-2 deployment costs.
    BudgetLevel
);
level_enum!(
    /// Battery tier: one, two or three thirds of a full battery.
    EnergyLevel
);

impl BudgetLevel {
    /// (type-1 share, type-2 share) of the summed deployment costs.
    pub fn shares(self) -> (f64, f64) {
        match self {
            BudgetLevel::Low => (0.75, 0.25),
            BudgetLevel::Medium => (0.50, 0.50),
            BudgetLevel::High => (0.25, 0.75),
        }
    }
}

impl EnergyLevel {
    /// Initial batteries for type-1 and type-2 sensors.
    pub fn batteries(self) -> (f64, f64) {
        match self {
            EnergyLevel::Low => (19200.0, 28800.0),
            EnergyLevel::Medium => (38400.0, 57600.0),
            EnergyLevel::High => (57600.0, 86400.0),
        }
    }
}
