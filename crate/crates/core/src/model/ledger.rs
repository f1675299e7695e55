use super::Instance;

/// Remaining battery per sensor at the start of each period.
///
/// Row `t - 1` holds `E^rem` for period `t`; row 0 is the initial battery.
/// Entries never increase from one row to the next.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLedger {
    rows: Vec<Vec<f64>>,
}

impl EnergyLedger {
    pub fn new(instance: &Instance) -> Self {
        let first = (0..instance.sensor_count())
            .map(|s| instance.sensor_kind(s).battery_or_inf())
            .collect();
        Self { rows: vec![first] }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        assert!(!rows.is_empty(), "ledger needs an initial row");
        Self { rows }
    }

    /// Last period with a recorded row.
    pub fn last_period(&self) -> usize {
        self.rows.len()
    }

    /// `E^rem` for sensor index `s` at the start of period `t` (1-based).
    pub fn remaining(&self, t: usize, s: usize) -> f64 {
        self.rows[t - 1][s]
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.rows[t - 1]
    }

    pub fn current(&self) -> &[f64] {
        self.rows.last().expect("non-empty ledger")
    }

    /// Appends the row for the next period.
    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.rows[0].len());
        self.rows.push(row);
    }

    /// Forgets every row after period `t`.
    pub fn truncate_to(&mut self, t: usize) {
        self.rows.truncate(t.max(1));
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}
