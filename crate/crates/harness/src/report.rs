use qsba_core::attacks::{AttackReport, Metric};
use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::HarnessError;

/// Columns, in output order.
pub const COLUMNS: [&str; 7] = ["metric", "estimate", "ci_low", "ci_high", "exact", "tolerance", "pass"];

/// One line of output. `pass` is always derived from the other columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub metric: String,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub exact: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl ReportRow {
    pub fn from_metric(prefix: &str, m: &Metric) -> Self {
        Self {
            metric: format!("{prefix}.{}", m.name),
            estimate: m.estimate,
            ci_low: m.ci_low,
            ci_high: m.ci_high,
            exact: m.exact,
            tolerance: m.tolerance,
            pass: m.pass(),
        }
    }

    /// Passes when `estimate > bound`; the bound goes in the `exact` column.
    pub fn above(metric: impl Into<String>, estimate: f64, bound: f64) -> Self {
        Self {
            metric: metric.into(),
            estimate,
            ci_low: estimate,
            ci_high: estimate,
            exact: Some(bound),
            tolerance: None,
            pass: estimate > bound,
        }
    }

    /// Passes when `estimate < bound`.
    pub fn below(metric: impl Into<String>, estimate: f64, bound: f64) -> Self {
        Self {
            pass: estimate < bound,
            ..Self::above(metric, estimate, bound)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Self {
            command: command.into(),
            seed,
            ..Self::default()
        }
    }

    pub fn add_attack(&mut self, prefix: &str, r: &AttackReport) {
        self.rows.extend(r.metrics.iter().map(|m| ReportRow::from_metric(prefix, m)));
        self.notes.extend(r.notes.iter().map(|n| format!("{prefix}: {n}")));
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn render(&self, format: Format) -> Result<String, HarnessError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| HarnessError::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
                w.write_record(COLUMNS).map_err(|e| HarnessError::Io(e.to_string()))?;
                for r in &self.rows {
                    w.serialize(r).map_err(|e| HarnessError::Io(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| HarnessError::Io(e.to_string()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_fixed_columns() {
        let mut r = Report::new("attack", 1);
        r.push(ReportRow::from_metric("a", &Metric::proportion("p", 1, 2, Some(0.5))));
        r.push(ReportRow::from_metric("a", &Metric::value("i", 3.0, None, None)));
        let csv = r.render(Format::Csv).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("metric,estimate,ci_low,ci_high,exact,tolerance,pass"));
        assert!(lines.next().unwrap().starts_with("a.p,0.5,"));
        assert_eq!(lines.next(), Some("a.i,3.0,3.0,3.0,,,true"));
    }

    #[test]
    fn threshold_rows() {
        assert!(ReportRow::above("x", 0.995, 0.99).pass);
        assert!(!ReportRow::above("x", 0.98, 0.99).pass);
        assert!(ReportRow::below("x", 1e-4, 1e-3).pass);
    }

    #[test]
    fn json_round_trips() {
        let mut r = Report::new("bounds", 3);
        r.push(ReportRow::below("x", 0.0, 1.0));
        let back: Report = serde_json::from_str(&r.render(Format::Json).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
