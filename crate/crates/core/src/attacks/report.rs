use serde::{Deserialize, Serialize};

use crate::stats::wilson_interval;

/// Width of the default confidence interval, in standard deviations.
pub const CI_Z: f64 = 4.0;

/// Slack for comparing floating-point values that should agree exactly.
const EXACT_SLACK: f64 = 1e-12;

/// One estimated quantity next to its exact prediction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub exact: Option<f64>,
    /// When set, pass means `|estimate − exact| ≤ tolerance` instead of `exact ∈ CI`.
    pub tolerance: Option<f64>,
    pub successes: u64,
    pub trials: u64,
}

impl Metric {
    /// A frequency with a Wilson interval of [`CI_Z`] standard deviations.
    pub fn proportion(name: impl Into<String>, successes: u64, trials: u64, exact: Option<f64>) -> Self {
        Self::proportion_z(name, successes, trials, exact, CI_Z)
    }

    pub fn proportion_z(name: impl Into<String>, successes: u64, trials: u64, exact: Option<f64>, z: f64) -> Self {
        let trials_nz = trials.max(1);
        let ci = wilson_interval(successes.min(trials_nz), trials_nz, z);
        Self {
            name: name.into(),
            estimate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci_low: ci.low,
            ci_high: ci.high,
            exact,
            tolerance: None,
            successes,
            trials,
        }
    }

    /// A computed value with no sampling error, such as a count or a closed form.
    pub fn value(name: impl Into<String>, estimate: f64, exact: Option<f64>, tolerance: Option<f64>) -> Self {
        Self {
            name: name.into(),
            estimate,
            ci_low: estimate,
            ci_high: estimate,
            exact,
            tolerance,
            successes: 0,
            trials: 0,
        }
    }

    /// A difference of two frequencies with a normal interval of `z` pooled standard errors.
    pub fn difference(name: impl Into<String>, a: (u64, u64), b: (u64, u64), z: f64) -> Self {
        let pa = a.0 as f64 / a.1.max(1) as f64;
        let pb = b.0 as f64 / b.1.max(1) as f64;
        let pooled = (a.0 + b.0) as f64 / (a.1 + b.1).max(1) as f64;
        let se = (pooled * (1.0 - pooled) * (1.0 / a.1.max(1) as f64 + 1.0 / b.1.max(1) as f64)).sqrt();
        Self {
            name: name.into(),
            estimate: pa - pb,
            ci_low: pa - pb - z * se,
            ci_high: pa - pb + z * se,
            exact: Some(0.0),
            tolerance: None,
            successes: a.0 + b.0,
            trials: a.1 + b.1,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Metrics without an exact value are informational and always pass.
    pub fn pass(&self) -> bool {
        match (self.exact, self.tolerance) {
            (None, _) => true,
            (Some(e), Some(t)) => (self.estimate - e).abs() <= t + EXACT_SLACK,
            (Some(e), None) => self.ci_low - EXACT_SLACK <= e && e <= self.ci_high + EXACT_SLACK,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub name: String,
    pub metrics: Vec<Metric>,
    pub notes: Vec<String>,
}

impl AttackReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, metric: Metric) -> &mut Self {
        self.metrics.push(metric);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn metric(&self, name: &str) -> Option<&Metric> {
        self.metrics.iter().find(|m| m.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.metrics.iter().all(Metric::pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rules() {
        let m = Metric::proportion("p", 500, 1000, Some(0.5));
        assert!(m.pass());
        assert!(m.ci_low <= m.estimate && m.estimate <= m.ci_high);
        assert!(!Metric::proportion("p", 900, 1000, Some(0.5)).pass());
        assert!(Metric::value("c", 0.0, Some(0.0), Some(0.0)).pass());
        assert!(!Metric::value("c", 1.0, Some(0.0), Some(0.0)).pass());
        assert!(Metric::value("i", 3.0, None, None).pass());
        assert!(Metric::proportion("t", 853, 1000, Some(0.8535)).with_tolerance(0.001).pass());
        assert!(!Metric::proportion("t", 850, 1000, Some(0.8535)).with_tolerance(0.001).pass());
    }

    #[test]
    fn zero_trials_do_not_panic() {
        let m = Metric::proportion("empty", 0, 0, None);
        assert_eq!(m.estimate, 0.0);
        assert!(m.pass());
    }

    #[test]
    fn difference_of_equal_rates_contains_zero() {
        let d = Metric::difference("d", (8_500, 10_000), (8_540, 10_000), 4.0);
        assert!(d.pass());
        assert!(!Metric::difference("d", (8_000, 10_000), (9_000, 10_000), 4.0).pass());
    }
}
