//! Exact binomial oracles, relative-entropy tail bounds, and interval
//! estimates for Monte Carlo frequencies.
//!
//! The error probability of the `l`-copy majority attack is the lower tail
//! `Σ_{z=0}^{⌊l/2⌋} C(l,z) p^z (1−p)^{l−z}`. The exponent on the failure
//! probability is `l − z`; a printed exponent of `1 − z` does not normalize.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Note attached to bound reports about the error-sum exponent.
pub const ERROR_SUM_NOTE: &str =
    "error probability uses the binomial lower tail with exponent l-z on p(e); an exponent of 1-z does not normalize";

/// `B(l, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinomialModel {
    l: u32,
    p: f64,
}

impl BinomialModel {
    pub fn new(l: u32, p: f64) -> Result<Self> {
        if l == 0 {
            return Err(Error::OutOfRange("binomial trial count must be ≥ 1".into()));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::OutOfRange(format!(
                "binomial probability {p} outside (0, 1)"
            )));
        }
        Ok(Self { l, p })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// All probability masses, built from successive term ratios so no
    /// factorial is ever formed.
    pub fn pmf_terms(&self) -> Vec<f64> {
        let l = self.l as usize;
        let ratio = self.p / (1.0 - self.p);
        let mut terms = Vec::with_capacity(l + 1);
        let mut t = (1.0 - self.p).powi(self.l as i32);
        terms.push(t);
        for z in 0..l {
            t *= (l - z) as f64 / (z + 1) as f64 * ratio;
            terms.push(t);
        }
        terms
    }

    pub fn pmf(&self, k: u32) -> Result<f64> {
        self.check(k)?;
        Ok(self.pmf_terms()[k as usize])
    }

    /// `P(X ≤ k)`.
    pub fn cdf(&self, k: u32) -> Result<f64> {
        self.check(k)?;
        Ok(self.pmf_terms()[..=k as usize].iter().sum())
    }

    /// `P(X ≥ k)`, summed directly so the upper tail keeps full precision.
    pub fn survival(&self, k: u32) -> Result<f64> {
        if k > self.l + 1 {
            return Err(Error::OutOfRange(format!("k = {k} > l + 1 = {}", self.l + 1)));
        }
        Ok(self.pmf_terms()[k as usize..].iter().sum())
    }

    fn check(&self, k: u32) -> Result<()> {
        if k > self.l {
            return Err(Error::OutOfRange(format!("k = {k} > l = {}", self.l)));
        }
        Ok(())
    }
}

pub fn binom_cdf(model: &BinomialModel, k: u32) -> Result<f64> {
    model.cdf(k)
}

/// `D(x‖y) = x ln(x/y) + (1−x) ln((1−x)/(1−y))`, in nats.
pub fn relative_entropy(x: f64, y: f64) -> Result<f64> {
    for v in [x, y] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::OutOfRange(format!(
                "relative entropy argument {v} outside (0, 1)"
            )));
        }
    }
    Ok(x * (x / y).ln() + (1.0 - x) * ((1.0 - x) / (1.0 - y)).ln())
}

/// Exact strict-majority success of an `l`-copy vote next to its
/// relative-entropy sandwich.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub l: u32,
    pub exact_success: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// False when `⌊l/2⌋/l ≥ p` or `⌊l/2⌋ = 0`, where the bounds do not apply.
    pub valid: bool,
}

impl BoundReport {
    pub fn sandwich_holds(&self) -> bool {
        self.valid && self.lower_bound <= self.exact_success && self.exact_success <= self.upper_bound
    }
}

/// With `k = ⌊l/2⌋`, `x = k/l`, `E = exp(−l·D(x‖p))`:
/// `1 − E ≤ P(X > k) ≤ 1 − E / √(8 l x (1 − x))`.
pub fn success_bounds(model: &BinomialModel) -> BoundReport {
    let l = model.l;
    let k = l / 2;
    let exact_success = model.survival(k + 1).expect("k + 1 ≤ l + 1");
    let x = k as f64 / l as f64;
    let valid = k > 0 && x < model.p;
    let (lower_bound, upper_bound) = match relative_entropy(x, model.p) {
        Ok(d) if valid => {
            let tail = (-(l as f64) * d).exp();
            let prefactor = 1.0 / (8.0 * l as f64 * x * (1.0 - x)).sqrt();
            (1.0 - tail, 1.0 - prefactor * tail)
        }
        _ => (f64::NAN, f64::NAN),
    };
    BoundReport {
        l,
        exact_success,
        lower_bound,
        upper_bound,
        valid,
    }
}

/// Closed-form figures of merit for the `|0⟩` vs `|+⟩` encoding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForms {
    /// Minimum-error success `p(s) = (1 + sin(π/4)) / 2`.
    pub p_success: f64,
    /// `p(e) = (1 − sin(π/4)) / 2`.
    pub p_error: f64,
    /// Optimal unambiguous-discrimination inconclusive rate `p_in = cos(π/4)`.
    pub p_inconclusive: f64,
}

impl ClosedForms {
    /// Probability that all `l` unambiguous measurements are inconclusive.
    /// `p_in^l`, evaluated as `2^(−l/2)`.
    pub fn all_inconclusive(&self, l: u32) -> f64 {
        (-(l as f64) / 2.0).exp2()
    }

    /// Strict-majority success over `l` minimum-error measurements.
    pub fn majority_success(&self, l: u32) -> Result<f64> {
        let model = BinomialModel::new(l, self.p_success)?;
        model.survival(l / 2 + 1)
    }

    pub fn whole_bid(per_bit: f64, m: u32) -> f64 {
        per_bit.powi(m as i32)
    }
}

pub fn closed_forms() -> ClosedForms {
    let s = FRAC_PI_4.sin();
    ClosedForms {
        p_success: 0.5 * (1.0 + s),
        p_error: 0.5 * (1.0 - s),
        p_inconclusive: FRAC_PI_4.cos(),
    }
}

/// Closed interval `[low, high]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        self.low <= v && v <= self.high
    }
}

/// Two-sided normal quantile for 99% coverage.
pub const Z_99: f64 = 2.575_829_303_548_901;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Interval {
    assert!(trials >= 1, "wilson interval needs at least one trial");
    assert!(successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Interval {
        low: if successes == 0 { 0.0 } else { (centre - half).max(0.0) },
        high: if successes == trials { 1.0 } else { (centre + half).min(1.0) },
    }
}

/// Plug-in mutual information, in bits, of a joint count table.
pub fn mutual_information_bits<const A: usize, const B: usize>(counts: &[[u64; B]; A]) -> f64 {
    let total: u64 = counts.iter().flatten().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let row: Vec<f64> = counts.iter().map(|r| r.iter().sum::<u64>() as f64 / n).collect();
    let col: Vec<f64> = (0..B)
        .map(|j| counts.iter().map(|r| r[j]).sum::<u64>() as f64 / n)
        .collect();
    let mut mi = 0.0;
    for (i, r) in counts.iter().enumerate() {
        for (j, &c) in r.iter().enumerate() {
            if c > 0 {
                let pij = c as f64 / n;
                mi += pij * (pij / (row[i] * col[j])).log2();
            }
        }
    }
    mi.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PS: f64 = 0.853_553_390_593_273_8;

    /// Reference CDF from log-gamma style products, independent of the
    /// term-ratio recurrence.
    fn cdf_by_choose(l: u32, k: u32, p: f64) -> f64 {
        let choose = |n: u32, r: u32| -> f64 {
            (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        };
        (0..=k)
            .map(|z| choose(l, z) * p.powi(z as i32) * (1.0 - p).powi((l - z) as i32))
            .sum()
    }

    #[test]
    fn cdf_examples() {
        let m = BinomialModel::new(10, 0.853553).unwrap();
        // mpmath: 0.008905097269071546
        assert!((m.cdf(5).unwrap() - 0.008_905_097_269_071_546).abs() < 1e-12);
        assert!(1.0 - m.cdf(5).unwrap() > 0.99);
        let m1 = BinomialModel::new(1, 0.3).unwrap();
        assert!((m1.cdf(0).unwrap() - 0.7).abs() < 1e-15);
        assert!(m.cdf(11).is_err());
    }

    #[test]
    fn cdf_matches_reference_up_to_64() {
        for l in 1..=64 {
            for k in 0..=l {
                let m = BinomialModel::new(l, PS).unwrap();
                assert!((m.cdf(k).unwrap() - cdf_by_choose(l, k, PS)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn complementarity() {
        for l in 1..=64 {
            let m = BinomialModel::new(l, PS).unwrap();
            assert!((m.cdf(l).unwrap() - 1.0).abs() < 1e-12);
            for k in 0..l {
                let s = m.cdf(k).unwrap() + m.survival(k + 1).unwrap();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn relative_entropy_examples() {
        assert_eq!(relative_entropy(0.5, 0.5).unwrap(), 0.0);
        // mpmath: D(0.5‖0.853553) = 0.346572485517193
        assert!((relative_entropy(0.5, 0.853553).unwrap() - 0.346_572_485_517_193).abs() < 1e-12);
        assert!(relative_entropy(0.0, 0.5).is_err());
        assert!(relative_entropy(0.5, 1.0).is_err());
    }

    #[test]
    fn bounds_at_l10() {
        let r = success_bounds(&BinomialModel::new(10, PS).unwrap());
        // mpmath: 0.96875, 0.991095005288533, 0.993012287570313
        assert!((r.lower_bound - 0.96875).abs() < 1e-12);
        assert!((r.exact_success - 0.991_095_005_288_533).abs() < 1e-12);
        assert!((r.upper_bound - 0.993_012_287_570_313).abs() < 1e-12);
        assert!(r.sandwich_holds());
    }

    #[test]
    fn bounds_edge_cases() {
        let r2 = success_bounds(&BinomialModel::new(2, PS).unwrap());
        assert!(r2.sandwich_holds());
        let r50 = success_bounds(&BinomialModel::new(50, PS).unwrap());
        assert!(r50.exact_success > 1.0 - 1e-7);
        let r1 = success_bounds(&BinomialModel::new(1, PS).unwrap());
        assert!(!r1.valid);
        let low_p = success_bounds(&BinomialModel::new(10, 0.3).unwrap());
        assert!(!low_p.valid);
    }

    #[test]
    fn closed_form_constants() {
        let c = closed_forms();
        assert!((c.p_success + c.p_error - 1.0).abs() < 1e-15);
        assert_eq!(c.all_inconclusive(10), 1.0 / 32.0);
        assert!((c.all_inconclusive(2) - 0.5).abs() < 1e-15);
        // (P(s))^8 with P(s) = 0.991095005288533 → 0.930941304664147
        let p = c.majority_success(10).unwrap();
        assert!((ClosedForms::whole_bid(p, 8) - 0.930_941_304_664_147).abs() < 1e-12);
        assert!((ClosedForms::whole_bid(c.p_success, 8) - 0.281_738_069_689_507_5).abs() < 1e-12);
    }

    #[test]
    fn wilson_examples() {
        let i = wilson_interval(0, 50, 1.96);
        assert_eq!(i.low, 0.0);
        let i = wilson_interval(50, 50, 1.96);
        assert_eq!(i.high, 1.0);
        let i = wilson_interval(500, 1000, 1.96);
        // mpmath: (0.469069034179360, 0.530930965820640)
        assert!((i.low - 0.469_069_034_179_36).abs() < 1e-12);
        assert!((i.high - 0.530_930_965_820_64).abs() < 1e-12);
        assert!(i.contains(0.5));
        // normal approximation agrees to the third decimal here
        let wald = 1.96 * (0.25f64 / 1000.0).sqrt();
        assert!((i.high - 0.5 - wald).abs() < 1e-3);
    }

    #[test]
    fn mutual_information_limits() {
        assert!(mutual_information_bits(&[[50, 50], [50, 50]]).abs() < 1e-12);
        assert!((mutual_information_bits(&[[50, 0], [0, 50]]) - 1.0).abs() < 1e-12);
    }

    mod props {
        use proptest::prelude::*;

        use super::super::*;

        proptest! {
            #[test]
            fn gibbs_inequality(x in 0.001f64..0.999, y in 0.001f64..0.999) {
                prop_assert!(relative_entropy(x, y).unwrap() >= -1e-15);
            }

            #[test]
            fn wilson_contains_estimate(n in 1u64..5000, frac in 0.0f64..=1.0, z in 0.5f64..5.0) {
                let s = ((n as f64) * frac).floor() as u64;
                let i = wilson_interval(s, n, z);
                prop_assert!(i.contains(s as f64 / n as f64));
                prop_assert!(0.0 <= i.low && i.high <= 1.0);
            }
        }
    }
}
