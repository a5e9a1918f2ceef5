use qsba_core::attacks::{self, AttackConfig, CampaignStats, CnotMode, Metric, Scenario, SPLIT_LABELS};
use qsba_core::stats::{closed_forms, success_bounds, BinomialModel, Z_99};

use crate::report::{Report, ReportRow};
use crate::HarnessError;

/// Number of criteria covered by [`reproduce`].
pub const CRITERIA: u8 = 9;

/// Criterion number encoded in a row name such as `c3.per_bit_success`.
pub fn criterion_of(row: &ReportRow) -> Option<u8> {
    row.metric.strip_prefix('c')?.split('.').next()?.parse().ok()
}

fn cfg(seed: u64, l: usize, m: usize, trials: u64) -> AttackConfig {
    AttackConfig {
        l,
        m,
        trials,
        seed,
        ..AttackConfig::default()
    }
}

fn metric<'a>(r: &'a attacks::AttackReport, name: &str) -> Result<&'a Metric, HarnessError> {
    r.metric(name)
        .ok_or_else(|| HarnessError::Io(format!("{} did not report {name}", r.name)))
}

/// Runs every acceptance criterion except end-to-end determinism, which
/// needs two invocations. Sub-seeds are derived from `seed` so criteria do
/// not share streams.
pub fn reproduce(seed: u64) -> Result<Report, HarnessError> {
    let mut report = Report::new("reproduce", seed);
    let sub = |k: u64| seed.wrapping_mul(1_000).wrapping_add(k);
    let cf = closed_forms();

    // 1: τ-basis measurement over 10^6 qubits.
    let r = attacks::semi_honest_projective(&cfg(sub(1), 1, 8, 125_000))?;
    report.push(ReportRow::from_metric("c1", &metric(&r, "per_bit_success")?.clone().with_tolerance(0.0015)));

    // 2: unambiguous discrimination over 10^6 qubits.
    let r = attacks::semi_honest_usd(&cfg(sub(2), 1, 8, 125_000))?;
    report.push(ReportRow::from_metric("c2", &metric(&r, "inconclusive_rate")?.clone().with_tolerance(0.002)));
    report.push(ReportRow::from_metric("c2", metric(&r, "conclusive_wrong")?));

    // 3: majority vote with ten copies over 10^5 bits.
    let r = attacks::multicopy_majority(&cfg(sub(3), 10, 8, 12_500))?;
    let m = metric(&r, "per_bit_success")?;
    report.push(ReportRow::above("c3.per_bit_success_above_0.99", m.estimate, 0.99));
    let oracle = 1.0 - BinomialModel::new(10, cf.p_success)?.cdf(5)?;
    report.push(ReportRow::from_metric(
        "c3",
        &Metric::proportion_z("per_bit_success_wilson99", m.successes, m.trials, Some(oracle), Z_99),
    ));

    // 4: unambiguous discrimination with ten copies.
    report.push(ReportRow::from_metric(
        "c4",
        &Metric::value("all_inconclusive_closed_form", cf.all_inconclusive(10), Some(1.0 / 32.0), Some(0.0)),
    ));
    let r = attacks::multicopy_usd(&cfg(sub(4), 10, 8, 12_500))?;
    let m = metric(&r, "inconclusive_rate")?;
    report.push(ReportRow::from_metric("c4", m));
    report.push(ReportRow::below("c4.inconclusive_rate_below_0.05", m.estimate, 0.05));
    report.push(ReportRow::from_metric("c4", metric(&r, "conclusive_wrong")?));

    // 5: tail-bound sandwich.
    let held = (2..=64u32)
        .map(|l| BinomialModel::new(l, cf.p_success).map(|b| success_bounds(&b).sandwich_holds()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|&h| h)
        .count() as u64;
    report.push(ReportRow::from_metric(
        "c5",
        &Metric::proportion("sandwich_l2_to_l64", held, 63, Some(1.0)).with_tolerance(0.0),
    ));
    let b = success_bounds(&BinomialModel::new(10, cf.p_success)?);
    let (lower, exact, upper) = independent_bounds_at_10(cf.p_success);
    for (name, got, want) in [("lower", b.lower_bound, lower), ("exact", b.exact_success, exact), ("upper", b.upper_bound, upper)] {
        report.push(ReportRow::from_metric("c5", &Metric::value(format!("l10_{name}"), got, Some(want), Some(1e-3))));
    }

    // 6: basis-split outcome distributions over 10^6 samples per state.
    let n = 1_000_000;
    let counts = attacks::basis_split_distributions(n, sub(6))?;
    let expected = [
        [0.5, 0.0, 0.25, 0.25],
        [0.0, 0.5, 0.25, 0.25],
        [0.25, 0.25, 0.5, 0.0],
        [0.25, 0.25, 0.0, 0.5],
    ];
    for (t, (row, exp)) in counts.iter().zip(expected).enumerate() {
        for (o, (&c, e)) in row.iter().zip(exp).enumerate() {
            let est = c as f64 / n as f64;
            let name = format!("true_{}_outcome_{}", SPLIT_LABELS[t], SPLIT_LABELS[o]);
            report.push(ReportRow::from_metric("c6", &Metric::value(name, est, Some(e), Some(0.005))));
        }
    }

    // 7: CNOT attack.
    let r = attacks::cnot(&cfg(sub(7), 1, 8, 10_000), CnotMode::BothWays)?;
    report.push(ReportRow::from_metric("c7.both_ways", &metric(&r, "detection_rate")?.clone().with_tolerance(0.0)));
    report.push(ReportRow::from_metric("c7.both_ways", metric(&r, "ancilla_purity_min")?));
    let mi = metric(&r, "mutual_information_bits")?;
    report.push(ReportRow::below("c7.both_ways.mutual_information_bits_below_0.001", mi.estimate, 1e-3));
    let r = attacks::cnot(&cfg(sub(70), 1, 8, 2_000), CnotMode::ReturnOnly)?;
    report.push(ReportRow::from_metric(
        "c7.return_only",
        &metric(&r, "diagonal_check_detection")?.clone().with_tolerance(0.01),
    ));
    report.push(ReportRow::from_metric(
        "c7.return_only",
        &metric(&r, "per_check_detection")?.clone().with_tolerance(0.01),
    ));
    report.notes.extend(r.notes.iter().map(|n| format!("c7.return_only: {n}")));

    // 8 and 9: end-to-end sessions, N = 4, m = 8, δ = 0.25.
    let session = AttackConfig {
        num_parties: Some(4),
        ..cfg(sub(8), 1, 8, 1_000)
    };
    let mut classical = (0u64, 0u64);
    for scenario in Scenario::ALL {
        let s = attacks::sqsba_campaign(scenario, &session)?;
        classical.0 += s.classical;
        classical.1 += s.runs;
        campaign_rows(&mut report, scenario, &s);
    }
    report.push(ReportRow::from_metric(
        "c9",
        &Metric::proportion("bidders_classical_rate", classical.0, classical.1, Some(1.0)).with_tolerance(0.0),
    ));
    Ok(report)
}

fn exact_rate(name: &str, hits: u64, runs: u64) -> Metric {
    Metric::proportion(name, hits, runs, Some(1.0)).with_tolerance(0.0)
}

fn campaign_rows(report: &mut Report, scenario: Scenario, s: &CampaignStats) {
    let prefix = format!("c8.{}", scenario.name());
    let completed = s.runs - s.aborted;
    let mut rows = Vec::new();
    if scenario == Scenario::Honest {
        rows.push(exact_rate("fair_rate", s.fair, s.runs));
        rows.push(exact_rate("correct_winner_rate", s.correct_winner, s.runs));
    } else {
        rows.push(exact_rate("altered_unfair_rate", s.altered_unfair, s.altered));
        rows.push(Metric::proportion("altered_rate", s.altered, completed, None));
        rows.push(Metric::proportion("unfair_rate", s.unfair, s.runs, None));
        rows.push(Metric::value("fair_wrong_winner_runs", s.fair_wrong_winner as f64, None, None));
        if s.altered < completed {
            report.notes.push(format!(
                "{prefix}: {} of {completed} completed runs announced the winner's committed bid unchanged",
                completed - s.altered
            ));
        }
    }
    rows.push(exact_rate("privacy_rate", s.private, s.runs));
    rows.push(exact_rate("complete_transcript_rate", s.complete_transcript, s.runs));
    for m in &rows {
        report.push(ReportRow::from_metric(&prefix, m));
    }
}

/// Bounds at `l = 10` from the raw formulas, without the stats module.
fn independent_bounds_at_10(p: f64) -> (f64, f64, f64) {
    let l = 10.0;
    let x: f64 = 0.5;
    let d = x * (x / p).ln() + (1.0 - x) * ((1.0 - x) / (1.0 - p)).ln();
    let tail = (-l * d).exp();
    let lower = 1.0 - tail;
    let upper = 1.0 - tail / (8.0 * l * x * (1.0 - x)).sqrt();
    let mut choose = 1.0;
    let mut cdf = 0.0;
    for z in 0..=5i32 {
        if z > 0 {
            choose *= (10 - z + 1) as f64 / z as f64;
        }
        cdf += choose * p.powi(z) * (1.0 - p).powi(10 - z);
    }
    (lower, 1.0 - cdf, upper)
}
