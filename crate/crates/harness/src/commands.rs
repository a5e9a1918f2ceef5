use qsba_core::attacks::{
    self, AttackConfig, AttackReport, CnotMode, CollusionMode, DisturbanceMode, Metric, ReplaceMode,
};
use qsba_core::auction::{select_winner, BidString, PartyId, Verdict};
use qsba_core::channel::Honest;
use qsba_core::legacy::{run_legacy, DecoyPolicy, LegacyConfig, Variant};
use qsba_core::quantum::Bb84State;
use qsba_core::rng::run_trials;
use qsba_core::sqsba::{run_sqsba, SessionConfig};
use qsba_core::stats::{closed_forms, success_bounds, BinomialModel};

use crate::config::ExperimentConfig;
use crate::report::{Report, ReportRow};
use crate::HarnessError;

/// Attack names accepted by `qsba attack`, each followed by its aliases.
pub const ATTACKS: [&[&str]; 12] = [
    &["semi_honest_projective", "projective"],
    &["semi_honest_usd"],
    &["multicopy_majority", "majority"],
    &["multicopy_usd", "usd"],
    &["collusion"],
    &["zhang2_basis_split", "basis_split"],
    &["zhang1_replacement", "zhang1_replace"],
    &["cnot"],
    &["intercept_resend_swap", "swap"],
    &["false_permutation"],
    &["disturbance"],
    &["commitment_reader"],
];

pub const PROTOCOLS: [&str; 4] = ["liu", "zhang1", "zhang2", "sqsba"];

pub fn attack_config(c: &ExperimentConfig) -> AttackConfig {
    AttackConfig {
        l: c.l,
        m: c.m,
        trials: c.trials,
        seed: c.seed,
        num_parties: c.n,
        delta: c.delta,
        error_threshold: c.threshold,
        decoys: c.decoys,
        defense: c.defense.unwrap_or(true),
    }
}

fn canonical(name: &str) -> Option<&'static str> {
    ATTACKS.iter().find(|names| names.contains(&name)).map(|names| names[0])
}

fn unknown_mode(attack: &str, mode: &str, allowed: &[&str]) -> HarnessError {
    HarnessError::Usage(format!("attack `{attack}` has no mode `{mode}`; expected one of {}", allowed.join(", ")))
}

/// Picks the listed variants named by `mode`, or all of them when it is absent.
fn select<T: Copy>(attack: &str, mode: Option<&str>, options: &[(&str, T)]) -> Result<Vec<(String, T)>, HarnessError> {
    let all = || options.iter().map(|(n, v)| (format!("{attack}.{n}"), *v)).collect();
    match mode {
        None => Ok(all()),
        Some(m) => options
            .iter()
            .find(|(n, _)| *n == m)
            .map(|(n, v)| vec![(format!("{attack}.{n}"), *v)])
            .ok_or_else(|| unknown_mode(attack, m, &options.iter().map(|(n, _)| *n).collect::<Vec<_>>())),
    }
}

fn no_mode(attack: &str, mode: Option<&str>) -> Result<(), HarnessError> {
    match mode {
        Some(m) => Err(HarnessError::Usage(format!("attack `{attack}` takes no mode, got `{m}`"))),
        None => Ok(()),
    }
}

/// Runs one named attack, with every mode unless one is selected.
pub fn run_attack(c: &ExperimentConfig) -> Result<Report, HarnessError> {
    let name = c.target.as_deref().ok_or_else(|| HarnessError::Usage("attack name required".into()))?;
    let attack = canonical(name).ok_or_else(|| {
        let names: Vec<&str> = ATTACKS.iter().flat_map(|n| n.iter().copied()).collect();
        HarnessError::Usage(format!("unknown attack `{name}`; expected one of {}", names.join(", ")))
    })?;
    let cfg = attack_config(c);
    let mode = c.mode.as_deref();
    let mut out: Vec<(String, AttackReport)> = Vec::new();
    match attack {
        "semi_honest_projective" | "semi_honest_usd" | "multicopy_majority" | "multicopy_usd" | "commitment_reader" => {
            no_mode(attack, mode)?;
            let r = match attack {
                "semi_honest_projective" => attacks::semi_honest_projective(&cfg)?,
                "semi_honest_usd" => attacks::semi_honest_usd(&cfg)?,
                "multicopy_majority" => attacks::multicopy_majority(&cfg)?,
                "multicopy_usd" => attacks::multicopy_usd(&cfg)?,
                _ => attacks::commitment_reader(&cfg)?,
            };
            out.push((attack.to_string(), r));
        }
        "collusion" => {
            for (p, m) in select(attack, mode, &[("majority", CollusionMode::Majority), ("usd", CollusionMode::Usd)])? {
                out.push((p, attacks::collusion(&cfg, m)?));
            }
        }
        "zhang2_basis_split" => {
            let states = [
                ("zero", Bb84State::Zero),
                ("one", Bb84State::One),
                ("plus", Bb84State::Plus),
                ("minus", Bb84State::Minus),
            ];
            let chosen = match mode {
                None => vec![(format!("{attack}.zero"), Bb84State::Zero)],
                Some(_) => select(attack, mode, &states)?,
            };
            for (p, q) in chosen {
                out.push((p, attacks::zhang2_basis_split(&cfg, q)?));
            }
        }
        "zhang1_replacement" => {
            for (p, m) in select(attack, mode, &[("encoding_pair", ReplaceMode::EncodingPair), ("bb84", ReplaceMode::Bb84)])? {
                out.push((p, attacks::zhang1_replacement(&cfg, m)?));
            }
        }
        "cnot" => {
            for (p, m) in select(attack, mode, &[("both_ways", CnotMode::BothWays), ("return_only", CnotMode::ReturnOnly)])? {
                out.push((p, attacks::cnot(&cfg, m)?));
            }
        }
        "intercept_resend_swap" => {
            no_mode(attack, mode)?;
            let defenses = match c.defense {
                Some(d) => vec![d],
                None => vec![false, true],
            };
            for d in defenses {
                let p = format!("{attack}.defense_{}", if d { "on" } else { "off" });
                out.push((p, attacks::intercept_resend_swap(&cfg, d)?));
            }
        }
        "false_permutation" => {
            for (p, target) in select(attack, mode, &[("liu", 0u8), ("sqsba", 1u8)])? {
                let r = if target == 0 {
                    attacks::false_permutation_liu(&cfg)?
                } else {
                    attacks::false_permutation_sqsba(&cfg)?
                };
                out.push((p, r));
            }
        }
        "disturbance" => {
            let modes = [
                ("no_decoy", DisturbanceMode::NoDecoy),
                ("remedy_flip", DisturbanceMode::RemedyFlip),
                ("remedy_random", DisturbanceMode::RemedyRandom),
            ];
            for (p, m) in select(attack, mode, &modes)? {
                out.push((p, attacks::disturbance(&cfg, m)?));
            }
        }
        _ => unreachable!("every canonical name is handled"),
    }
    let mut report = Report::new(format!("attack {attack}"), c.seed);
    for (prefix, r) in &out {
        report.add_attack(prefix, r);
    }
    Ok(report)
}

/// Honest protocol sessions: every run must be fair and pick the highest bid.
pub fn run_protocol(c: &ExperimentConfig) -> Result<Report, HarnessError> {
    let target = c.target.as_deref().unwrap_or("all");
    let targets: Vec<&str> = match target {
        "all" => PROTOCOLS.to_vec(),
        t if PROTOCOLS.contains(&t) => vec![t],
        t => {
            return Err(HarnessError::Usage(format!(
                "unknown protocol `{t}`; expected all or one of {}",
                PROTOCOLS.join(", ")
            )))
        }
    };
    let parties = c.n.unwrap_or(4);
    let mut report = Report::new(format!("protocol {target}"), c.seed);
    for t in targets {
        let [fair, correct, classical] = honest_sessions(t, parties, c)?;
        report.add_attack(
            t,
            AttackReport::new(t)
                .push(Metric::proportion("fair_rate", fair, c.trials, Some(1.0)).with_tolerance(0.0))
                .push(Metric::proportion("correct_winner_rate", correct, c.trials, Some(1.0)).with_tolerance(0.0))
                .push(Metric::proportion(
                    "bidders_classical_rate",
                    classical,
                    c.trials,
                    Some(if t == "sqsba" { 1.0 } else { 0.0 }),
                ).with_tolerance(0.0)),
        );
    }
    Ok(report)
}

fn honest_sessions(target: &str, parties: usize, c: &ExperimentConfig) -> Result<[u64; 3], HarnessError> {
    let bidders = parties.checked_sub(1).filter(|&b| b >= 2).ok_or_else(|| {
        HarnessError::Usage(format!("{parties} parties; need an auctioneer and two bidders"))
    })?;
    let session = SessionConfig {
        error_threshold: c.threshold,
        ..SessionConfig::new(parties, c.m, c.delta)?
    };
    let variant = match target {
        "liu" => Some(Variant::Liu),
        "zhang1" => Some(Variant::Zhang1),
        "zhang2" => Some(Variant::Zhang2),
        _ => None,
    };
    let legacy = match variant {
        Some(v) => Some(LegacyConfig {
            decoys: DecoyPolicy::new(c.decoys, c.threshold)?,
            ..LegacyConfig::published(v)
        }),
        None => None,
    };
    let counts = run_trials(
        c.seed,
        c.trials,
        Ok([0u64; 3]),
        |_, rng| {
            let bids: Vec<BidString> =
                (1..=bidders).map(|k| BidString::random(PartyId(k), c.m, rng)).collect::<Result<_, _>>()?;
            let (outcome, classical) = match (variant, &legacy) {
                (Some(v), Some(l)) => {
                    let run = run_legacy(v, &bids, l, &mut Honest, rng)?;
                    (run.outcome, run.audit.bidders_are_classical())
                }
                _ => {
                    let run = run_sqsba(&session, &bids, &mut Honest, rng)?;
                    (run.outcome, run.audit.bidders_are_classical())
                }
            };
            let best = select_winner(&bids).map(|k| bids[k].owner);
            Ok([
                u64::from(outcome.verdict == Verdict::Fair),
                u64::from(outcome.winner.is_some() && outcome.winner == best),
                u64::from(classical),
            ])
        },
        |a: qsba_core::Result<[u64; 3]>, b| {
            let (a, b) = (a?, b?);
            Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]])
        },
    )?;
    Ok(counts)
}

/// Tail bounds around the exact majority-vote success.
pub fn run_bounds(c: &ExperimentConfig) -> Result<Report, HarnessError> {
    let cf = closed_forms();
    let mut report = Report::new("bounds", c.seed);
    let l = u32::try_from(c.l).map_err(|_| HarnessError::Usage(format!("l = {} too large", c.l)))?;
    let r = success_bounds(&BinomialModel::new(l, cf.p_success)?);
    let prefix = format!("bounds.l{l}");
    for (name, v) in [("lower", r.lower_bound), ("exact", r.exact_success), ("upper", r.upper_bound)] {
        report.push(ReportRow::from_metric(&prefix, &Metric::value(name, v, None, None)));
    }
    if r.valid {
        let holds = f64::from(u8::from(r.sandwich_holds()));
        report.push(ReportRow::from_metric(&prefix, &Metric::value("sandwich", holds, Some(1.0), Some(0.0))));
    } else {
        report.notes.push(format!("l = {l} is outside the regime where the bounds apply"));
    }
    let sweep: Vec<bool> = (2..=64u32)
        .map(|l| BinomialModel::new(l, cf.p_success).map(|m| success_bounds(&m).sandwich_holds()))
        .collect::<Result<_, _>>()?;
    let held = sweep.iter().filter(|&&b| b).count() as u64;
    report.push(ReportRow::from_metric(
        "bounds",
        &Metric::proportion("sandwich_l2_to_l64", held, sweep.len() as u64, Some(1.0)).with_tolerance(0.0),
    ));
    report.push(ReportRow::from_metric(
        "bounds",
        &Metric::value("all_inconclusive", cf.all_inconclusive(l), None, None),
    ));
    report.notes.push(qsba_core::stats::ERROR_SUM_NOTE.to_string());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use qsba_core::attacks::Scenario;

    use super::*;

    #[test]
    fn aliases_resolve() {
        assert_eq!(canonical("usd"), Some("multicopy_usd"));
        assert_eq!(canonical("projective"), Some("semi_honest_projective"));
        assert_eq!(canonical("swap"), Some("intercept_resend_swap"));
        assert_eq!(canonical("nope"), None);
    }

    #[test]
    fn unknown_attack_and_mode_are_usage_errors() {
        let mut c = ExperimentConfig {
            target: Some("nope".into()),
            trials: 10,
            ..ExperimentConfig::default()
        };
        assert!(matches!(run_attack(&c), Err(HarnessError::Usage(_))));
        c.target = Some("cnot".into());
        c.mode = Some("sideways".into());
        assert!(matches!(run_attack(&c), Err(HarnessError::Usage(_))));
        c.target = Some("projective".into());
        assert!(matches!(run_attack(&c), Err(HarnessError::Usage(_))));
    }

    #[test]
    fn scenario_names_are_stable() {
        let names: Vec<&str> = Scenario::ALL.iter().map(|s| s.name()).collect();
        assert_eq!(names, ["honest", "false_permutation", "disturbance", "swap_no_defense"]);
    }
}
