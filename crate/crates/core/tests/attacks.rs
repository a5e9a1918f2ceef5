use qsba_core::attacks::*;
use qsba_core::auction::{BidString, PartyId};
use qsba_core::quantum::Bb84State;
use qsba_core::stats::BinomialModel;

fn cfg(l: usize, m: usize, trials: u64, seed: u64) -> AttackConfig {
    AttackConfig {
        l,
        m,
        trials,
        seed,
        ..AttackConfig::default()
    }
}

fn assert_pass(r: &AttackReport) {
    for m in &r.metrics {
        assert!(m.pass(), "{}: {} = {} [{}, {}] vs {:?}", r.name, m.name, m.estimate, m.ci_low, m.ci_high, m.exact);
    }
}

fn estimate(r: &AttackReport, name: &str) -> f64 {
    r.metric(name).unwrap_or_else(|| panic!("{} has no metric {name}", r.name)).estimate
}

fn p_s() -> f64 {
    (1.0 + std::f64::consts::FRAC_PI_4.sin()) / 2.0
}

#[test]
fn projective_attack_matches_closed_forms() {
    let r = semi_honest_projective(&cfg(1, 8, 20_000, 1)).unwrap();
    assert_pass(&r);
    assert!((r.metric("per_bit_success").unwrap().exact.unwrap() - 0.853_553_390_593_273_8).abs() < 1e-15);
    // Direct exponentiation of p(s).
    assert!((r.metric("whole_bid_success").unwrap().exact.unwrap() - 0.281_738_069_689_507_5).abs() < 1e-12);
    let z = std::f64::consts::PI / 8.0;
    assert!((r.metric("success_given_zero").unwrap().exact.unwrap() - z.cos().powi(2)).abs() < 1e-15);
}

#[test]
fn usd_attack_never_errs() {
    let r = semi_honest_usd(&cfg(1, 4, 50_000, 2)).unwrap();
    assert_pass(&r);
    assert_eq!(estimate(&r, "conclusive_wrong"), 0.0);
    assert!((r.metric("whole_bid_success").unwrap().exact.unwrap() - 0.007_359_312_880_714_9).abs() < 1e-12);
}

#[test]
fn majority_at_ten_copies() {
    let r = multicopy_majority(&cfg(10, 8, 10_000, 3)).unwrap();
    assert_pass(&r);
    let exact = r.metric("per_bit_success").unwrap().exact.unwrap();
    let oracle = 1.0 - BinomialModel::new(10, p_s()).unwrap().cdf(5).unwrap();
    assert!((exact - oracle).abs() < 1e-15);
    assert!((exact - 0.9911).abs() < 5e-4);
    assert!(estimate(&r, "per_bit_success") > 0.99);
}

#[test]
fn majority_with_one_copy_is_the_projective_attack() {
    let a = multicopy_majority(&cfg(1, 8, 5_000, 4)).unwrap();
    let b = semi_honest_projective(&cfg(1, 8, 5_000, 4)).unwrap();
    let ea = a.metric("per_bit_success").unwrap().exact.unwrap();
    let eb = b.metric("per_bit_success").unwrap().exact.unwrap();
    assert!((ea - eb).abs() < 1e-15);
}

#[test]
fn majority_is_monotone_in_odd_l() {
    let mut last = 0.0;
    for l in (1..=21).step_by(2) {
        let r = multicopy_majority(&cfg(l, 1, 2_000, l as u64)).unwrap();
        let exact = r.metric("per_bit_success").unwrap().exact.unwrap();
        assert!(exact >= last, "l={l}");
        last = exact;
        assert_pass(&r);
    }
}

#[test]
fn multicopy_usd_cases() {
    let r = multicopy_usd(&cfg(10, 16, 20_000, 5)).unwrap();
    assert_pass(&r);
    assert_eq!(r.metric("inconclusive_rate").unwrap().exact, Some(0.03125));
    assert!((r.metric("whole_bid_success").unwrap().exact.unwrap() - 0.601_710_303_432_072_3).abs() < 1e-12);
    assert_eq!(estimate(&r, "conclusive_wrong"), 0.0);
    let r = multicopy_usd(&cfg(2, 1, 20_000, 6)).unwrap();
    assert!((r.metric("inconclusive_rate").unwrap().exact.unwrap() - 0.5).abs() < 1e-15);
    assert_pass(&r);
}

#[test]
fn collusion_matches_multicopy() {
    for mode in [CollusionMode::Majority, CollusionMode::Usd] {
        let r = collusion(&cfg(4, 4, 1_000, 7), mode).unwrap();
        assert_pass(&r);
    }
}

#[test]
fn basis_split_closed_form_matches_enumeration() {
    for l in (2..=40).step_by(2) {
        let exact = basis_split_block_success(l, Bb84State::Zero).unwrap();
        assert!((exact - (1.0 - 2f64.powf(-(l as f64) / 2.0))).abs() < 1e-12, "l={l}");
    }
    assert!(basis_split_block_success(3, Bb84State::Zero).is_err());
}

#[test]
fn basis_split_attack_agrees_with_oracle() {
    for l in [2, 4, 40] {
        let r = zhang2_basis_split(&cfg(l, 8, 5_000, 8), Bb84State::Zero).unwrap();
        assert_pass(&r);
    }
    assert!(zhang2_basis_split(&cfg(3, 8, 10, 8), Bb84State::Zero).is_err());
}

#[test]
fn basis_split_distributions_match() {
    let expected = [
        [0.5, 0.0, 0.25, 0.25],
        [0.0, 0.5, 0.25, 0.25],
        [0.25, 0.25, 0.5, 0.0],
        [0.25, 0.25, 0.0, 0.5],
    ];
    let n = 100_000;
    let counts = basis_split_distributions(n, 9).unwrap();
    for (row, exp) in counts.iter().zip(expected) {
        assert_eq!(row.iter().sum::<u64>(), n);
        for (&c, e) in row.iter().zip(exp) {
            assert!((c as f64 / n as f64 - e).abs() < 0.01);
            if e == 0.0 {
                assert_eq!(c, 0);
            }
        }
    }
}

#[test]
fn zhang1_replacement_modes() {
    let c = AttackConfig {
        trials: 3_000,
        seed: 10,
        m: 4,
        ..AttackConfig::default()
    };
    assert_pass(&zhang1_replacement(&c, ReplaceMode::EncodingPair).unwrap());
    assert_pass(&zhang1_replacement(&c, ReplaceMode::Bb84).unwrap());
}

#[test]
fn disturbance_modes() {
    let c = cfg(1, 8, 2_000, 11);
    let r = disturbance(&c, DisturbanceMode::NoDecoy).unwrap();
    assert_pass(&r);
    assert_eq!(estimate(&r, "detection_rate"), 0.0);
    assert_eq!(estimate(&r, "decoded_complement_rate"), 1.0);
    let r = disturbance(&c, DisturbanceMode::RemedyFlip).unwrap();
    assert_pass(&r);
    assert_eq!(estimate(&r, "detection_rate"), 1.0);
    assert_pass(&disturbance(&c, DisturbanceMode::RemedyRandom).unwrap());
    let r = disturbance(&AttackConfig { decoys: 0, ..c }, DisturbanceMode::RemedyFlip).unwrap();
    assert_eq!(estimate(&r, "detection_rate"), 0.0);
}

#[test]
fn liu_false_permutation_succeeds_whenever_an_alternative_exists() {
    let r = false_permutation_liu(&cfg(1, 8, 1_000, 12)).unwrap();
    assert_pass(&r);
    // 1 − 4/2^8 of 8-bit winning bids have unequal blocks, but winners skew high.
    assert!(estimate(&r, "success_rate") > 0.9);
    let bid = BidString::from_value(PartyId(1), 0b10, 2).unwrap();
    assert!(lowest_rearrangement(&bid).unwrap().is_none());
}

#[test]
fn cnot_both_ways_is_invisible() {
    let r = cnot(&cfg(1, 8, 500, 13), CnotMode::BothWays).unwrap();
    assert_pass(&r);
    assert_eq!(estimate(&r, "detection_rate"), 0.0);
}

#[test]
fn cnot_return_only_reads_every_bit() {
    let r = cnot(&cfg(1, 8, 500, 14), CnotMode::ReturnOnly).unwrap();
    assert_pass(&r);
    assert_eq!(estimate(&r, "enc_bit_recovery"), 1.0);
    assert!((estimate(&r, "diagonal_check_detection") - 0.5).abs() < 0.03);
}

#[test]
fn swap_attack_with_and_without_defense() {
    let r = intercept_resend_swap(&cfg(1, 8, 500, 15), false).unwrap();
    assert_pass(&r);
    assert_eq!(estimate(&r, "detection_rate"), 0.0);
    let r = intercept_resend_swap(&cfg(1, 8, 500, 16), true).unwrap();
    assert_pass(&r);
    // 32 CTRL checks per bidder; the run is almost surely aborted.
    assert!(estimate(&r, "detection_rate") > 0.999);
}

#[test]
fn campaigns_end_unfair_when_the_bid_is_altered() {
    let c = cfg(1, 8, 300, 17);
    let honest = sqsba_campaign(Scenario::Honest, &c).unwrap();
    assert_eq!(honest.fair, honest.runs);
    assert_eq!(honest.correct_winner, honest.runs);
    for s in [Scenario::FalsePermutation, Scenario::Disturbance, Scenario::SwapNoDefense] {
        let st = sqsba_campaign(s, &c).unwrap();
        assert_eq!(st.aborted, 0, "{s:?}");
        assert_eq!(st.altered_unfair, st.altered, "{s:?}");
        assert_eq!(st.classical, st.runs, "{s:?}");
        assert_eq!(st.private, st.runs, "{s:?}");
    }
    let fp = sqsba_campaign(Scenario::FalsePermutation, &c).unwrap();
    assert_eq!(fp.altered, fp.runs);
    assert_pass(&false_permutation_sqsba(&c).unwrap());
}

#[test]
fn commitments_hide_bids_from_outsiders_only() {
    let r = commitment_reader(&cfg(1, 8, 20_000, 18)).unwrap();
    assert_pass(&r);
    assert_eq!(estimate(&r, "receiver_bruteforce_recovery"), 1.0);
}
