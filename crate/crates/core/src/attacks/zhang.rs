use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::report::{AttackReport, Metric};
use super::{add, AttackConfig};
use crate::auction::{BidString, PartyId};
use crate::channel::{Adversary, Link, Parcel, Phase};
use crate::error::{Error, Result};
use crate::legacy::{run_zhang1, zhang1_state, zhang2_encode, LegacyConfig, Variant};
use crate::quantum::{
    measure_povm, measure_projective, outcome_probabilities, states_equal_up_to_phase, tau_basis, usd_povm, Basis,
    Bb84State, Povm, ProjBasis, StateVector,
};
use crate::rng::run_trials;
use crate::stats::{closed_forms, BinomialModel, ClosedForms, Z_99};
use crate::transcript::Actor;

/// Outcome labels of the basis-split measurement, in report order.
pub const SPLIT_LABELS: [&str; 4] = ["0", "1", "+", "-"];

/// Minimum-error guess of a `|0⟩`/`|+⟩` qubit: `τ1` reads 0, `τ2` reads 1.
fn tau_guess(state: &StateVector, rng: &mut ChaCha8Rng) -> Result<bool> {
    Ok(measure_projective(state, tau_basis(), &[0], rng)?.outcome_index == 1)
}

/// USD inference: `Some(bit)` when conclusive. Conclusive answers are never wrong.
fn usd_guess(state: &StateVector, povm: &Povm, rng: &mut dyn RngCore) -> Result<Option<bool>> {
    Ok(match measure_povm(state, povm, rng)?.outcome_index {
        0 => Some(false),
        1 => Some(true),
        _ => None,
    })
}

fn random_bid(m: usize, rng: &mut ChaCha8Rng) -> BidString {
    BidString::random(PartyId(1), m, rng).expect("validated bid length")
}

/// Single copy measured in the `τ` basis.
pub fn semi_honest_projective(cfg: &AttackConfig) -> Result<AttackReport> {
    cfg.validate()?;
    if cfg.l != 1 {
        return Err(Error::InvalidConfig("the semi-honest attack uses a single copy (l = 1)".into()));
    }
    let m = cfg.m;
    // [bits ok, bids ok, zero-bits ok, zero bits]
    let counts = run_trials(
        cfg.seed,
        cfg.trials,
        Ok([0u64; 4]),
        |_, rng| {
            let bid = random_bid(m, rng);
            let mut c = [0u64; 4];
            let mut all = true;
            for &bit in bid.bits() {
                let ok = tau_guess(&zhang1_state(bit).state(), rng)? == bit;
                c[0] += u64::from(ok);
                all &= ok;
                if !bit {
                    c[2] += u64::from(ok);
                    c[3] += 1;
                }
            }
            c[1] = u64::from(all);
            Ok(c)
        },
        merge,
    )?;
    let cf = closed_forms();
    let bits = cfg.trials * m as u64;
    let mut r = AttackReport::new("semi_honest_projective");
    r.push(Metric::proportion("per_bit_success", counts[0], bits, Some(cf.p_success)))
        .push(Metric::proportion(
            "whole_bid_success",
            counts[1],
            cfg.trials,
            Some(ClosedForms::whole_bid(cf.p_success, m as u32)),
        ))
        .push(Metric::proportion(
            "success_given_zero",
            counts[2],
            counts[3],
            Some(FRAC_PI_8.cos().powi(2)),
        ));
    r.note("each bit measured once in the tau basis; the bidder's own copy is left collapsed");
    Ok(r)
}

/// Single copy measured with the unambiguous-discrimination POVM.
pub fn semi_honest_usd(cfg: &AttackConfig) -> Result<AttackReport> {
    cfg.validate()?;
    if cfg.l != 1 {
        return Err(Error::InvalidConfig("the semi-honest attack uses a single copy (l = 1)".into()));
    }
    let mut r = usd_report(cfg, "semi_honest_usd")?;
    r.metrics.retain(|m| m.name != "per_copy_inconclusive_rate");
    Ok(r)
}

/// Majority vote over `l` copies measured in the `τ` basis.
pub fn multicopy_majority(cfg: &AttackConfig) -> Result<AttackReport> {
    cfg.check_copies()?;
    let (l, m) = (cfg.l, cfg.m);
    let counts = run_trials(
        cfg.seed,
        cfg.trials,
        Ok([0u64; 3]),
        |_, rng| {
            let bid = random_bid(m, rng);
            let mut tau1 = Vec::with_capacity(m);
            for &bit in bid.bits() {
                let state = zhang1_state(bit).state();
                let mut n = 0;
                for _ in 0..l {
                    n += usize::from(!tau_guess(&state, rng)?);
                }
                tau1.push(n);
            }
            Ok(majority_tally(&bid, &tau1, l))
        },
        merge,
    )?;
    majority_report("multicopy_majority", cfg, counts)
}

/// `[strict-majority correct bits, decoded-correct bits, strict whole bids]`.
fn majority_tally(bid: &BidString, tau1: &[usize], l: usize) -> [u64; 3] {
    let need = l / 2 + 1;
    let mut c = [0u64; 3];
    let mut all = true;
    for (&bit, &n) in bid.bits().iter().zip(tau1) {
        let correct = if bit { l - n } else { n };
        let strict = correct >= need;
        // Bit 0 needs a strict majority of τ1; ties read as 1.
        let decoded = n < need;
        c[0] += u64::from(strict);
        c[1] += u64::from(decoded == bit);
        all &= strict;
    }
    c[2] = u64::from(all);
    c
}

fn majority_report(name: &str, cfg: &AttackConfig, counts: [u64; 3]) -> Result<AttackReport> {
    let cf = closed_forms();
    let l = cfg.l as u32;
    let model = BinomialModel::new(l, cf.p_success)?;
    let strict = model.survival(l / 2 + 1)?;
    let decoded = 0.5 * (strict + model.survival(l.div_ceil(2))?);
    let bits = cfg.trials * cfg.m as u64;
    let mut r = AttackReport::new(name);
    r.push(Metric::proportion("per_bit_success", counts[0], bits, Some(strict)))
        .push(Metric::proportion("per_bit_decoded_correct", counts[1], bits, Some(decoded)))
        .push(Metric::proportion(
            "whole_bid_success",
            counts[2],
            cfg.trials,
            Some(ClosedForms::whole_bid(strict, cfg.m as u32)),
        ));
    r.note(format!(
        "per_bit_success counts bits with a strict majority of correct outcomes (at least {} of {l})",
        l / 2 + 1
    ));
    if l % 2 == 0 {
        r.note("per_bit_decoded_correct applies the decoder, which reads a tied vote as 1");
    }
    Ok(r)
}

/// Unambiguous discrimination on each of `l` copies; a bit is recovered when
/// any copy is conclusive.
pub fn multicopy_usd(cfg: &AttackConfig) -> Result<AttackReport> {
    cfg.check_copies()?;
    usd_report(cfg, "multicopy_usd")
}

fn usd_report(cfg: &AttackConfig, name: &str) -> Result<AttackReport> {
    let (l, m) = (cfg.l, cfg.m);
    let povm = usd_povm(FRAC_PI_4)?;
    // [copies inconclusive, conclusive but wrong, bits all inconclusive, bids fully recovered]
    let counts = run_trials(
        cfg.seed,
        cfg.trials,
        Ok([0u64; 4]),
        |_, rng| {
            let bid = random_bid(m, rng);
            let mut c = [0u64; 4];
            let mut all = true;
            for &bit in bid.bits() {
                let state = zhang1_state(bit).state();
                let mut recovered = false;
                for _ in 0..l {
                    match usd_guess(&state, &povm, rng)? {
                        Some(g) => {
                            recovered = true;
                            c[1] += u64::from(g != bit);
                        }
                        None => c[0] += 1,
                    }
                }
                c[2] += u64::from(!recovered);
                all &= recovered;
            }
            c[3] = u64::from(all);
            Ok(c)
        },
        merge,
    )?;
    usd_metrics(name, cfg, counts)
}

fn usd_metrics(name: &str, cfg: &AttackConfig, counts: [u64; 4]) -> Result<AttackReport> {
    let cf = closed_forms();
    let p_all = cf.all_inconclusive(cfg.l as u32);
    let bits = cfg.trials * cfg.m as u64;
    let mut r = AttackReport::new(name);
    r.push(Metric::proportion("inconclusive_rate", counts[2], bits, Some(p_all)))
        .push(Metric::proportion(
            "per_copy_inconclusive_rate",
            counts[0],
            bits * cfg.l as u64,
            Some(cf.p_inconclusive),
        ))
        .push(Metric::value("conclusive_wrong", counts[1] as f64, Some(0.0), Some(0.0)))
        .push(Metric::proportion(
            "whole_bid_success",
            counts[3],
            cfg.trials,
            Some(ClosedForms::whole_bid(1.0 - p_all, cfg.m as u32)),
        ));
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CollusionMode {
    Majority,
    Usd,
}

/// Colluding receivers of one bidder's confirmation qubits. Each colluder
/// measures its own copy on arrival.
struct CollusionTap<'a> {
    mode: CollusionMode,
    povm: &'a Povm,
    /// Per position: `τ1` count, or USD inferences.
    tau1: Vec<usize>,
    usd: Vec<Vec<Option<bool>>>,
}

impl Adversary for CollusionTap<'_> {
    fn on_transit(&mut self, link: &Link, parcels: &mut Vec<Parcel>, rng: &mut dyn RngCore) -> Result<bool> {
        if link.phase != Phase::LiuConfirmation || link.from != Actor::Bidder(1) {
            return Ok(false);
        }
        if parcels.len() != self.tau1.len() {
            return Err(Error::ProtocolFault("confirmation sequence length differs from the bid".into()));
        }
        for (k, p) in parcels.iter_mut().enumerate() {
            match self.mode {
                CollusionMode::Majority => {
                    self.tau1[k] += usize::from(p.measure_travel_in(&[0], tau_basis(), rng)? == 0);
                }
                CollusionMode::Usd => {
                    let state = p.travel_state().ok_or(Error::ProtocolFault("entangled copy".into()))?;
                    let g = usd_guess(&state, self.povm, rng)?;
                    // The copy is consumed; resend the inferred state, or a guess.
                    let resend = g.unwrap_or_else(|| rng.random::<bool>());
                    *p = Parcel::single(zhang1_state(resend).state());
                    self.usd[k].push(g);
                }
            }
        }
        Ok(false)
    }
}

/// `l` colluding bidders pool the confirmation copies they each legitimately
/// receive from bidder 1 in full runs of the `|0⟩`/`|+⟩` protocol.
pub fn collusion(cfg: &AttackConfig, mode: CollusionMode) -> Result<AttackReport> {
    cfg.check_copies()?;
    let (l, m) = (cfg.l, cfg.m);
    let bidders = l + 1;
    let povm = usd_povm(FRAC_PI_4)?;
    let legacy = LegacyConfig::published(Variant::Zhang1);
    let counts = run_trials(
        cfg.seed,
        cfg.trials,
        Ok([0u64; 4]),
        |_, rng| {
            let bids: Vec<BidString> = (1..=bidders)
                .map(|k| BidString::random(PartyId(k), m, rng))
                .collect::<Result<_>>()?;
            let mut tap = CollusionTap {
                mode,
                povm: &povm,
                tau1: vec![0; m],
                usd: vec![Vec::new(); m],
            };
            run_zhang1(&bids, &legacy, &mut tap, rng)?;
            if mode == CollusionMode::Usd && tap.usd.iter().all(Vec::is_empty) {
                return Err(Error::ProtocolFault("no confirmation copies were captured".into()));
            }
            Ok(match mode {
                CollusionMode::Majority => {
                    let t = majority_tally(&bids[0], &tap.tau1, l);
                    [t[0], t[1], t[2], 0]
                }
                CollusionMode::Usd => {
                    let mut c = [0u64; 4];
                    let mut all = true;
                    for (&bit, guesses) in bids[0].bits().iter().zip(&tap.usd) {
                        let mut recovered = false;
                        for g in guesses {
                            match g {
                                Some(g) => {
                                    recovered = true;
                                    c[1] += u64::from(*g != bit);
                                }
                                None => c[0] += 1,
                            }
                        }
                        c[2] += u64::from(!recovered);
                        all &= recovered;
                    }
                    c[3] = u64::from(all);
                    c
                }
            })
        },
        merge,
    )?;
    let direct_cfg = AttackConfig {
        seed: cfg.seed ^ 0x5eed_c011_u64,
        ..cfg.clone()
    };
    let mut r = match mode {
        CollusionMode::Majority => {
            let mut r = majority_report("collusion_majority", cfg, [counts[0], counts[1], counts[2]])?;
            let direct = multicopy_majority(&direct_cfg)?;
            let d = direct.metric("per_bit_success").expect("metric present");
            r.push(Metric::difference(
                "per_bit_success_minus_multicopy",
                (counts[0], cfg.trials * m as u64),
                (d.successes, d.trials),
                Z_99,
            ));
            r
        }
        CollusionMode::Usd => {
            let mut r = usd_metrics("collusion_usd", cfg, counts)?;
            let direct = multicopy_usd(&direct_cfg)?;
            let d = direct.metric("inconclusive_rate").expect("metric present");
            r.push(Metric::difference(
                "inconclusive_rate_minus_multicopy",
                (counts[2], cfg.trials * m as u64),
                (d.successes, d.trials),
                Z_99,
            ));
            r
        }
    };
    r.note(format!("copies come from {l} distinct colluders in full protocol runs with {bidders} bidders"));
    Ok(r)
}

/// Candidate block states and their `P(Z = 1)`, `P(X = −)`.
fn split_candidates(q: Bb84State) -> Result<[(StateVector, f64, f64); 4]> {
    let mut out = [(q.state(), 0.0, 0.0); 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let c = zhang2_encode(&q.state(), (k & 2 != 0, k & 1 != 0))?;
        let pz = outcome_probabilities(&c, ProjBasis::z(), &[0])?[1];
        let px = outcome_probabilities(&c, ProjBasis::x(), &[0])?[1];
        *slot = (c, snap(pz), snap(px));
    }
    Ok(out)
}

fn snap(p: f64) -> f64 {
    if p < 1e-12 {
        0.0
    } else if p > 1.0 - 1e-12 {
        1.0
    } else {
        p
    }
}

fn log_lik(ones: usize, zeros: usize, p: f64) -> f64 {
    let term = |n: usize, q: f64| if n == 0 { 0.0 } else { n as f64 * q.ln() };
    term(ones, p) + term(zeros, 1.0 - p)
}

/// Candidates maximizing the likelihood of `z1` ones among `h` Z outcomes
/// and `x1` minus outcomes among `h` X outcomes.
fn ml_set(cands: &[(StateVector, f64, f64); 4], h: usize, z1: usize, x1: usize) -> Vec<usize> {
    let ll: Vec<f64> = cands
        .iter()
        .map(|&(_, pz, px)| log_lik(z1, h - z1, pz) + log_lik(x1, h - x1, px))
        .collect();
    let best = ll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..4).filter(|&k| ll[k] >= best - 1e-9).collect()
}

fn binomial_masses(n: usize, p: f64) -> Result<Vec<f64>> {
    Ok(if p == 0.0 {
        (0..=n).map(|k| if k == 0 { 1.0 } else { 0.0 }).collect()
    } else if p == 1.0 {
        (0..=n).map(|k| if k == n { 1.0 } else { 0.0 }).collect()
    } else {
        BinomialModel::new(n as u32, p)?.pmf_terms()
    })
}

fn split_halves(l: usize) -> Result<usize> {
    if l < 2 || l % 2 == 1 {
        return Err(Error::InvalidConfig(format!("basis split needs an even l ≥ 2, got {l}")));
    }
    Ok(l / 2)
}

/// Exact block success of the basis-split attack with uniformly random
/// tie-breaking, by enumeration of every `(Z-count, X-count)` outcome.
pub fn basis_split_block_success(l: usize, q: Bb84State) -> Result<f64> {
    let h = split_halves(l)?;
    let cands = split_candidates(q)?;
    let mut total = 0.0;
    for (k, &(_, pz, px)) in cands.iter().enumerate() {
        let zm = binomial_masses(h, pz)?;
        let xm = binomial_masses(h, px)?;
        for (z1, &a) in zm.iter().enumerate() {
            for (x1, &b) in xm.iter().enumerate() {
                if a * b == 0.0 {
                    continue;
                }
                let set = ml_set(&cands, h, z1, x1);
                if set.contains(&k) {
                    total += a * b / set.len() as f64;
                }
            }
        }
    }
    Ok(total / 4.0)
}

/// Outcome counts of the split measurement, one row per true state in
/// [`Bb84State::ALL`] order and one column per [`SPLIT_LABELS`] entry.
/// Half the samples of each state are measured in Z and half in X.
pub fn basis_split_distributions(samples_per_state: u64, seed: u64) -> Result<[[u64; 4]; 4]> {
    const CHUNK: u64 = 1 << 12;
    let chunks = samples_per_state.div_ceil(CHUNK);
    let flat = run_trials(
        seed,
        4 * chunks,
        Ok([0u64; 16]),
        |t, rng| {
            let s = (t / chunks) as usize;
            let start = (t % chunks) * CHUNK;
            let end = (start + CHUNK).min(samples_per_state);
            let state = Bb84State::ALL[s].state();
            let mut c = [0u64; 16];
            for i in start..end {
                let (basis, offset) = if i % 2 == 0 { (Basis::Z, 0) } else { (Basis::X, 2) };
                let k = measure_projective(&state, ProjBasis::for_basis(basis), &[0], rng)?.outcome_index;
                c[4 * s + offset + k] += 1;
            }
            Ok(c)
        },
        merge,
    )?;
    let mut out = [[0u64; 4]; 4];
    for (s, row) in out.iter_mut().enumerate() {
        row.copy_from_slice(&flat[4 * s..4 * s + 4]);
    }
    Ok(out)
}

fn bb84_index(state: &StateVector) -> Result<usize> {
    for (k, s) in Bb84State::ALL.iter().enumerate() {
        if states_equal_up_to_phase(state, &s.state(), 1e-9)? {
            return Ok(k);
        }
    }
    Err(Error::ProtocolFault("rotated shared state is not a BB84 state".into()))
}

/// Copies of each rotated block split evenly between Z and X measurements,
/// then decoded by maximum likelihood against the four candidate rotations
/// of the known shared state `q`.
pub fn zhang2_basis_split(cfg: &AttackConfig, q: Bb84State) -> Result<AttackReport> {
    cfg.check_copies()?;
    let h = split_halves(cfg.l)?;
    let m = cfg.m;
    let cands = split_candidates(q)?;
    let labels: Vec<usize> = cands.iter().map(|c| bb84_index(&c.0)).collect::<Result<_>>()?;
    // [blocks ok, bids ok, 16 outcome counts by true state]
    let counts = run_trials(
        cfg.seed,
        cfg.trials,
        Ok([0u64; 18]),
        |_, rng| {
            let bid = random_bid(m, rng);
            let mut c = [0u64; 18];
            let mut all = true;
            for (hi, lo) in bid.blocks() {
                let k = usize::from(hi) * 2 + usize::from(lo);
                let state = &cands[k].0;
                let mut z1 = 0;
                let mut x1 = 0;
                for _ in 0..h {
                    z1 += measure_projective(state, ProjBasis::z(), &[0], rng)?.outcome_index;
                }
                for _ in 0..h {
                    x1 += measure_projective(state, ProjBasis::x(), &[0], rng)?.outcome_index;
                }
                let row = 2 + 4 * labels[k];
                c[row] += (h - z1) as u64;
                c[row + 1] += z1 as u64;
                c[row + 2] += (h - x1) as u64;
                c[row + 3] += x1 as u64;
                let set = ml_set(&cands, h, z1, x1);
                let pick = set[rng.random_range(0..set.len())];
                let ok = pick == k;
                c[0] += u64::from(ok);
                all &= ok;
            }
            c[1] = u64::from(all);
            Ok(c)
        },
        merge,
    )?;
    let blocks = m.div_ceil(2) as u64;
    let exact = basis_split_block_success(cfg.l, q)?;
    let mut r = AttackReport::new("zhang2_basis_split");
    r.push(Metric::proportion("block_success", counts[0], cfg.trials * blocks, Some(exact)))
        .push(Metric::proportion(
            "whole_bid_success",
            counts[1],
            cfg.trials,
            Some(exact.powi(blocks as i32)),
        ));
    for (s, state) in Bb84State::ALL.iter().enumerate() {
        let row = &counts[2 + 4 * s..6 + 4 * s];
        let total: u64 = row.iter().sum();
        if total == 0 {
            continue;
        }
        let v = state.state();
        let pz = outcome_probabilities(&v, ProjBasis::z(), &[0])?;
        let px = outcome_probabilities(&v, ProjBasis::x(), &[0])?;
        let exact = [pz[0] / 2.0, pz[1] / 2.0, px[0] / 2.0, px[1] / 2.0];
        for (j, &n) in row.iter().enumerate() {
            r.push(Metric::proportion(
                format!("outcome_{}_{}", SPLIT_LABELS[s], SPLIT_LABELS[j]),
                n,
                total,
                Some(snap(exact[j])),
            ));
        }
    }
    r.note(format!(
        "shared state {}; ties between equally likely candidates are broken uniformly at random",
        q.symbol()
    ));
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReplaceMode {
    /// Replacement drawn from the two encoding states `|0⟩`, `|+⟩`.
    EncodingPair,
    /// Replacement drawn from all four BB84 states.
    Bb84,
}

impl ReplaceMode {
    fn draw(self, rng: &mut dyn RngCore) -> Bb84State {
        match self {
            ReplaceMode::EncodingPair => zhang1_state(rng.random::<bool>()),
            ReplaceMode::Bb84 => Bb84State::random(rng),
        }
    }

    /// Chance that one replaced qubit fails the verifier's check.
    pub fn failure_probability(self) -> f64 {
        match self {
            ReplaceMode::EncodingPair => 0.25,
            ReplaceMode::Bb84 => 0.5,
        }
    }
}

struct Replacer(ReplaceMode);

impl Adversary for Replacer {
    fn on_transit(&mut self, link: &Link, parcels: &mut Vec<Parcel>, rng: &mut dyn RngCore) -> Result<bool> {
        if link.phase != Phase::LiuConfirmation {
            return Ok(false);
        }
        for p in parcels.iter_mut() {
            *p = Parcel::single(self.0.draw(rng).state());
        }
        Ok(true)
    }
}

/// Outsider replacing every confirmation qubit of the `|0⟩`/`|+⟩` protocol.
pub fn zhang1_replacement(cfg: &AttackConfig, mode: ReplaceMode) -> Result<AttackReport> {
    cfg.validate()?;
    let m = cfg.m;
    let bidders = cfg.bidders();
    let legacy = LegacyConfig::published(Variant::Zhang1);
    // [qubits failed, runs unfair, runs]
    let counts = run_trials(
        cfg.seed,
        cfg.trials,
        Ok([0u64; 2]),
        |_, rng| {
            let mut failed = 0;
            for _ in 0..m {
                let bit = rng.random::<bool>();
                let sent = mode.draw(rng).state();
                let basis = if bit { Basis::X } else { Basis::Z };
                failed += measure_projective(&sent, ProjBasis::for_basis(basis), &[0], rng)?.outcome_index as u64;
            }
            let bids: Vec<BidString> = (1..=bidders)
                .map(|k| BidString::random(PartyId(k), m, rng))
                .collect::<Result<_>>()?;
            let run = run_zhang1(&bids, &legacy, &mut Replacer(mode), rng)?;
            let unfair = run.outcome.verdict == crate::auction::Verdict::Unfair;
            Ok([failed, u64::from(unfair)])
        },
        merge,
    )?;
    let f = mode.failure_probability();
    let checked = (m * (bidders - 1)) as i32;
    let mut r = AttackReport::new("zhang1_replacement");
    r.push(Metric::proportion("per_qubit_failure", counts[0], cfg.trials * m as u64, Some(f)))
        .push(Metric::proportion(
            "detection_rate",
            counts[1],
            cfg.trials,
            Some(1.0 - (1.0 - f).powi(checked)),
        ));
    r.note(format!("replacement mode {mode:?}; {bidders} bidders, {checked} qubits verified per run"));
    Ok(r)
}

fn merge<const K: usize>(a: Result<[u64; K]>, b: Result<[u64; K]>) -> Result<[u64; K]> {
    Ok(add(a?, b?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_candidates_for_zero() {
        let c = split_candidates(Bb84State::Zero).unwrap();
        let idx: Vec<usize> = c.iter().map(|x| bb84_index(&x.0).unwrap()).collect();
        // 00 → |0⟩, 01 → |−⟩, 10 → |1⟩, 11 → |+⟩
        assert_eq!(idx, vec![0, 3, 1, 2]);
    }

    #[test]
    fn ml_set_excludes_impossible_candidates() {
        let c = split_candidates(Bb84State::Zero).unwrap();
        // Z outcomes all 0 with mixed X outcomes: only |0⟩ fits.
        assert_eq!(ml_set(&c, 4, 0, 2), vec![0]);
        // Z all 0 and X all +: |0⟩ and |+⟩ tie.
        assert_eq!(ml_set(&c, 4, 0, 0), vec![0, 3]);
    }

    #[test]
    fn odd_l_is_rejected() {
        assert!(basis_split_block_success(3, Bb84State::Zero).is_err());
        let cfg = AttackConfig {
            l: 5,
            ..AttackConfig::default()
        };
        assert!(zhang2_basis_split(&cfg, Bb84State::Zero).is_err());
    }

    #[test]
    fn majority_tally_tie_reads_one() {
        let bid = BidString::new(PartyId(1), vec![false, true]).unwrap();
        // l = 2: one τ1 each is a tie → decoded 1 for both.
        let t = majority_tally(&bid, &[1, 1], 2);
        assert_eq!(t, [0, 1, 0]);
    }

    #[test]
    fn semi_honest_requires_one_copy() {
        let cfg = AttackConfig {
            l: 2,
            trials: 10,
            ..AttackConfig::default()
        };
        assert!(semi_honest_projective(&cfg).is_err());
        assert!(semi_honest_usd(&cfg).is_err());
    }
}
