use std::collections::BTreeMap;

use itertools::Itertools;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::report::{AttackReport, Metric};
use super::{add, AttackConfig};
use crate::auction::{BidString, PartyId, Permutation, Verdict};
use crate::channel::{Adversary, Link, Parcel, Phase};
use crate::error::{Error, Result};
use crate::legacy::{check_decoys, insert_decoys, run_liu, DecoyPolicy, LegacyConfig, Variant};
use crate::quantum::{Bb84State, UnitaryOp};
use crate::rng::run_trials;
use crate::stats::BinomialModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DisturbanceMode {
    /// `iσ_y` on every returned qubit; the return path carries no decoys.
    NoDecoy,
    /// `iσ_y` on every returned qubit, decoys included.
    RemedyFlip,
    /// Every returned qubit replaced by a random BB84 state, decoys included.
    RemedyRandom,
}

impl DisturbanceMode {
    fn return_decoys(self) -> bool {
        self != DisturbanceMode::NoDecoy
    }

    /// Chance that one tampered decoy reads wrong in its preparation basis.
    pub fn decoy_error_probability(self) -> f64 {
        match self {
            DisturbanceMode::NoDecoy | DisturbanceMode::RemedyFlip => 1.0,
            DisturbanceMode::RemedyRandom => 0.5,
        }
    }
}

/// Tampers with the bidder-to-auctioneer sequences.
#[derive(Clone, Copy, Debug)]
pub struct DisturbanceAdversary(pub DisturbanceMode);

impl DisturbanceAdversary {
    fn tamper(&self, parcels: &mut [Parcel], rng: &mut dyn RngCore) -> Result<()> {
        for p in parcels.iter_mut() {
            match self.0 {
                DisturbanceMode::NoDecoy | DisturbanceMode::RemedyFlip => p.apply(&UnitaryOp::i_sigma_y(), &[0])?,
                DisturbanceMode::RemedyRandom => *p = Parcel::single(Bb84State::random(rng).state()),
            }
        }
        Ok(())
    }
}

impl Adversary for DisturbanceAdversary {
    fn on_transit(&mut self, link: &Link, parcels: &mut Vec<Parcel>, rng: &mut dyn RngCore) -> Result<bool> {
        if link.phase != Phase::LiuReturn {
            return Ok(false);
        }
        self.tamper(parcels, rng)?;
        Ok(true)
    }
}

fn complement(bid: &BidString) -> Vec<bool> {
    bid.bits().iter().map(|b| !b).collect()
}

/// Disturbance on the return path of the Bell-encoding protocol.
pub fn disturbance(cfg: &AttackConfig, mode: DisturbanceMode) -> Result<AttackReport> {
    cfg.validate()?;
    let m = cfg.m;
    let bidders = cfg.bidders();
    let policy = DecoyPolicy::new(cfg.decoys, cfg.error_threshold)?;
    let legacy = LegacyConfig {
        decoys: policy,
        return_decoys: mode.return_decoys(),
        ..LegacyConfig::published(Variant::Liu)
    };
    let adv = DisturbanceAdversary(mode);
    // [runs aborted, completed runs with every bid complemented, completed runs unfair,
    //  decoy mismatches, decoys checked]
    let counts = run_trials(
        cfg.seed,
        cfg.trials,
        Ok([0u64; 5]),
        |_, rng| {
            let mut c = [0u64; 5];
            let (mut decoys, key) = insert_decoys(Vec::new(), &policy, rng);
            adv.tamper(&mut decoys, rng)?;
            let check = check_decoys(&mut decoys, &key, rng)?;
            c[3] = check.mismatches as u64;
            c[4] = check.checked as u64;

            let bids: Vec<BidString> = (1..=bidders)
                .map(|k| BidString::random(PartyId(k), m, rng))
                .collect::<Result<_>>()?;
            let run = run_liu(&bids, &legacy, &mut adv.clone(), rng)?;
            if run.aborted_at.is_some() {
                c[0] = 1;
            } else {
                c[1] = u64::from(run.decoded.iter().zip(&bids).all(|(d, b)| d.bits() == complement(b)));
                c[2] = u64::from(run.outcome.verdict == Verdict::Unfair);
            }
            Ok(c)
        },
        |a, b| Ok(add(a?, b?)),
    )?;
    let completed = cfg.trials - counts[0];
    let detection = if mode.return_decoys() {
        1.0 - sequence_pass_probability(cfg.decoys, mode.decoy_error_probability(), cfg.error_threshold)?
            .powi(bidders as i32)
    } else {
        0.0
    };
    let mut r = AttackReport::new("disturbance");
    r.push(Metric::proportion("detection_rate", counts[0], cfg.trials, Some(detection)));
    if mode.return_decoys() && cfg.decoys > 0 {
        r.push(Metric::proportion(
            "decoy_error_rate",
            counts[3],
            counts[4],
            Some(mode.decoy_error_probability()),
        ));
    }
    if mode == DisturbanceMode::NoDecoy {
        r.push(Metric::proportion("decoded_complement_rate", counts[1], completed, Some(1.0)))
            .push(Metric::proportion("post_confirmation_unfair_rate", counts[2], completed, Some(1.0)));
        r.note("no eavesdropping check sees the flip; the Bell-pair post-confirmation still rejects the complemented winner");
    }
    r.note(format!("mode {mode:?}; {} decoys per protected sequence; {bidders} bidders", cfg.decoys));
    Ok(r)
}

/// Probability that a sequence with `d` decoys, each wrong with probability
/// `q`, stays at or under the error threshold.
pub(crate) fn sequence_pass_probability(d: usize, q: f64, threshold: f64) -> Result<f64> {
    if d == 0 {
        return Ok(1.0);
    }
    let max_errors = (0..=d).filter(|&k| k as f64 / d as f64 <= threshold).max().unwrap_or(0);
    if q >= 1.0 {
        return Ok(if max_errors >= d { 1.0 } else { 0.0 });
    }
    BinomialModel::new(d as u32, q)?.cdf(max_errors as u32)
}

/// Largest block count for which every rearrangement is enumerated.
const MAX_SEARCH_BLOCKS: usize = 8;

/// Searches every rearrangement of the two-bit blocks of `bid` for the
/// lowest-valued bid that differs from it. Returns the rearrangement and the
/// bid it decodes to.
pub fn lowest_rearrangement(bid: &BidString) -> Result<Option<(Permutation, BidString)>> {
    let blocks = bid.blocks();
    let k = blocks.len();
    if k > MAX_SEARCH_BLOCKS {
        return Err(Error::InvalidConfig(format!(
            "exhaustive search over {k} blocks exceeds the limit of {MAX_SEARCH_BLOCKS}"
        )));
    }
    let pad = 2 * k - bid.len();
    let mut best: Option<(Permutation, BidString)> = None;
    for order in (0..k).permutations(k) {
        let rho = Permutation::new(order)?;
        let bits: Vec<bool> = rho.apply(&blocks)?.into_iter().flat_map(|(h, l)| [h, l]).collect();
        if bits[..pad].iter().any(|&b| b) {
            continue;
        }
        let cand = bid.with_bits(bits[pad..].to_vec())?;
        if cand != *bid && best.as_ref().is_none_or(|(_, b)| cand.value() < b.value()) {
            best = Some((rho, cand));
        }
    }
    Ok(best)
}

/// A winner colluding with the auctioneer: the announced bid is a
/// rearrangement of the true one, and each verifier is shown a permutation
/// that makes its Bell pairs decode to the announced bid.
#[derive(Clone, Debug, Default)]
pub struct LiuFalsePermutation {
    plans: BTreeMap<PartyId, Permutation>,
}

impl Adversary for LiuFalsePermutation {
    fn announce_winner(&mut self, honest: BidString) -> BidString {
        match lowest_rearrangement(&honest) {
            Ok(Some((rho, fake))) => {
                self.plans.insert(honest.owner, rho);
                fake
            }
            _ => honest,
        }
    }

    fn disclosed_permutation(
        &mut self,
        bidder: PartyId,
        _receiver: PartyId,
        _bid: &BidString,
        honest: &Permutation,
    ) -> Permutation {
        match self.plans.get(&bidder) {
            // The verifier undoes the disclosure; undoing it must apply ρ after Π⁻¹.
            Some(rho) => rho
                .after(&honest.invert())
                .map(|undo| undo.invert())
                .unwrap_or_else(|_| honest.clone()),
            None => honest.clone(),
        }
    }
}

/// False-permutation attack on the Bell-encoding protocol.
pub fn false_permutation_liu(cfg: &AttackConfig) -> Result<AttackReport> {
    cfg.validate()?;
    let m = cfg.m;
    if m.div_ceil(2) > MAX_SEARCH_BLOCKS {
        return Err(Error::InvalidConfig(format!("bid length {m} too long for exhaustive search")));
    }
    let bidders = cfg.bidders();
    let legacy = LegacyConfig::published(Variant::Liu);
    // [successes, runs] split by whether the winner's bid has an alternative arrangement
    let counts = run_trials(
        cfg.seed,
        cfg.trials,
        Ok([0u64; 4]),
        |_, rng| {
            let bids: Vec<BidString> = (1..=bidders)
                .map(|k| BidString::random(PartyId(k), m, rng))
                .collect::<Result<_>>()?;
            let run = run_liu(&bids, &legacy, &mut LiuFalsePermutation::default(), rng)?;
            let announced = run.outcome.winning_bid.as_ref().ok_or(Error::ProtocolFault("run aborted".into()))?;
            let truth = &bids[announced.owner.0 - 1];
            let success = run.outcome.verdict == Verdict::Fair && announced != truth;
            let s = u64::from(success);
            Ok(if lowest_rearrangement(truth)?.is_some() { [s, 1, 0, 0] } else { [0, 0, s, 1] })
        },
        |a, b| Ok(add(a?, b?)),
    )?;
    let mut r = AttackReport::new("false_permutation_liu");
    r.push(Metric::proportion(
        "success_rate",
        counts[0] + counts[2],
        cfg.trials,
        None,
    ));
    if counts[1] > 0 {
        r.push(Metric::proportion("success_given_alternative", counts[0], counts[1], Some(1.0)));
    }
    if counts[3] > 0 {
        r.push(Metric::proportion("success_given_no_alternative", counts[2], counts[3], Some(0.0)));
    }
    r.note("the winner colludes with the auctioneer; the announced bid is the lowest rearrangement of its two-bit blocks");
    r.note("a bid whose blocks are all equal, including any 2-bit bid, has no alternative arrangement");
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bid(v: u64, m: usize) -> BidString {
        BidString::from_value(PartyId(1), v, m).unwrap()
    }

    #[test]
    fn rearrangement_search() {
        assert!(lowest_rearrangement(&bid(0b10, 2)).unwrap().is_none());
        assert!(lowest_rearrangement(&bid(0b1010, 4)).unwrap().is_none());
        let (_, fake) = lowest_rearrangement(&bid(0b1101, 4)).unwrap().unwrap();
        assert_eq!(fake.value(), 0b0111);
        // Odd length: the pad bit must stay in front.
        assert!(lowest_rearrangement(&bid(0b110, 3)).unwrap().is_none());
        let (_, fake) = lowest_rearrangement(&bid(0b10110, 5)).unwrap().unwrap();
        assert_eq!(fake.value(), 0b11001);
        assert!(lowest_rearrangement(&bid(0, 18)).is_err());
    }

    #[test]
    fn pass_probability() {
        assert_eq!(sequence_pass_probability(0, 0.5, 0.05).unwrap(), 1.0);
        assert_eq!(sequence_pass_probability(8, 1.0, 0.05).unwrap(), 0.0);
        assert!((sequence_pass_probability(8, 0.5, 0.05).unwrap() - 2f64.powi(-8)).abs() < 1e-15);
        // 1/20 = 0.05 is not above the threshold.
        let p = sequence_pass_probability(20, 0.5, 0.05).unwrap();
        assert!((p - 21.0 * 2f64.powi(-20)).abs() < 1e-15);
    }
}
