use std::collections::BTreeMap;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::classical::ClassicalOps;
use crate::auction::PartyId;
use crate::channel::{Adversary, Link, Parcel, Phase};
use crate::error::{Error, Result};
use crate::quantum::{BellState, ProjBasis};
use crate::transcript::{Action, Actor, Capability, CapabilityAudit, Transcript};

pub type Key = [u8; 32];

/// One party's copy of a pairwise key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyMaterial {
    /// Unordered pair, smaller id first.
    pub pair: (PartyId, PartyId),
    pub bits: Key,
}

/// Every key a bidder holds, indexed by the other party.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyRing {
    keys: BTreeMap<PartyId, Key>,
}

impl KeyRing {
    pub fn insert(&mut self, other: PartyId, key: Key) {
        self.keys.insert(other, key);
    }

    pub fn get(&self, owner: PartyId, other: PartyId) -> Result<&Key> {
        self.keys
            .get(&other)
            .ok_or(Error::MissingKey(owner.0, other.0))
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

/// Result of mediated key distribution between two bidders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyDistribution {
    /// Copies held by the first and second bidder of the pair.
    pub keys: Option<(KeyMaterial, KeyMaterial)>,
    pub rounds: usize,
    pub sifted: usize,
    pub check_rounds: usize,
    pub check_errors: usize,
}

impl KeyDistribution {
    pub fn error_rate(&self) -> f64 {
        if self.check_rounds == 0 {
            0.0
        } else {
            self.check_errors as f64 / self.check_rounds as f64
        }
    }

    pub fn aborted(&self) -> bool {
        self.keys.is_none()
    }
}

/// Mediated semi-quantum key distribution of a 256-bit key.
///
/// Per round the auctioneer sends one half of `|φ+⟩` to each bidder. Each
/// bidder independently sifts (measure in Z, resend the outcome) or
/// reflects, with probability 1/2. The auctioneer Bell-measures what comes
/// back. Both-sift rounds with a `φ±` outcome contribute a key bit; rounds
/// with a reflection are checks: both-reflect must give `φ+`, and a mixed
/// round must give `φ±`. Rounds run in batches until 256 bits are sifted.
pub fn sp1_keydist(
    pair: (PartyId, PartyId),
    threshold: f64,
    adversary: &mut dyn Adversary,
    transcript: &mut Transcript,
    audit: &mut CapabilityAudit,
    rng: &mut dyn RngCore,
) -> Result<KeyDistribution> {
    let (a, b) = if pair.0 < pair.1 { pair } else { (pair.1, pair.0) };
    if a == b {
        return Err(Error::InvalidConfig(format!("key pair needs two parties, got {a} twice")));
    }
    let needed = 256;
    let (mut key_a, mut key_b) = (Vec::with_capacity(needed), Vec::with_capacity(needed));
    let mut dist = KeyDistribution {
        keys: None,
        rounds: 0,
        sifted: 0,
        check_rounds: 0,
        check_errors: 0,
    };
    while key_a.len() < needed {
        let batch = 4 * (needed - key_a.len()) + 64;
        dist.rounds += batch;
        let mut flying: Vec<Parcel> = vec![Parcel::single(BellState::PhiPlus.state()); batch];
        audit.record_n(Actor::Auctioneer, "SP1", Capability::Other("prepare-bell".into()), batch as u64);
        transfer(
            Link {
                phase: Phase::SqkdOut,
                from: Actor::Auctioneer,
                to: Actor::Bidder(a.0),
            },
            &mut flying,
            adversary,
            transcript,
            rng,
            format!("SP1 pairs to {a},{b} rounds={batch}"),
        )?;
        // None: reflected; Some(bit): sifted.
        let mut moves: Vec<(Option<bool>, Option<bool>)> = Vec::with_capacity(batch);
        {
            let mut ops_a = ClassicalOps::new(Actor::Bidder(a.0), "SP1", audit);
            let mut choices_a = Vec::with_capacity(batch);
            for p in flying.iter_mut() {
                choices_a.push(if rng.random::<bool>() {
                    Some(ops_a.sift(p, 0, rng)?)
                } else {
                    ops_a.reflect(p);
                    None
                });
            }
            drop(ops_a);
            let mut ops_b = ClassicalOps::new(Actor::Bidder(b.0), "SP1", audit);
            for (p, ca) in flying.iter_mut().zip(choices_a) {
                let cb = if rng.random::<bool>() {
                    Some(ops_b.sift(p, 1, rng)?)
                } else {
                    ops_b.reflect(p);
                    None
                };
                moves.push((ca, cb));
            }
        }
        transfer(
            Link {
                phase: Phase::SqkdReturn,
                from: Actor::Bidder(a.0),
                to: Actor::Auctioneer,
            },
            &mut flying,
            adversary,
            transcript,
            rng,
            format!("SP1 returns from {a},{b} rounds={batch}"),
        )?;
        audit.record_n(Actor::Auctioneer, "SP1", Capability::Other("bell-measure".into()), batch as u64);
        for (p, mv) in flying.iter_mut().zip(moves) {
            let outcome = BellState::from_index(p.measure_travel_in(&[0, 1], ProjBasis::bell(), rng)?);
            match mv {
                (Some(x), Some(y)) => {
                    if outcome.is_phi() && key_a.len() < needed {
                        key_a.push(x);
                        key_b.push(y);
                    }
                }
                (None, None) => {
                    dist.check_rounds += 1;
                    dist.check_errors += usize::from(outcome != BellState::PhiPlus);
                }
                _ => {
                    dist.check_rounds += 1;
                    dist.check_errors += usize::from(!outcome.is_phi());
                }
            }
        }
    }
    dist.sifted = key_a.len();
    transcript.record(
        Actor::Auctioneer,
        Action::Announce,
        format!(
            "SP1 {a},{b} rounds={} sifted={} check_errors={}/{}",
            dist.rounds, dist.sifted, dist.check_errors, dist.check_rounds
        ),
    );
    if dist.error_rate() <= threshold {
        dist.keys = Some((
            KeyMaterial {
                pair: (a, b),
                bits: pack(&key_a),
            },
            KeyMaterial {
                pair: (a, b),
                bits: pack(&key_b),
            },
        ));
    }
    Ok(dist)
}

pub(crate) fn transfer(
    link: Link,
    parcels: &mut Vec<Parcel>,
    adversary: &mut dyn Adversary,
    transcript: &mut Transcript,
    rng: &mut dyn RngCore,
    label: String,
) -> Result<()> {
    let n = parcels.len();
    let id = transcript.send(link.from, label.clone());
    if adversary.on_transit(&link, parcels, rng)? {
        transcript.intercept(id, label.clone());
    }
    if parcels.len() != n {
        return Err(Error::ProtocolFault("sequence length changed in transit".into()));
    }
    transcript.receive(link.to, id, label);
    Ok(())
}

fn pack(bits: &[bool]) -> Key {
    let mut out = [0u8; 32];
    for (k, &b) in bits.iter().enumerate().take(256) {
        out[k / 8] |= u8::from(b) << (7 - k % 8);
    }
    out
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::channel::Honest;

    #[test]
    fn pack_is_msb_first() {
        let mut bits = vec![false; 256];
        bits[0] = true;
        bits[15] = true;
        let k = pack(&bits);
        assert_eq!(k[0], 0x80);
        assert_eq!(k[1], 0x01);
    }

    #[test]
    fn honest_keys_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut t = Transcript::new();
        let mut audit = CapabilityAudit::new();
        let d = sp1_keydist((PartyId(2), PartyId(1)), 0.05, &mut Honest, &mut t, &mut audit, &mut rng).unwrap();
        let (ka, kb) = d.keys.unwrap();
        assert_eq!(ka, kb);
        assert_eq!(ka.pair, (PartyId(1), PartyId(2)));
        assert_eq!(d.check_errors, 0);
        assert_eq!(d.sifted, 256);
        assert!(audit.bidders_are_classical());
        assert!(t.unmatched_sends().is_empty());
    }

    #[test]
    fn rejects_self_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = sp1_keydist(
            (PartyId(1), PartyId(1)),
            0.05,
            &mut Honest,
            &mut Transcript::new(),
            &mut CapabilityAudit::new(),
            &mut rng,
        );
        assert!(r.is_err());
    }
}
