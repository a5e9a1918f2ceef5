use std::collections::BTreeMap;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::decoy::{check_decoys, insert_decoys, strip_decoys, DecoyCheck, DecoyPolicy};
use super::encoding::{
    bits_from_bell, liu_confirmation_pairs, liu_encode, zhang1_confirmation_states,
    zhang2_confirmation_states, zhang2_theta,
};
use crate::auction::{
    select_winner, validate_bids, AuctionOutcome, BidString, PartyId, Permutation, Verdict,
};
use crate::channel::{Adversary, Link, Parcel, Phase};
use crate::error::{Error, Result};
use crate::quantum::{rotation_u, Basis, Bb84State, BellState, ProjBasis, UnitaryOp};
use crate::transcript::{Action, Actor, Capability, CapabilityAudit, Transcript};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Liu,
    Zhang1,
    Zhang2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegacyConfig {
    /// Decoys in the distribution sequences and, when enabled, in the
    /// confirmation and return sequences.
    pub decoys: DecoyPolicy,
    /// Adds decoys to the bidder-to-auctioneer return sequence.
    pub return_decoys: bool,
    /// Adds decoys to the bidder-to-bidder confirmation sequences.
    pub confirmation_decoys: bool,
    /// Shared sequence for the rotation variant; random BB84 states when absent.
    pub q_pub: Option<Vec<Bb84State>>,
}

impl LegacyConfig {
    /// Settings as published: Liu protects the Bell sequences with decoys,
    /// neither variant protects the return sequence, and the Zhang
    /// variants send their confirmation qubits bare.
    pub fn published(variant: Variant) -> Self {
        Self {
            decoys: DecoyPolicy::default(),
            return_decoys: false,
            confirmation_decoys: variant == Variant::Liu,
            q_pub: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegacyRun {
    pub outcome: AuctionOutcome,
    pub transcript: Transcript,
    pub audit: CapabilityAudit,
    /// Bids as decoded by the auctioneer; empty if the run aborted first.
    pub decoded: Vec<BidString>,
    pub aborted_at: Option<String>,
}

pub fn run_liu(
    bids: &[BidString],
    cfg: &LegacyConfig,
    adversary: &mut dyn Adversary,
    rng: &mut dyn RngCore,
) -> Result<LegacyRun> {
    run_legacy(Variant::Liu, bids, cfg, adversary, rng)
}

pub fn run_zhang1(
    bids: &[BidString],
    cfg: &LegacyConfig,
    adversary: &mut dyn Adversary,
    rng: &mut dyn RngCore,
) -> Result<LegacyRun> {
    run_legacy(Variant::Zhang1, bids, cfg, adversary, rng)
}

pub fn run_zhang2(
    bids: &[BidString],
    cfg: &LegacyConfig,
    adversary: &mut dyn Adversary,
    rng: &mut dyn RngCore,
) -> Result<LegacyRun> {
    run_legacy(Variant::Zhang2, bids, cfg, adversary, rng)
}

pub fn run_legacy(
    variant: Variant,
    bids: &[BidString],
    cfg: &LegacyConfig,
    adversary: &mut dyn Adversary,
    rng: &mut dyn RngCore,
) -> Result<LegacyRun> {
    let m = validate_bids(bids)?;
    for (k, b) in bids.iter().enumerate() {
        if b.owner != PartyId(k + 1) {
            return Err(Error::InvalidBid(format!("bid {k} belongs to {}, expected bob{}", b.owner, k + 1)));
        }
    }
    let q_pub = match (&cfg.q_pub, variant) {
        (Some(q), Variant::Zhang2) if q.len() != m.div_ceil(2) => {
            return Err(Error::InvalidConfig(format!(
                "shared sequence has {} qubits, need {}",
                q.len(),
                m.div_ceil(2)
            )))
        }
        (Some(q), _) => q.clone(),
        (None, _) => (0..m.div_ceil(2)).map(|_| Bb84State::random(rng)).collect(),
    };
    let mut engine = Engine {
        variant,
        cfg,
        adversary,
        rng,
        transcript: Transcript::new(),
        audit: CapabilityAudit::new(),
        totals: DecoyCheck::default(),
        m,
    };
    engine.run(bids, &q_pub)
}

struct Engine<'a> {
    variant: Variant,
    cfg: &'a LegacyConfig,
    adversary: &'a mut dyn Adversary,
    rng: &'a mut dyn RngCore,
    transcript: Transcript,
    audit: CapabilityAudit,
    totals: DecoyCheck,
    m: usize,
}

/// Whether a run continues or stops at a failed eavesdropping check.
enum Flow<T> {
    Continue(T),
    Abort(String),
}

impl Engine<'_> {
    fn run(&mut self, bids: &[BidString], q_pub: &[Bb84State]) -> Result<LegacyRun> {
        let n = bids.len();
        self.transcript.record(
            Actor::Auctioneer,
            Action::Announce,
            format!("protocol={:?} bidders={n} m={}", self.variant, self.m),
        );
        if self.variant == Variant::Zhang2 && self.m % 2 == 1 {
            self.transcript
                .record(Actor::Auctioneer, Action::Announce, "odd bid length padded with a leading 0");
        }

        // Steps 2-4: distribution, decoy check, encoding.
        let mut preps = Vec::with_capacity(n);
        let mut encoded = Vec::with_capacity(n);
        for bid in bids {
            let who = Actor::Bidder(bid.owner.0);
            let labels: Vec<Bb84State> = (0..self.m).map(|_| Bb84State::random(self.rng)).collect();
            self.audit_bb84(Actor::Auctioneer, "step2", &labels, true);
            let seq: Vec<Parcel> = labels.iter().map(|s| Parcel::single(s.state())).collect();
            let link = Link {
                phase: Phase::LiuDistribution,
                from: Actor::Auctioneer,
                to: who,
            };
            let seq = match self.guarded_transfer(link, seq, &self.cfg.decoys.clone(), "step3")? {
                Flow::Continue(s) => s,
                Flow::Abort(stage) => return Ok(self.aborted(stage)),
            };
            let mut out = Vec::with_capacity(self.m);
            for (parcel, &bit) in seq.into_iter().zip(bid.bits()) {
                let state = parcel
                    .travel_state()
                    .ok_or_else(|| Error::ProtocolFault("entangled qubit reached encoding".into()))?;
                out.push(Parcel::single(liu_encode(&state, bit)?));
            }
            self.audit
                .record_n(who, "step4", Capability::Other("pauli".into()), self.m as u64);
            preps.push(labels);
            encoded.push(out);
        }

        // Step 5: confirmation sequences between every ordered pair.
        let mut perms: BTreeMap<(usize, usize), Permutation> = BTreeMap::new();
        let mut received: BTreeMap<(usize, usize), Vec<Parcel>> = BTreeMap::new();
        let confirm_policy = if self.cfg.confirmation_decoys {
            self.cfg.decoys
        } else {
            DecoyPolicy::none()
        };
        for sender in bids {
            for receiver in bids.iter().filter(|b| b.owner != sender.owner) {
                let (i, j) = (sender.owner.0, receiver.owner.0);
                let seq = self.confirmation_sequence(sender, q_pub, &mut perms, j)?;
                let link = Link {
                    phase: Phase::LiuConfirmation,
                    from: Actor::Bidder(i),
                    to: Actor::Bidder(j),
                };
                match self.guarded_transfer(link, seq, &confirm_policy, "step5")? {
                    Flow::Continue(s) => {
                        received.insert((i, j), s);
                    }
                    Flow::Abort(stage) => return Ok(self.aborted(stage)),
                }
            }
        }

        // Step 6: encoded sequences back to the auctioneer.
        let return_policy = if self.cfg.return_decoys {
            self.cfg.decoys
        } else {
            DecoyPolicy::none()
        };
        let mut decoded = Vec::with_capacity(n);
        for ((bid, seq), labels) in bids.iter().zip(encoded).zip(&preps) {
            let link = Link {
                phase: Phase::LiuReturn,
                from: Actor::Bidder(bid.owner.0),
                to: Actor::Auctioneer,
            };
            let seq = match self.guarded_transfer(link, seq, &return_policy, "step6")? {
                Flow::Continue(s) => s,
                Flow::Abort(stage) => return Ok(self.aborted(stage)),
            };
            let mut bits = Vec::with_capacity(self.m);
            for (parcel, &label) in seq.iter().zip(labels) {
                let mut p = *parcel;
                let outcome = p.measure_travel(0, label.basis(), self.rng)?;
                bits.push(outcome != label.bit());
            }
            self.audit_bb84(Actor::Auctioneer, "step6", labels, false);
            decoded.push(BidString::new(bid.owner, bits)?);
        }
        let k = select_winner(&decoded).expect("at least two bidders");
        let announced = self.adversary.announce_winner(decoded[k].clone());
        if announced.owner.0 == 0 || announced.owner.0 > n {
            return Err(Error::ProtocolFault(format!("announced winner {} is not a bidder", announced.owner)));
        }
        self.transcript.record(
            Actor::Auctioneer,
            Action::Announce,
            format!("winner={} bid={announced}", announced.owner),
        );

        // Step 7: post-confirmation by every other bidder.
        let w = announced.owner.0;
        let mut fair = true;
        for verifier in bids.iter().filter(|b| b.owner.0 != w) {
            let j = verifier.owner.0;
            let seq = received.remove(&(w, j)).expect("confirmation sequence stored");
            let ok = match self.variant {
                Variant::Liu => {
                    let honest = perms.get(&(w, j)).expect("permutation stored").clone();
                    let disclosed =
                        self.adversary
                            .disclosed_permutation(announced.owner, PartyId(j), &bids[w - 1], &honest);
                    self.transcript.record(
                        Actor::Bidder(w),
                        Action::Announce,
                        format!("permutation to bob{j}={:?}", disclosed.mapping()),
                    );
                    self.verify_liu(j, &seq, &disclosed, &announced)?
                }
                Variant::Zhang1 => self.verify_zhang1(j, seq, &announced)?,
                Variant::Zhang2 => self.verify_zhang2(j, seq, &announced, q_pub)?,
            };
            self.transcript.record(
                Actor::Bidder(j),
                Action::Announce,
                format!("confirmation={}", if ok { "match" } else { "mismatch" }),
            );
            fair &= ok;
        }
        let verdict = if fair { Verdict::Fair } else { Verdict::Unfair };
        self.transcript
            .record(Actor::Auctioneer, Action::Announce, format!("verdict={verdict}"));
        Ok(LegacyRun {
            outcome: AuctionOutcome::announced(announced, verdict, self.totals.error_rate()),
            transcript: std::mem::take(&mut self.transcript),
            audit: std::mem::take(&mut self.audit),
            decoded,
            aborted_at: None,
        })
    }

    fn confirmation_sequence(
        &mut self,
        sender: &BidString,
        q_pub: &[Bb84State],
        perms: &mut BTreeMap<(usize, usize), Permutation>,
        receiver: usize,
    ) -> Result<Vec<Parcel>> {
        let who = Actor::Bidder(sender.owner.0);
        Ok(match self.variant {
            Variant::Liu => {
                let pairs: Vec<Parcel> = liu_confirmation_pairs(sender)
                    .into_iter()
                    .map(|b| Parcel::single(b.state()))
                    .collect();
                self.audit
                    .record_n(who, "step5", Capability::Other("prepare-bell".into()), pairs.len() as u64);
                let perm = Permutation::random(pairs.len(), self.rng);
                let sent = perm.apply(&pairs)?;
                self.audit
                    .record(who, "step5", Capability::Other("permute".into()));
                perms.insert((sender.owner.0, receiver), perm);
                sent
            }
            Variant::Zhang1 => {
                let states = zhang1_confirmation_states(sender);
                self.audit_bb84(who, "5-Z1", &states, true);
                states.iter().map(|s| Parcel::single(s.state())).collect()
            }
            Variant::Zhang2 => {
                let states = zhang2_confirmation_states(sender, q_pub)?;
                self.audit
                    .record_n(who, "5-Z2", Capability::Other("rotation".into()), states.len() as u64);
                states.into_iter().map(Parcel::single).collect()
            }
        })
    }

    fn verify_liu(&mut self, j: usize, seq: &[Parcel], disclosed: &Permutation, announced: &BidString) -> Result<bool> {
        if disclosed.len() != seq.len() || announced.len() != self.m {
            return Ok(false);
        }
        let restored = disclosed.invert().apply(seq)?;
        let mut outcomes = Vec::with_capacity(restored.len());
        for mut p in restored {
            let k = p.measure_travel_in(&[0, 1], ProjBasis::bell(), self.rng)?;
            outcomes.push(BellState::from_index(k));
        }
        self.audit.record_n(
            Actor::Bidder(j),
            "step7",
            Capability::Other("bell-measure".into()),
            outcomes.len() as u64,
        );
        Ok(bits_from_bell(&outcomes, self.m) == announced.bits())
    }

    fn verify_zhang1(&mut self, j: usize, seq: Vec<Parcel>, announced: &BidString) -> Result<bool> {
        if announced.len() != seq.len() {
            return Ok(false);
        }
        let mut ok = true;
        for (mut p, &bit) in seq.into_iter().zip(announced.bits()) {
            let basis = if bit { Basis::X } else { Basis::Z };
            self.audit.record(
                Actor::Bidder(j),
                "7-Z1",
                if bit {
                    Capability::Other("measure-x".into())
                } else {
                    Capability::MeasureZ
                },
            );
            // |1⟩ or |−⟩ flags the announced bit as inconsistent.
            if p.measure_travel(0, basis, self.rng)? {
                ok = false;
            }
        }
        Ok(ok)
    }

    fn verify_zhang2(
        &mut self,
        j: usize,
        seq: Vec<Parcel>,
        announced: &BidString,
        q_pub: &[Bb84State],
    ) -> Result<bool> {
        let blocks = announced.blocks();
        if blocks.len() != seq.len() {
            return Ok(false);
        }
        let mut ok = true;
        for ((mut p, block), q) in seq.into_iter().zip(blocks).zip(q_pub) {
            let undo: UnitaryOp = rotation_u(zhang2_theta(block))?.adjoint();
            p.apply(&undo, &[0])?;
            let basis = ProjBasis::from_state(&q.state())?;
            if p.measure_travel_in(&[0], &basis, self.rng)? == 1 {
                ok = false;
            }
        }
        let who = Actor::Bidder(j);
        self.audit
            .record_n(who, "7-Z2", Capability::Other("rotation".into()), announced.blocks().len() as u64);
        self.audit.record_n(
            who,
            "7-Z2",
            Capability::Other("measure-shared-basis".into()),
            announced.blocks().len() as u64,
        );
        Ok(ok)
    }

    /// Sends `seq` with decoys under `policy`, lets the adversary act, then
    /// checks and strips the decoys.
    fn guarded_transfer(
        &mut self,
        link: Link,
        seq: Vec<Parcel>,
        policy: &DecoyPolicy,
        stage: &str,
    ) -> Result<Flow<Vec<Parcel>>> {
        let (mut sent, key) = insert_decoys(seq, policy, self.rng);
        let expected_len = sent.len();
        self.audit_bb84(link.from, stage, &key.labels, true);
        let label = format!("{stage} {}->{} qubits={}", link.from, link.to, sent.len());
        let id = self.transcript.send(link.from, label.clone());
        if self.adversary.on_transit(&link, &mut sent, self.rng)? {
            self.transcript.intercept(id, label.clone());
        }
        if sent.len() != expected_len {
            return Err(Error::ProtocolFault("sequence length changed in transit".into()));
        }
        self.transcript.receive(link.to, id, label);
        if key.is_empty() {
            return Ok(Flow::Continue(sent));
        }
        self.transcript.record(
            link.from,
            Action::Announce,
            format!("{stage} decoy positions={:?}", key.positions),
        );
        let check = check_decoys(&mut sent, &key, self.rng)?;
        self.audit_bb84(link.to, stage, &key.labels, false);
        self.totals.mismatches += check.mismatches;
        self.totals.checked += check.checked;
        self.transcript.record(
            link.to,
            Action::Announce,
            format!("{stage} decoy errors={}/{}", check.mismatches, check.checked),
        );
        if check.exceeds(policy.error_threshold) {
            return Ok(Flow::Abort(stage.to_string()));
        }
        Ok(Flow::Continue(strip_decoys(sent, &key)))
    }

    fn audit_bb84(&mut self, actor: Actor, stage: &str, labels: &[Bb84State], prepare: bool) {
        let z = labels.iter().filter(|s| s.basis() == Basis::Z).count() as u64;
        let x = labels.len() as u64 - z;
        let (zc, xc) = if prepare {
            (Capability::PrepareZ, Capability::Other("prepare-x".into()))
        } else {
            (Capability::MeasureZ, Capability::Other("measure-x".into()))
        };
        self.audit.record_n(actor, stage, zc, z);
        self.audit.record_n(actor, stage, xc, x);
    }

    fn aborted(&mut self, stage: String) -> LegacyRun {
        self.transcript
            .record(Actor::Auctioneer, Action::Abort, format!("eavesdropping detected at {stage}"));
        LegacyRun {
            outcome: AuctionOutcome::aborted(self.totals.error_rate()),
            transcript: std::mem::take(&mut self.transcript),
            audit: std::mem::take(&mut self.audit),
            decoded: Vec::new(),
            aborted_at: Some(stage),
        }
    }
}
