use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::classical::ClassicalOps;
use super::commit::{bid_digest, sp2_commit, Commitment, HashDigest};
use super::config::SessionConfig;
use super::keydist::{sp1_keydist, transfer, KeyRing};
use crate::auction::{select_winner, validate_bids, AuctionOutcome, BidString, PartyId, Permutation, Verdict};
use crate::channel::{Adversary, Link, Parcel, Phase};
use crate::error::{Error, Result};
use crate::quantum::{Basis, Bb84State};
use crate::transcript::{Action, Actor, Capability, CapabilityAudit, Transcript};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    Sp1,
    Sp2,
    Sp3,
    Sp4,
    Sp5,
    Sp6,
    Sp7,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SP{}", *self as u8 + 1)
    }
}

/// A bidder's secret SP4 choices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncCtrlSchedule {
    /// `enc_positions[t]` is the received index that carries bid bit `t`.
    pub enc_positions: Vec<usize>,
    /// Received indices that were reflected, ascending.
    pub ctrl_positions: Vec<usize>,
    /// Reordering applied to the whole sequence before it is returned.
    pub permutation: Permutation,
}

impl EncCtrlSchedule {
    pub fn random(n: usize, m: usize, permute: bool, rng: &mut dyn RngCore) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidConfig(format!("{m} ENC qubits out of {n}")));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let enc_positions = order[..m].to_vec();
        let mut ctrl_positions = order[m..].to_vec();
        ctrl_positions.sort_unstable();
        let permutation = if permute {
            Permutation::random(n, rng)
        } else {
            Permutation::identity(n)
        };
        Ok(Self {
            enc_positions,
            ctrl_positions,
            permutation,
        })
    }

    /// SP5 announcement: `(returned position, received index)` of every CTRL qubit.
    pub fn ctrl_announcement(&self) -> Vec<(usize, usize)> {
        self.ctrl_positions
            .iter()
            .map(|&c| (self.permutation.destination(c), c))
            .collect()
    }

    /// SP6 announcement: returned position of each bid bit, in bit order.
    pub fn enc_order(&self) -> Vec<usize> {
        self.enc_positions
            .iter()
            .map(|&e| self.permutation.destination(e))
            .collect()
    }
}

/// One CTRL qubit checked by the auctioneer in SP5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub bidder: PartyId,
    pub prepared: Bb84State,
    pub error: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqsbaRun {
    pub outcome: AuctionOutcome,
    pub transcript: Transcript,
    pub audit: CapabilityAudit,
    /// Bids as decoded by the auctioneer in SP6; empty if the run stopped earlier.
    pub decoded: Vec<BidString>,
    pub aborted_at: Option<Stage>,
    pub checks: Vec<CheckRecord>,
    pub commitments: Vec<Commitment>,
}

impl SqsbaRun {
    pub fn check_error_rate(&self) -> f64 {
        if self.checks.is_empty() {
            0.0
        } else {
            self.checks.iter().filter(|c| c.error).count() as f64 / self.checks.len() as f64
        }
    }
}

/// Runs SP1 to SP7 for bidders `bids[k]` owned by `PartyId(k + 1)`.
pub fn run_sqsba(
    cfg: &SessionConfig,
    bids: &[BidString],
    adversary: &mut dyn Adversary,
    rng: &mut dyn RngCore,
) -> Result<SqsbaRun> {
    cfg.validate()?;
    let m = validate_bids(bids)?;
    if m != cfg.bid_length || bids.len() != cfg.num_bidders() {
        return Err(Error::InvalidConfig(format!(
            "config expects {} bids of {} bits, got {} of {m}",
            cfg.num_bidders(),
            cfg.bid_length,
            bids.len()
        )));
    }
    for (k, b) in bids.iter().enumerate() {
        if b.owner != PartyId(k + 1) {
            return Err(Error::InvalidBid(format!("bid {k} belongs to {}, expected bob{}", b.owner, k + 1)));
        }
    }
    let mut s = Session {
        cfg,
        adversary,
        rng,
        transcript: Transcript::new(),
        audit: CapabilityAudit::new(),
        checks: Vec::new(),
        commitments: Vec::new(),
    };
    s.run(bids)
}

struct Session<'a> {
    cfg: &'a SessionConfig,
    adversary: &'a mut dyn Adversary,
    rng: &'a mut dyn RngCore,
    transcript: Transcript,
    audit: CapabilityAudit,
    checks: Vec<CheckRecord>,
    commitments: Vec<Commitment>,
}

impl Session<'_> {
    fn run(&mut self, bids: &[BidString]) -> Result<SqsbaRun> {
        let parties: Vec<PartyId> = bids.iter().map(|b| b.owner).collect();
        self.transcript.record(
            Actor::Auctioneer,
            Action::Announce,
            format!(
                "session bidders={} m={} qubits={} threshold={}",
                parties.len(),
                self.cfg.bid_length,
                self.cfg.qubits_per_bidder(),
                self.cfg.error_threshold
            ),
        );

        // SP1: pairwise keys.
        let mut rings: BTreeMap<PartyId, KeyRing> = parties.iter().map(|&p| (p, KeyRing::default())).collect();
        let mut sp1_errors = (0usize, 0usize);
        for (x, &a) in parties.iter().enumerate() {
            for &b in &parties[x + 1..] {
                let d = sp1_keydist(
                    (a, b),
                    self.cfg.error_threshold,
                    self.adversary,
                    &mut self.transcript,
                    &mut self.audit,
                    self.rng,
                )?;
                sp1_errors.0 += d.check_errors;
                sp1_errors.1 += d.check_rounds;
                match d.keys {
                    Some((ka, kb)) => {
                        rings.get_mut(&a).expect("ring").insert(b, ka.bits);
                        rings.get_mut(&b).expect("ring").insert(a, kb.bits);
                    }
                    None => return Ok(self.abort(Stage::Sp1, d.error_rate())),
                }
            }
        }

        // SP2: commitments; each receiver keeps R = L ⊕ K.
        let mut references: BTreeMap<(PartyId, PartyId), HashDigest> = BTreeMap::new();
        for bid in bids {
            let sent = sp2_commit(bid.owner, bid, &parties, &rings[&bid.owner])?;
            for c in sent {
                self.adversary.observe_commitment(c.sender, c.receiver, &c.payload);
                self.transcript.record(
                    Actor::Bidder(c.sender.0),
                    Action::Announce,
                    format!("SP2 commit to {} L={}", c.receiver, hex::encode(c.payload)),
                );
                let key = rings[&c.receiver].get(c.receiver, c.sender)?;
                references.insert((c.sender, c.receiver), c.reference(key));
                self.commitments.push(c);
            }
        }
        for &p in &parties {
            self.transcript
                .record(Actor::Bidder(p.0), Action::Announce, "SP2 all commitments received");
        }

        // SP3-SP5 per bidder.
        let n = self.cfg.qubits_per_bidder();
        let m = self.cfg.bid_length;
        let mut returned_seqs = Vec::with_capacity(bids.len());
        let mut schedules = Vec::with_capacity(bids.len());
        let mut worst = 0.0f64;
        for bid in bids {
            let who = Actor::Bidder(bid.owner.0);
            let labels: Vec<Bb84State> = (0..n).map(|_| Bb84State::random(self.rng)).collect();
            let z = labels.iter().filter(|l| l.basis() == Basis::Z).count() as u64;
            self.audit.record_n(Actor::Auctioneer, "SP3", Capability::PrepareZ, z);
            self.audit
                .record_n(Actor::Auctioneer, "SP3", Capability::Other("prepare-x".into()), n as u64 - z);
            let mut seq: Vec<Parcel> = labels.iter().map(|l| Parcel::single(l.state())).collect();
            self.transmit(Phase::SqsbaOut, Actor::Auctioneer, who, &mut seq, "SP3")?;

            // SP4: ENC on m random positions, CTRL on the rest, then reorder.
            let schedule = EncCtrlSchedule::random(n, m, self.cfg.permutation_defense, self.rng)?;
            {
                let mut ops = ClassicalOps::new(who, "SP4", &mut self.audit);
                for (t, &e) in schedule.enc_positions.iter().enumerate() {
                    ops.replace_with_z(&mut seq[e], bid.bits()[t], self.rng)?;
                }
                for &c in &schedule.ctrl_positions {
                    ops.reflect(&seq[c]);
                }
            }
            self.adversary.on_schedule(bid.owner, &schedule);
            let mut back = schedule.permutation.apply(&seq)?;
            self.transmit(Phase::SqsbaReturn, who, Actor::Auctioneer, &mut back, "SP4")?;

            // SP5: receipt, CTRL disclosure, check.
            self.transcript.record(
                Actor::Auctioneer,
                Action::Announce,
                format!("SP5 receipt from {} qubits={n}", bid.owner),
            );
            let ctrl = schedule.ctrl_announcement();
            self.transcript.record(
                who,
                Action::Announce,
                format!("SP5 ctrl positions={:?}", ctrl),
            );
            validate_positions(ctrl.iter().map(|c| c.0), n, "CTRL position")?;
            validate_positions(ctrl.iter().map(|c| c.1), n, "CTRL index")?;
            let mut errors = 0usize;
            for &(pos, idx) in &ctrl {
                let prepared = labels[idx];
                let bit = back[pos].measure_travel(0, prepared.basis(), self.rng)?;
                let error = bit != prepared.bit();
                errors += usize::from(error);
                self.checks.push(CheckRecord {
                    bidder: bid.owner,
                    prepared,
                    error,
                });
            }
            self.audit.record_n(
                Actor::Auctioneer,
                "SP5",
                Capability::Other("measure-bb84".into()),
                ctrl.len() as u64,
            );
            let rate = if ctrl.is_empty() {
                0.0
            } else {
                errors as f64 / ctrl.len() as f64
            };
            worst = worst.max(rate);
            self.transcript.record(
                Actor::Auctioneer,
                Action::Announce,
                format!("SP5 {} errors={errors}/{}", bid.owner, ctrl.len()),
            );
            if rate > self.cfg.error_threshold {
                return Ok(self.abort(Stage::Sp5, rate));
            }
            returned_seqs.push(back);
            schedules.push(schedule);
        }

        // SP6: ENC order disclosure and decoding.
        let mut decoded = Vec::with_capacity(bids.len());
        for ((bid, schedule), seq) in bids.iter().zip(&schedules).zip(returned_seqs.iter_mut()) {
            let order = self.adversary.enc_order(bid.owner, bid, schedule.enc_order());
            self.transcript.record(
                Actor::Bidder(bid.owner.0),
                Action::Announce,
                format!("SP6 enc order={order:?}"),
            );
            if order.len() != m {
                return Err(Error::ProtocolFault(format!(
                    "{} announced {} ENC positions, expected {m}",
                    bid.owner,
                    order.len()
                )));
            }
            validate_positions(order.iter().copied(), n, "ENC position")?;
            let mut bits = Vec::with_capacity(m);
            for &pos in &order {
                bits.push(seq[pos].measure_travel(0, Basis::Z, self.rng)?);
            }
            self.audit.record_n(Actor::Auctioneer, "SP6", Capability::MeasureZ, m as u64);
            decoded.push(BidString::new(bid.owner, bits)?);
        }
        let k = select_winner(&decoded).expect("at least two bidders");
        let announced = self.adversary.announce_winner(decoded[k].clone());
        if !parties.contains(&announced.owner) {
            return Err(Error::ProtocolFault(format!("announced winner {} is not a bidder", announced.owner)));
        }
        self.transcript.record(
            Actor::Auctioneer,
            Action::Announce,
            format!("SP6 winner={} bid={announced}", announced.owner),
        );

        // SP7: every other bidder recomputes the winner's digest.
        let w = announced.owner;
        let mut fair = announced.len() == m;
        for &x in parties.iter().filter(|&&x| x != w) {
            let key = rings[&x].get(x, w)?;
            let ok = fair && bid_digest(key, &announced) == references[&(w, x)];
            self.transcript.record(
                Actor::Bidder(x.0),
                Action::Announce,
                format!("SP7 digest {}", if ok { "match" } else { "mismatch" }),
            );
            fair &= ok;
        }
        let verdict = if fair { Verdict::Fair } else { Verdict::Unfair };
        self.transcript
            .record(Actor::Auctioneer, Action::Announce, format!("verdict={verdict}"));
        let error_rate = if sp1_errors.1 == 0 { worst } else { worst.max(sp1_errors.0 as f64 / sp1_errors.1 as f64) };
        Ok(SqsbaRun {
            outcome: AuctionOutcome::announced(announced, verdict, error_rate),
            transcript: std::mem::take(&mut self.transcript),
            audit: std::mem::take(&mut self.audit),
            decoded,
            aborted_at: None,
            checks: std::mem::take(&mut self.checks),
            commitments: std::mem::take(&mut self.commitments),
        })
    }

    fn transmit(&mut self, phase: Phase, from: Actor, to: Actor, seq: &mut Vec<Parcel>, stage: &str) -> Result<()> {
        let label = format!("{stage} {from}->{to} qubits={}", seq.len());
        transfer(
            Link { phase, from, to },
            seq,
            self.adversary,
            &mut self.transcript,
            self.rng,
            label,
        )
    }

    fn abort(&mut self, stage: Stage, rate: f64) -> SqsbaRun {
        self.transcript.record(
            Actor::Auctioneer,
            Action::Abort,
            format!("{stage} error rate {rate:.4} above threshold"),
        );
        SqsbaRun {
            outcome: AuctionOutcome::aborted(rate),
            transcript: std::mem::take(&mut self.transcript),
            audit: std::mem::take(&mut self.audit),
            decoded: Vec::new(),
            aborted_at: Some(stage),
            checks: std::mem::take(&mut self.checks),
            commitments: std::mem::take(&mut self.commitments),
        }
    }
}

fn validate_positions(positions: impl Iterator<Item = usize>, n: usize, what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for p in positions {
        if p >= n || !seen.insert(p) {
            return Err(Error::ProtocolFault(format!("{what} {p} is out of range or repeated")));
        }
    }
    Ok(())
}
