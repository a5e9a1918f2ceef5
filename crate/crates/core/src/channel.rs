//! Quantum links between parties and the adversary interface that sits on them.

use rand::RngCore;

use crate::auction::{BidString, Permutation, PartyId};
use crate::error::{Error, Result};
use crate::quantum::{
    apply_unitary, measure_and_remove, measure_projective, Basis, ProjBasis, StateVector, UnitaryOp,
    MAX_QUBITS,
};
use crate::sqsba::EncCtrlSchedule;
use crate::transcript::Actor;

/// A unit in flight: `travel` qubits that follow the protocol, followed by
/// any ancillas an adversary has entangled with them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Parcel {
    joint: StateVector,
    travel: usize,
}

impl Parcel {
    pub fn new(joint: StateVector, travel: usize) -> Result<Self> {
        if travel == 0 || travel > joint.num_qubits() {
            return Err(Error::QubitCount(travel));
        }
        Ok(Self { joint, travel })
    }

    pub fn single(state: StateVector) -> Self {
        Self {
            travel: state.num_qubits(),
            joint: state,
        }
    }

    pub fn joint(&self) -> &StateVector {
        &self.joint
    }

    pub fn travel(&self) -> usize {
        self.travel
    }

    pub fn num_ancillas(&self) -> usize {
        self.joint.num_qubits() - self.travel
    }

    /// The travel register alone, when no ancilla is attached.
    pub fn travel_state(&self) -> Option<StateVector> {
        (self.num_ancillas() == 0).then_some(self.joint)
    }

    pub fn apply(&mut self, op: &UnitaryOp, targets: &[usize]) -> Result<()> {
        self.joint = apply_unitary(&self.joint, op, targets)?;
        Ok(())
    }

    /// Measures travel qubit `qubit` in a BB84 basis; returns the outcome bit.
    pub fn measure_travel(&mut self, qubit: usize, basis: Basis, rng: &mut dyn RngCore) -> Result<bool> {
        self.measure_travel_in(&[qubit], ProjBasis::for_basis(basis), rng)
            .map(|k| k == 1)
    }

    /// Projective measurement of some travel qubits; the parcel collapses.
    pub fn measure_travel_in(
        &mut self,
        qubits: &[usize],
        basis: &ProjBasis,
        rng: &mut dyn RngCore,
    ) -> Result<usize> {
        if qubits.iter().any(|&q| q >= self.travel) {
            return Err(Error::InvalidTargets {
                targets: qubits.to_vec(),
                num_qubits: self.travel,
            });
        }
        let rec = measure_projective(&self.joint, basis, qubits, rng)?;
        self.joint = rec.post_state.expect("projective measurement keeps a state");
        Ok(rec.outcome_index)
    }

    /// Discards a single travel qubit and puts `fresh` in its place. Ancillas
    /// entangled with the discarded qubit are left in the matching reduced state.
    pub fn replace_travel(&mut self, fresh: &StateVector, rng: &mut dyn RngCore) -> Result<()> {
        if self.travel != 1 || fresh.num_qubits() != 1 {
            return Err(Error::QubitCount(self.travel));
        }
        if self.num_ancillas() == 0 {
            self.joint = *fresh;
            return Ok(());
        }
        // Tracing out equals measuring in any basis and forgetting the result.
        let (_, rest) = measure_and_remove(&self.joint, ProjBasis::z(), 0, rng)?;
        self.joint = rest.insert_qubit(0, fresh)?;
        Ok(())
    }

    /// Appends an ancilla; returns its qubit index in the joint register.
    pub fn attach_ancilla(&mut self, ancilla: &StateVector) -> Result<usize> {
        let n = self.joint.num_qubits() + ancilla.num_qubits();
        if n > MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        self.joint = self.joint.tensor(ancilla)?;
        Ok(n - 1)
    }

    /// Measures the last ancilla in `basis` and removes it from the parcel.
    pub fn measure_ancilla_and_remove(&mut self, basis: &ProjBasis, rng: &mut dyn RngCore) -> Result<usize> {
        if self.num_ancillas() == 0 {
            return Err(Error::QubitCount(0));
        }
        let last = self.joint.num_qubits() - 1;
        let (k, rest) = measure_and_remove(&self.joint, basis, last, rng)?;
        self.joint = rest;
        Ok(k)
    }
}

/// Protocol stage a link belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Auctioneer to bidder, bidding sequence.
    LiuDistribution,
    /// Bidder to bidder, post-confirmation sequence (all three legacy variants).
    LiuConfirmation,
    /// Bidder to auctioneer, encoded bidding sequence.
    LiuReturn,
    /// Entangled pairs from the auctioneer to two bidders.
    SqkdOut,
    /// Sifted or reflected qubits back to the auctioneer.
    SqkdReturn,
    SqsbaOut,
    SqsbaReturn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Link {
    pub phase: Phase,
    pub from: Actor,
    pub to: Actor,
}

/// Hooks through which an outsider, a dishonest auctioneer or a dishonest
/// bidder influences a run. Every method defaults to honest behavior.
pub trait Adversary {
    /// Called with every sequence in flight. Returns true when the
    /// adversary touched it, which is logged as an interception.
    fn on_transit(&mut self, _link: &Link, _parcels: &mut Vec<Parcel>, _rng: &mut dyn RngCore) -> Result<bool> {
        Ok(false)
    }

    /// Sees every commitment payload sent between bidders.
    fn observe_commitment(&mut self, _from: PartyId, _to: PartyId, _payload: &[u8; 32]) {}

    /// Insider view of a bidder's secret ENC/CTRL schedule.
    fn on_schedule(&mut self, _bidder: PartyId, _schedule: &EncCtrlSchedule) {}

    /// ENC order announced by `bidder`, given the honest order.
    fn enc_order(&mut self, _bidder: PartyId, _bid: &BidString, honest: Vec<usize>) -> Vec<usize> {
        honest
    }

    /// Permutation disclosed by the winner to `receiver` during confirmation.
    fn disclosed_permutation(
        &mut self,
        _bidder: PartyId,
        _receiver: PartyId,
        _bid: &BidString,
        honest: &Permutation,
    ) -> Permutation {
        honest.clone()
    }

    /// Winner and winning bid announced by the auctioneer.
    fn announce_winner(&mut self, honest: BidString) -> BidString {
        honest
    }
}

/// The adversary that does nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct Honest;

impl Adversary for Honest {}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::quantum::{is_product, Bb84State, UnitaryOp};

    #[test]
    fn replace_traces_out_entangled_partner() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut p = Parcel::single(Bb84State::Plus.state());
        p.attach_ancilla(&Bb84State::Zero.state()).unwrap();
        p.apply(&UnitaryOp::cnot(), &[0, 1]).unwrap();
        p.replace_travel(&Bb84State::One.state(), &mut rng).unwrap();
        assert_eq!(p.travel(), 1);
        assert_eq!(p.num_ancillas(), 1);
        let (product, purity) = is_product(p.joint(), &[0], 1e-12).unwrap();
        assert!(product && (purity - 1.0).abs() < 1e-12);
        let bit = p.measure_travel(0, Basis::Z, &mut rng).unwrap();
        assert!(bit);
    }

    #[test]
    fn ancilla_limits() {
        let mut p = Parcel::single(crate::quantum::BellState::PhiPlus.state());
        p.attach_ancilla(&Bb84State::Zero.state()).unwrap();
        p.attach_ancilla(&Bb84State::Zero.state()).unwrap();
        assert!(p.attach_ancilla(&Bb84State::Zero.state()).is_err());
        let mut q = Parcel::single(Bb84State::Zero.state());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(q.measure_ancilla_and_remove(ProjBasis::z(), &mut rng).is_err());
        assert!(q.measure_travel(1, Basis::Z, &mut rng).is_err());
    }
}
