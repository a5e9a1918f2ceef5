use rand::RngCore;

use crate::channel::Parcel;
use crate::error::Result;
use crate::quantum::{Basis, Bb84State};
use crate::transcript::{Actor, Capability, CapabilityAudit};

/// The only way a bidder touches qubits. It offers exactly the classical
/// moves (computational-basis preparation and measurement, reflection) and
/// tallies each one into the audit when dropped.
pub struct ClassicalOps<'a> {
    actor: Actor,
    stage: &'static str,
    audit: &'a mut CapabilityAudit,
    prepared: u64,
    measured: u64,
    reflected: u64,
}

impl<'a> ClassicalOps<'a> {
    pub fn new(actor: Actor, stage: &'static str, audit: &'a mut CapabilityAudit) -> Self {
        Self {
            actor,
            stage,
            audit,
            prepared: 0,
            measured: 0,
            reflected: 0,
        }
    }

    /// Measures travel qubit `qubit` in the computational basis.
    pub fn measure_z(&mut self, parcel: &mut Parcel, qubit: usize, rng: &mut dyn RngCore) -> Result<bool> {
        self.measured += 1;
        parcel.measure_travel(qubit, Basis::Z, rng)
    }

    /// SIFT on one qubit of a multi-qubit parcel: measure in Z and resend the
    /// outcome. The measured qubit is left in `|b⟩`, identical to a fresh one.
    pub fn sift(&mut self, parcel: &mut Parcel, qubit: usize, rng: &mut dyn RngCore) -> Result<bool> {
        let bit = self.measure_z(parcel, qubit, rng)?;
        self.prepared += 1;
        Ok(bit)
    }

    /// ENC: drop the received qubit and send a fresh `|bit⟩` instead.
    pub fn replace_with_z(&mut self, parcel: &mut Parcel, bit: bool, rng: &mut dyn RngCore) -> Result<()> {
        self.prepared += 1;
        parcel.replace_travel(&Bb84State::from_basis_bit(Basis::Z, bit).state(), rng)
    }

    /// CTRL: send the qubit back untouched.
    pub fn reflect(&mut self, _parcel: &Parcel) {
        self.reflected += 1;
    }
}

impl Drop for ClassicalOps<'_> {
    fn drop(&mut self) {
        self.audit.record_n(self.actor, self.stage, Capability::PrepareZ, self.prepared);
        self.audit.record_n(self.actor, self.stage, Capability::MeasureZ, self.measured);
        self.audit.record_n(self.actor, self.stage, Capability::Reflect, self.reflected);
    }
}
