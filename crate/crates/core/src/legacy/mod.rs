//! The Bell-pair quantum sealed-bid auction (`Liu`) and its two
//! single-qubit post-confirmation variants (`Zhang1`, `Zhang2`), run as
//! party state machines over attackable links.
//!
//! All bidders in these protocols hold full quantum devices. Their
//! capability audits therefore record non-classical actions (diagonal-basis
//! preparation and measurement, Pauli and rotation gates, Bell measurement),
//! which is the machine-checked form of the observation that the Zhang
//! variants are not semi-quantum.

mod decoy;
mod encoding;
mod run;

pub use decoy::{check_decoys, insert_decoys, strip_decoys, DecoyCheck, DecoyKey, DecoyPolicy, DEFAULT_ERROR_THRESHOLD};
pub use encoding::{
    bits_from_bell, liu_confirmation_pairs, liu_decode, liu_encode, zhang1_confirmation_states, zhang1_state,
    zhang2_confirmation_states, zhang2_encode, zhang2_mismatch_probability, zhang2_theta,
};
pub use run::{run_legacy, run_liu, run_zhang1, run_zhang2, LegacyConfig, LegacyRun, Variant};
