//! Simulation and cryptanalysis of quantum and semi-quantum sealed-bid auctions.
//!
//! The crate is layered bottom-up:
//!
//! - [`quantum`]: exact pure-state simulation of up to four qubits, projective
//!   and POVM measurement, purity diagnostics.
//! - [`stats`]: binomial oracles, relative-entropy tail bounds and confidence
//!   intervals used to check Monte Carlo estimates.
//! - [`channel`], [`transcript`], [`auction`]: the shared protocol plumbing
//!   (attackable quantum links, audit logs, bids and permutations).
//! - [`legacy`]: the Bell-pair protocol and its two single-qubit variants.
//! - [`sqsba`]: the semi-quantum sealed-bid auction with classical bidders.
//! - [`attacks`]: every adversary strategy, each producing an [`attacks::AttackReport`]
//!   that pairs simulated frequencies with exact predictions.
//!
//! All randomness flows through caller-supplied streams; see [`rng`] for the
//! per-trial seed derivation.

pub mod attacks;
pub mod auction;
pub mod channel;
pub mod error;
pub mod legacy;
pub mod quantum;
pub mod rng;
pub mod sqsba;
pub mod stats;
pub mod transcript;

pub use error::{Error, Result};
