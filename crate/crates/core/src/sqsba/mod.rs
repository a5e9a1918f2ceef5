//! Semi-quantum sealed-bid auction.
//!
//! Bidders only prepare and measure in the computational basis or reflect
//! qubits back; every such move goes through [`ClassicalOps`] so the
//! capability audit can prove it. A run has seven stages:
//!
//! 1. mediated key distribution between every pair of bidders,
//! 2. hash commitments to each bid under the pairwise keys,
//! 3. random BB84 states from the auctioneer to each bidder,
//! 4. ENC/CTRL encoding and a secret reordering,
//! 5. disclosure and checking of the CTRL positions,
//! 6. disclosure of the ENC positions and winner selection,
//! 7. verification of the winning bid against the commitments.

mod classical;
mod commit;
mod config;
mod keydist;
mod session;

pub use classical::ClassicalOps;
pub use commit::{bid_digest, hamming_distance, hash, pad_bid, sp2_commit, xor, Commitment, HashDigest};
pub use config::{SessionConfig, DEFAULT_ERROR_THRESHOLD, KEY_BITS};
pub use keydist::{sp1_keydist, Key, KeyDistribution, KeyMaterial, KeyRing};
pub use session::{run_sqsba, CheckRecord, EncCtrlSchedule, SqsbaRun, Stage};
