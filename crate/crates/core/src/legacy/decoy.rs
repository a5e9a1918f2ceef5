use rand::seq::index::sample;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::channel::Parcel;
use crate::error::{Error, Result};
use crate::quantum::Bb84State;

pub const DEFAULT_ERROR_THRESHOLD: f64 = 0.05;

/// How many BB84 decoys to hide in a sequence and the tolerated error rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoyPolicy {
    pub count: usize,
    pub error_threshold: f64,
}

impl DecoyPolicy {
    pub fn new(count: usize, error_threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&error_threshold) {
            return Err(Error::OutOfRange(format!("error threshold {error_threshold}")));
        }
        Ok(Self {
            count,
            error_threshold,
        })
    }

    pub fn none() -> Self {
        Self {
            count: 0,
            error_threshold: DEFAULT_ERROR_THRESHOLD,
        }
    }
}

impl Default for DecoyPolicy {
    fn default() -> Self {
        Self {
            count: 8,
            error_threshold: DEFAULT_ERROR_THRESHOLD,
        }
    }
}

/// Secret record of where the decoys sit and what they are.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoyKey {
    /// Ascending positions in the enlarged sequence.
    pub positions: Vec<usize>,
    pub labels: Vec<Bb84State>,
}

impl DecoyKey {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Result of measuring every decoy in its preparation basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoyCheck {
    pub mismatches: usize,
    pub checked: usize,
}

impl DecoyCheck {
    pub fn error_rate(&self) -> f64 {
        if self.checked == 0 {
            0.0
        } else {
            self.mismatches as f64 / self.checked as f64
        }
    }

    pub fn exceeds(&self, threshold: f64) -> bool {
        self.error_rate() > threshold
    }
}

/// Hides `policy.count` uniformly random BB84 decoys at random positions.
pub fn insert_decoys<R: Rng + ?Sized>(
    seq: Vec<Parcel>,
    policy: &DecoyPolicy,
    rng: &mut R,
) -> (Vec<Parcel>, DecoyKey) {
    let total = seq.len() + policy.count;
    let mut positions = sample(rng, total, policy.count).into_vec();
    positions.sort_unstable();
    let labels: Vec<Bb84State> = (0..policy.count).map(|_| Bb84State::random(rng)).collect();
    let mut out = Vec::with_capacity(total);
    let mut originals = seq.into_iter();
    let mut d = 0;
    for k in 0..total {
        if d < positions.len() && positions[d] == k {
            out.push(Parcel::single(labels[d].state()));
            d += 1;
        } else {
            out.push(originals.next().expect("enough originals"));
        }
    }
    (out, DecoyKey { positions, labels })
}

/// Measures each decoy in its preparation basis and counts disagreements.
pub fn check_decoys(received: &mut [Parcel], key: &DecoyKey, rng: &mut dyn RngCore) -> Result<DecoyCheck> {
    let mut check = DecoyCheck {
        mismatches: 0,
        checked: key.len(),
    };
    for (&pos, &label) in key.positions.iter().zip(&key.labels) {
        let parcel = received.get_mut(pos).ok_or_else(|| {
            Error::ProtocolFault(format!("decoy position {pos} beyond sequence"))
        })?;
        if parcel.measure_travel(0, label.basis(), rng)? != label.bit() {
            check.mismatches += 1;
        }
    }
    Ok(check)
}

/// Removes the decoys, restoring the original order of the rest.
pub fn strip_decoys(received: Vec<Parcel>, key: &DecoyKey) -> Vec<Parcel> {
    let mut d = 0;
    received
        .into_iter()
        .enumerate()
        .filter(|(k, _)| {
            if d < key.positions.len() && key.positions[d] == *k {
                d += 1;
                false
            } else {
                true
            }
        })
        .map(|(_, p)| p)
        .collect()
}
