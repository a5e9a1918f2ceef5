//! Bids, permutations and auction outcomes shared by every protocol.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bidder identity. Bidders are numbered from 1; the auctioneer is not a `PartyId`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartyId(pub usize);

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bob{}", self.0)
    }
}

pub const MAX_BID_BITS: usize = 64;

/// An `m`-bit bid, most significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BidString {
    pub owner: PartyId,
    bits: Vec<bool>,
}

impl BidString {
    pub fn new(owner: PartyId, bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_BID_BITS {
            return Err(Error::InvalidBid(format!(
                "bid length {} outside 1..={MAX_BID_BITS}",
                bits.len()
            )));
        }
        Ok(Self { owner, bits })
    }

    pub fn from_value(owner: PartyId, value: u64, m: usize) -> Result<Self> {
        if m == 0 || m > MAX_BID_BITS {
            return Err(Error::InvalidBid(format!("bid length {m} outside 1..={MAX_BID_BITS}")));
        }
        if m < 64 && value >> m != 0 {
            return Err(Error::InvalidBid(format!("value {value} does not fit in {m} bits")));
        }
        let bits = (0..m).rev().map(|k| (value >> k) & 1 == 1).collect();
        Ok(Self { owner, bits })
    }

    pub fn random<R: Rng + ?Sized>(owner: PartyId, m: usize, rng: &mut R) -> Result<Self> {
        Self::new(owner, (0..m).map(|_| rng.random::<bool>()).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn value(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    /// Bits for two-bit block encodings: a leading 0 is prepended when the
    /// length is odd, which leaves the value unchanged.
    pub fn padded_even(&self) -> Vec<bool> {
        let mut v = Vec::with_capacity(self.bits.len() + 1);
        if self.bits.len() % 2 == 1 {
            v.push(false);
        }
        v.extend_from_slice(&self.bits);
        v
    }

    /// Two-bit blocks of [`Self::padded_even`], as `(high, low)` pairs.
    pub fn blocks(&self) -> Vec<(bool, bool)> {
        self.padded_even().chunks(2).map(|c| (c[0], c[1])).collect()
    }

    pub fn with_bits(&self, bits: Vec<bool>) -> Result<Self> {
        Self::new(self.owner, bits)
    }
}

impl fmt::Display for BidString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Bijection on positions `0..n`. Applying it to a sequence yields
/// `out[k] = items[mapping[k]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(Error::InvalidPermutation(format!("{mapping:?} is not a bijection")));
            }
            seen[m] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut mapping: Vec<usize> = (0..n).collect();
        mapping.shuffle(rng);
        Self { mapping }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply<T: Clone>(&self, items: &[T]) -> Result<Vec<T>> {
        if items.len() != self.mapping.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mapping.len(),
                actual: items.len(),
            });
        }
        Ok(self.mapping.iter().map(|&m| items[m].clone()).collect())
    }

    pub fn invert(&self) -> Self {
        let mut inv = vec![0; self.mapping.len()];
        for (k, &m) in self.mapping.iter().enumerate() {
            inv[m] = k;
        }
        Self { mapping: inv }
    }

    /// Position in the permuted sequence that original index `index` moves to.
    pub fn destination(&self, index: usize) -> usize {
        self.mapping
            .iter()
            .position(|&m| m == index)
            .expect("index within permutation")
    }

    /// `self ∘ first`: applying the result equals applying `first`, then `self`.
    pub fn after(&self, first: &Permutation) -> Result<Self> {
        if first.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: first.len(),
            });
        }
        Ok(Self {
            mapping: self.mapping.iter().map(|&m| first.mapping[m]).collect(),
        })
    }

    pub fn fixed_points(&self) -> usize {
        self.mapping.iter().enumerate().filter(|(k, m)| k == *m).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Fair,
    Unfair,
    AbortedEavesdropping,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Fair => "fair",
            Verdict::Unfair => "unfair",
            Verdict::AbortedEavesdropping => "aborted-eavesdropping",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuctionOutcome {
    pub winner: Option<PartyId>,
    pub winning_bid: Option<BidString>,
    pub verdict: Verdict,
    pub error_rate_observed: f64,
}

impl AuctionOutcome {
    pub fn aborted(error_rate: f64) -> Self {
        Self {
            winner: None,
            winning_bid: None,
            verdict: Verdict::AbortedEavesdropping,
            error_rate_observed: error_rate,
        }
    }

    pub fn announced(winning_bid: BidString, verdict: Verdict, error_rate: f64) -> Self {
        Self {
            winner: Some(winning_bid.owner),
            winning_bid: Some(winning_bid),
            verdict,
            error_rate_observed: error_rate,
        }
    }
}

/// Index of the highest bid; ties go to the lowest index.
pub fn select_winner(bids: &[BidString]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, b) in bids.iter().enumerate() {
        if best.is_none_or(|w| b.value() > bids[w].value()) {
            best = Some(k);
        }
    }
    best
}

/// Checks that there are at least two bidders and every bid has length `m`.
pub(crate) fn validate_bids(bids: &[BidString]) -> Result<usize> {
    if bids.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 bidders, got {}",
            bids.len()
        )));
    }
    let m = bids[0].len();
    if let Some(b) = bids.iter().find(|b| b.len() != m) {
        return Err(Error::InvalidBid(format!(
            "bid of {} has length {}, expected {m}",
            b.owner,
            b.len()
        )));
    }
    Ok(m)
}
