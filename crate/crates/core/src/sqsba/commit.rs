use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::keydist::{Key, KeyRing};
use crate::auction::{BidString, PartyId};
use crate::error::Result;

pub type HashDigest = [u8; 32];

/// SHA-256 of a 256-bit block.
pub fn hash(input: &[u8; 32]) -> HashDigest {
    Sha256::digest(input).into()
}

/// Left-zero-extends a bid to 256 bits.
pub fn pad_bid(bid: &BidString) -> [u8; 32] {
    let mut out = [0u8; 32];
    out[24..].copy_from_slice(&bid.value().to_be_bytes());
    out
}

pub fn xor(a: &[u8; 32], b: &[u8; 32]) -> [u8; 32] {
    std::array::from_fn(|k| a[k] ^ b[k])
}

/// `H(K ⊕ pad(B))`.
pub fn bid_digest(key: &Key, bid: &BidString) -> HashDigest {
    hash(&xor(key, &pad_bid(bid)))
}

/// `L = K ⊕ H(K ⊕ pad(B))`, sent from `sender` to `receiver`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commitment {
    pub sender: PartyId,
    pub receiver: PartyId,
    pub payload: [u8; 32],
}

impl Commitment {
    pub fn new(sender: PartyId, receiver: PartyId, key: &Key, bid: &BidString) -> Self {
        Self {
            sender,
            receiver,
            payload: xor(key, &bid_digest(key, bid)),
        }
    }

    /// What the receiver stores for post-confirmation: `R = L ⊕ K`.
    pub fn reference(&self, key: &Key) -> HashDigest {
        xor(&self.payload, key)
    }
}

/// Commitments from bidder `sender` to every other holder of a key in `keys`.
pub fn sp2_commit(sender: PartyId, bid: &BidString, receivers: &[PartyId], keys: &KeyRing) -> Result<Vec<Commitment>> {
    receivers
        .iter()
        .filter(|&&x| x != sender)
        .map(|&x| Ok(Commitment::new(sender, x, keys.get(sender, x)?, bid)))
        .collect()
}

pub fn hamming_distance(a: &[u8; 32], b: &[u8; 32]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn sha256_known_answer() {
        // SHA-256 of 32 zero bytes.
        assert_eq!(
            hex::encode(hash(&[0u8; 32])),
            "66687aadf862bd776c8fc18b8e9f8e20089714856ee233b3902a591d0d5f2925"
        );
    }

    #[test]
    fn reference_cancels_key() {
        let key = [0x5au8; 32];
        let bid = BidString::from_value(PartyId(1), 0b1011, 4).unwrap();
        let c = Commitment::new(PartyId(1), PartyId(2), &key, &bid);
        assert_eq!(c.reference(&key), bid_digest(&key, &bid));
    }

    #[test]
    fn padding_is_left_zero_extension() {
        let bid = BidString::from_value(PartyId(1), 0b101, 3).unwrap();
        let p = pad_bid(&bid);
        assert!(p[..31].iter().all(|&b| b == 0));
        assert_eq!(p[31], 0b101);
    }

    #[test]
    fn missing_key_is_rejected() {
        let ring = KeyRing::default();
        let bid = BidString::from_value(PartyId(1), 1, 2).unwrap();
        assert_eq!(
            sp2_commit(PartyId(1), &bid, &[PartyId(2)], &ring),
            Err(Error::MissingKey(1, 2))
        );
    }
}
