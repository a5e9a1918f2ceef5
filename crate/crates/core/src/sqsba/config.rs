use serde::{Deserialize, Serialize};

use crate::auction::MAX_BID_BITS;
use crate::error::{Error, Result};

pub const KEY_BITS: usize = 256;
pub const DEFAULT_ERROR_THRESHOLD: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    /// Auctioneer plus bidders.
    pub num_parties: usize,
    pub bid_length: usize,
    /// Check-qubit overhead: each bidder receives `⌈4m(1+δ)⌉` qubits.
    pub delta: f64,
    pub error_threshold: f64,
    /// Whether bidders reorder their returned sequence.
    pub permutation_defense: bool,
}

impl SessionConfig {
    pub fn new(num_parties: usize, bid_length: usize, delta: f64) -> Result<Self> {
        let cfg = Self {
            num_parties,
            bid_length,
            delta,
            error_threshold: DEFAULT_ERROR_THRESHOLD,
            permutation_defense: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_parties < 3 {
            return Err(Error::InvalidConfig(format!(
                "need an auctioneer and at least 2 bidders, got {} parties",
                self.num_parties
            )));
        }
        if self.bid_length == 0 || self.bid_length > MAX_BID_BITS {
            return Err(Error::InvalidConfig(format!("bid length {}", self.bid_length)));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::InvalidConfig(format!("delta {} must be positive", self.delta)));
        }
        if !(0.0..=1.0).contains(&self.error_threshold) {
            return Err(Error::InvalidConfig(format!("error threshold {}", self.error_threshold)));
        }
        Ok(())
    }

    pub fn num_bidders(&self) -> usize {
        self.num_parties - 1
    }

    /// `⌈4m(1+δ)⌉`, with a small allowance so that exact products such as
    /// `4·4·1.25` are not pushed up by rounding.
    pub fn qubits_per_bidder(&self) -> usize {
        (4.0 * self.bid_length as f64 * (1.0 + self.delta) - 1e-9).ceil() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_counts() {
        assert_eq!(SessionConfig::new(4, 4, 0.25).unwrap().qubits_per_bidder(), 20);
        assert_eq!(SessionConfig::new(4, 1, 0.1).unwrap().qubits_per_bidder(), 5);
        assert_eq!(SessionConfig::new(4, 8, 0.25).unwrap().qubits_per_bidder(), 40);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(SessionConfig::new(2, 4, 0.25).is_err());
        assert!(SessionConfig::new(4, 0, 0.25).is_err());
        assert!(SessionConfig::new(4, 65, 0.25).is_err());
        assert!(SessionConfig::new(4, 4, 0.0).is_err());
        assert!(SessionConfig::new(4, 4, f64::NAN).is_err());
    }
}
