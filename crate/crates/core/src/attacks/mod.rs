//! Adversary strategies against the legacy protocols and the semi-quantum
//! auction. Every attack is a pure function of its [`AttackConfig`]: trial
//! `i` draws from [`crate::rng::trial_rng`]`(seed, i)` and results are merged
//! by count addition, so reports do not depend on the worker count.

mod liu;
mod report;
mod semiquantum;
mod zhang;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use liu::{
    disturbance, false_permutation_liu, lowest_rearrangement, DisturbanceAdversary, DisturbanceMode, LiuFalsePermutation,
};
pub use report::{AttackReport, Metric, CI_Z};
pub use semiquantum::{
    campaign_report, cnot, commitment_reader, false_permutation_sqsba, intercept_resend_swap, sqsba_campaign, CampaignStats,
    CnotAdversary, CnotMode, EncFlip, FalseEncOrder, Scenario, SwapAdversary,
};
pub use zhang::{
    basis_split_block_success, basis_split_distributions, collusion, multicopy_majority, multicopy_usd,
    semi_honest_projective, semi_honest_usd, zhang1_replacement, zhang2_basis_split, CollusionMode, ReplaceMode,
    SPLIT_LABELS,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    /// Copies held by the attacker, or number of colluders.
    pub l: usize,
    /// Bid length.
    pub m: usize,
    /// Independent trials; each covers one bid or one session.
    pub trials: u64,
    pub seed: u64,
    /// Total parties including the auctioneer. When absent for copy-based
    /// attacks, enough parties are assumed to supply `l` copies.
    pub num_parties: Option<usize>,
    pub delta: f64,
    pub error_threshold: f64,
    /// Decoys per protected sequence in the legacy protocols.
    pub decoys: usize,
    /// Permutation countermeasure in the semi-quantum auction.
    pub defense: bool,
}

impl Default for AttackConfig {
    fn default() -> Self {
        Self {
            l: 1,
            m: 8,
            trials: 10_000,
            seed: 0,
            num_parties: None,
            delta: 0.25,
            error_threshold: 0.05,
            decoys: 8,
            defense: true,
        }
    }
}

impl AttackConfig {
    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::InvalidConfig("l must be at least 1".into()));
        }
        if self.m == 0 || self.m > crate::auction::MAX_BID_BITS {
            return Err(Error::InvalidConfig(format!("bid length {} outside 1..=64", self.m)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if let Some(n) = self.num_parties {
            if n < 3 {
                return Err(Error::InvalidConfig(format!("{n} parties; need an auctioneer and two bidders")));
            }
        }
        if !(self.error_threshold.is_finite() && (0.0..=1.0).contains(&self.error_threshold)) {
            return Err(Error::InvalidConfig(format!("threshold {} outside [0, 1]", self.error_threshold)));
        }
        Ok(())
    }

    /// Checks that `l` copies can be taken from the `N − 2` that circulate.
    fn check_copies(&self) -> Result<()> {
        self.validate()?;
        match self.num_parties {
            Some(n) if self.l > n - 2 => Err(Error::InvalidConfig(format!(
                "{} copies requested but only {} circulate among {n} parties",
                self.l,
                n - 2
            ))),
            _ => Ok(()),
        }
    }

    /// Bidders in a protocol session, defaulting to three.
    fn bidders(&self) -> usize {
        self.num_parties.map_or(3, |n| n - 1)
    }
}

/// Element-wise sum of fixed-size count arrays.
fn add<const K: usize>(mut a: [u64; K], b: [u64; K]) -> [u64; K] {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(AttackConfig::default().validate().is_ok());
        let bad = |f: fn(&mut AttackConfig)| {
            let mut c = AttackConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.l = 0));
        assert!(bad(|c| c.m = 65));
        assert!(bad(|c| c.trials = 0));
        assert!(bad(|c| c.num_parties = Some(2)));
        assert!(bad(|c| c.error_threshold = 1.5));
        let c = AttackConfig {
            l: 5,
            num_parties: Some(6),
            ..AttackConfig::default()
        };
        assert!(c.check_copies().is_err());
        assert!(AttackConfig { l: 4, ..c }.check_copies().is_ok());
    }

    #[test]
    fn counts_add() {
        assert_eq!(add([1, 2, 3], [4, 5, 6]), [5, 7, 9]);
    }
}
