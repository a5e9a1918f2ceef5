use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Attack,
    Protocol,
    Bounds,
    Reproduce,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One experiment. Every field except `kind` is optional in a config file;
/// missing values take the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Option<Kind>,
    /// Attack name or protocol variant.
    pub target: Option<String>,
    pub l: usize,
    pub m: usize,
    /// Total parties, auctioneer included.
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub delta: f64,
    pub trials: u64,
    pub threshold: f64,
    pub seed: u64,
    pub decoys: usize,
    pub mode: Option<String>,
    pub defense: Option<bool>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: None,
            target: None,
            l: 1,
            m: 8,
            n: None,
            delta: 0.25,
            trials: 10_000,
            threshold: 0.05,
            seed: 0,
            decoys: 8,
            mode: None,
            defense: None,
            out: None,
            format: Format::Csv,
        }
    }
}

/// Command-line values; each one present replaces the config-file value.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// JSON file with `ExperimentConfig` fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Copies held by the attacker, or number of colluders.
    #[arg(long)]
    pub l: Option<usize>,
    /// Bid length in bits.
    #[arg(long)]
    pub m: Option<usize>,
    /// Total parties, auctioneer included.
    #[arg(long = "parties", short = 'N')]
    pub n: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Eavesdropping-check error threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Decoys per protected sequence in the legacy protocols.
    #[arg(long)]
    pub decoys: Option<usize>,
    /// Attack variant, e.g. `both_ways` or `remedy_flip`.
    #[arg(long)]
    pub mode: Option<String>,
    /// Permutation countermeasure for the swap attack.
    #[arg(long)]
    pub defense: Option<bool>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))
    }

    /// Loads `--config` if given, then applies every flag that was set.
    pub fn resolve(kind: Kind, target: Option<String>, o: &Overrides) -> Result<Self, HarnessError> {
        let mut c = match &o.config {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        if let Some(k) = c.kind {
            if k != kind {
                return Err(HarnessError::Usage(format!("config file is for `{k:?}`, not `{kind:?}`")));
            }
        }
        c.kind = Some(kind);
        if target.is_some() {
            c.target = target;
        }
        macro_rules! take {
            ($($f:ident),*) => {$( if let Some(v) = o.$f.clone() { c.$f = v; } )*};
        }
        take!(seed, trials, l, m, delta, threshold, decoys, format);
        if o.n.is_some() {
            c.n = o.n;
        }
        if o.mode.is_some() {
            c.mode = o.mode.clone();
        }
        if o.defense.is_some() {
            c.defense = o.defense;
        }
        if o.out.is_some() {
            c.out = o.out.clone();
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Usage("trials must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(HarnessError::Usage(format!("threshold {} outside [0, 1]", self.threshold)));
        }
        Ok(())
    }
}
