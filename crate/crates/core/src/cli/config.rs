//! Run configuration: an optional JSON file merged under command-line flags.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every tunable parameter. Unset fields fall back to per-command defaults.
#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// JSON file with any of these fields; flags given on the command line win.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Directory for CSV/JSON artifacts.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Truncation parameter N.
    #[arg(long)]
    pub n: Option<u32>,
    /// Fourier grid radius.
    #[arg(long)]
    pub radius: Option<usize>,
    /// Largest dyadic size in a sweep.
    #[arg(long)]
    pub max_n: Option<u32>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    /// Overrides b = 1/2 + eps.
    #[arg(long)]
    pub b: Option<f64>,
    /// Overrides b' = 1/2 − 2 eps.
    #[arg(long)]
    pub b_prime: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Time-cutoff scale T.
    #[arg(long = "t")]
    pub t_scale: Option<f64>,
    /// Cutoff scales for T-sweeps.
    #[arg(long, value_delimiter = ',')]
    pub t_values: Option<Vec<f64>>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Moment order(s).
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Kernel variant: generic, h1, h2, h3, h4.
    #[arg(long)]
    pub variant: Option<String>,
    /// Dyadic sizes of a sweep.
    #[arg(long, value_delimiter = ',')]
    pub sweep: Option<Vec<u32>>,
    /// Dyadic tuple N,N1,N2,N3.
    #[arg(long, value_delimiter = ',')]
    pub tuple: Option<Vec<u32>>,
    /// Resonant slot pattern: www, zzz, wzz, wwz.
    #[arg(long)]
    pub case: Option<String>,
    /// Rank of the dual-vector check.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub a1: Option<f64>,
    /// Exponent multiplier C in N^{C a1}; defaults to r.
    #[arg(long)]
    pub c_exp: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Pass threshold of the command's main check.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Broken-control run of the invariance harness.
    #[arg(long)]
    pub control: Option<bool>,
    /// Snapshot to read the initial state from.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Snapshot path for the command's final field.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    /// Reads the JSON file named by `config`, if any, and overlays the flags on it.
    pub fn resolve(flags: &RunConfig) -> Result<RunConfig> {
        let mut merged = match &flags.config {
            Some(path) => Self::from_file(path)?,
            None => RunConfig::default(),
        };
        overlay!(merged, flags; out_dir, n, radius, max_n, eps, s, b, b_prime, t_end, t_scale, t_values, dt,
            samples, seed, p, variant, sweep, tuple, case, r, a1, c_exp, trials, tolerance, control, input, snapshot);
        Ok(merged)
    }

    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed.ok_or(Error::Invalid { field: "seed", reason: "required for stochastic commands".into() })
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("wicknls-out"))
    }

    /// b and b' from eps unless overridden.
    pub fn b_pair(&self, eps: f64) -> (f64, f64) {
        (self.b.unwrap_or(0.5 + eps), self.b_prime.unwrap_or(0.5 - 2.0 * eps))
    }
}

pub fn positive<T: PartialOrd + Default + Copy + std::fmt::Display>(field: &'static str, v: T) -> Result<T> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(Error::Invalid { field, reason: format!("{v} must be positive") })
    }
}
