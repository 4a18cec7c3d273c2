use std::path::{Path, PathBuf};

use clap::Args;
use liegrowth::arith::is_prime;
use liegrowth::forms::FormDescriptor;
use serde::{Deserialize, Serialize};

use crate::output::Format;
use crate::CliError;

/// Flags shared by every subcommand. A JSON config file uses the same keys
/// (kebab-case) plus `experiment`; flags given on the command line win.
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Subcommand the config file was written for.
    #[arg(skip)]
    pub experiment: Option<String>,
    /// Lie type such as A1, B3, or a twisted label such as 2A2.
    #[arg(long = "type")]
    #[serde(rename = "type")]
    pub kind: Option<String>,
    /// Order of the diagram twist (2 or 3).
    #[arg(long)]
    pub twist: Option<usize>,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<u64>,
    /// Inclusive prime range `lo..hi`.
    #[arg(long)]
    pub p_range: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Size cutoff for ball computations.
    #[arg(long)]
    pub cutoff: Option<u128>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Record wall-clock time per trial (breaks byte-identical reruns).
    #[arg(long)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fills unset fields from `file`.
    pub fn merged(self, file: ExperimentConfig) -> Self {
        Self {
            experiment: self.experiment.or(file.experiment),
            kind: self.kind.or(file.kind),
            twist: self.twist.or(file.twist),
            p: if self.p.is_empty() { file.p } else { self.p },
            p_range: self.p_range.or(file.p_range),
            trials: self.trials.or(file.trials),
            seed: self.seed.or(file.seed),
            cutoff: self.cutoff.or(file.cutoff),
            out: self.out.or(file.out),
            format: self.format.or(file.format),
            timing: self.timing || file.timing,
        }
    }

    pub fn form(&self) -> Result<FormDescriptor, CliError> {
        let kind = self.kind.as_deref().ok_or_else(|| CliError::Config("--type is required".into()))?;
        let label = match self.twist {
            None | Some(1) => kind.to_string(),
            Some(d) if kind.starts_with(|c: char| c.is_ascii_digit()) => {
                return Err(CliError::Config(format!("--twist {d} given with twisted type {kind}")));
            }
            Some(d) => format!("{d}{kind}"),
        };
        label.parse().map_err(|e| CliError::Config(format!("{label}: {e}")))
    }

    /// Primes from `--p` followed by those in `--p-range`.
    pub fn primes(&self) -> Result<Vec<u64>, CliError> {
        let mut out = self.p.clone();
        if let Some(r) = &self.p_range {
            let (lo, hi) = r
                .split_once("..")
                .and_then(|(a, b)| Some((a.trim().parse::<u64>().ok()?, b.trim().parse::<u64>().ok()?)))
                .ok_or_else(|| CliError::Config(format!("bad range {r:?}, expected lo..hi")))?;
            out.extend((lo..=hi).filter(|&q| is_prime(q)));
        }
        if let Some(q) = out.iter().find(|&&q| !is_prime(q)) {
            return Err(CliError::Config(format!("{q} is not prime")));
        }
        if out.is_empty() {
            return Err(CliError::Config("no primes given, use --p or --p-range".into()));
        }
        Ok(out)
    }

    pub fn single_prime(&self) -> Result<u64, CliError> {
        match self.primes()?.as_slice() {
            [p] => Ok(*p),
            ps => Err(CliError::Config(format!("expected one prime, got {}", ps.len()))),
        }
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::Config("--seed is required for randomized experiments".into()))
    }

    pub fn trials(&self, default: usize) -> Result<usize, CliError> {
        match self.trials.unwrap_or(default) {
            0 => Err(CliError::Config("trial count must be at least 1".into())),
            n => Ok(n),
        }
    }
}
