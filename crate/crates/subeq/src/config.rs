//! Experiment configuration shared by every subcommand. Values come from the
//! command line, then from an optional TOML file given with `--config`.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// TOML file with defaults for any of the options below.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Validate the configuration and exit without computing.
    #[arg(long)]
    #[serde(skip)]
    pub dry_run: bool,

    /// Named cone (see `subeq catalog`).
    #[arg(long, alias = "name")]
    pub cone: Option<String>,
    /// Group: on, un, spn-sp1 or spn-s1.
    #[arg(long)]
    pub group: Option<String>,
    /// Comma-separated component names, with --group, to build a cone.
    #[arg(long, value_delimiter = ',')]
    pub components: Option<Vec<String>>,
    /// Number of real, complex or quaternionic coordinates.
    #[arg(long)]
    pub n: Option<usize>,
    /// Cone catalog file; defaults to $SUBEQ_CATALOG.
    #[arg(long)]
    pub catalog: Option<PathBuf>,

    /// Matrix file for `decompose`.
    #[arg(long)]
    pub matrix: Option<PathBuf>,

    /// Domain: box or disk.
    #[arg(long)]
    pub domain: Option<String>,
    /// Grid spacing.
    #[arg(long)]
    pub h: Option<f64>,
    /// Boundary function: affine, quadratic, x2-y2, max-affine or trig.
    #[arg(long)]
    pub phi: Option<String>,
    /// Parameters of the boundary function (comma-separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phi_params: Option<Vec<f64>>,
    /// Scheme: directional or cross.
    #[arg(long)]
    pub scheme: Option<String>,

    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_sweeps: Option<usize>,
    /// Random samples per check.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Interior nodes sampled by `envelope`.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,

    /// Grid file written by `solve` or read by `witness`.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Node index for `witness` (all interior nodes when absent).
    #[arg(long)]
    pub node: Option<usize>,
    /// Heat map of a 2-d solution (portable pixmap).
    #[arg(long)]
    pub ppm: Option<PathBuf>,
    /// Write JSON-lines records here instead of stdout.
    #[arg(long)]
    pub records: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 0x5eed;

macro_rules! fill {
    ($dst:ident, $src:ident, $($f:ident),*) => { $( if $dst.$f.is_none() { $dst.$f = $src.$f; } )* };
}

impl ExperimentConfig {
    /// Fills options missing on the command line from the `--config` file.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load(&path)?;
        fill!(
            self, file, cone, group, components, n, catalog, matrix, domain, h, phi, phi_params,
            scheme, tol, max_sweeps, samples, nodes, seed, grid, node, ppm, records
        );
        Ok(self)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    /// Rejects non-positive tolerances and spacings.
    pub fn check_numbers(&self) -> Result<(), CliError> {
        for (name, v) in [("tol", self.tol), ("h", self.h)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Usage(format!(
                        "--{name} must be positive, got {v}"
                    )));
                }
            }
        }
        if self.samples == Some(0) {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        Ok(())
    }
}

pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}
