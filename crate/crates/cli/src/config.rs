//! Run configuration shared by every subcommand.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use blocklab::vecspace::FieldSpec;
use clap::Args;
use serde::Serialize;

/// Hard ceiling on span enumerations: 3^12 vectors. Keeping `p^bound` at or
/// below this keeps every exhaustive search desk-scale.
pub const SPAN_CEILING: u64 = 531_441;

/// Knobs shared by all subcommands. Flags are global, so they may appear
/// before or after the subcommand name.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Field characteristic (must be prime).
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u64,

    /// Ambient dimension: grounds are built from basis vectors e_0..e_{dim-1}.
    #[arg(long, global = true, default_value_t = 12)]
    pub dim: usize,

    /// Largest number of blocks a span enumeration may cover.
    #[arg(long, global = true, default_value_t = 12)]
    pub bound: usize,

    /// Replies requested per game run.
    #[arg(long, global = true, default_value_t = 4)]
    pub rounds: usize,

    /// Seed for every randomized check; fixed seed means byte-identical reports.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Also write the JSON report to this path (stdout always gets a copy).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Directory calibration fixtures are read from and written to.
    #[arg(long, global = true, default_value = "fixtures")]
    pub fixtures: PathBuf,
}

impl RunConfig {
    /// Validates the arithmetic invariants and returns the field.
    pub fn field(&self) -> Result<FieldSpec> {
        let field = FieldSpec::new(self.p)
            .with_context(|| format!("--p {} is not a usable characteristic", self.p))?;
        if self.dim == 0 {
            bail!("--dim must be at least 1");
        }
        if self.bound == 0 {
            bail!("--bound must be at least 1");
        }
        let span = u32::try_from(self.bound)
            .ok()
            .and_then(|b| self.p.checked_pow(b));
        match span {
            Some(size) if size <= SPAN_CEILING => {}
            _ => bail!(
                "--p {} with --bound {} would enumerate spans past the ceiling of {} vectors; \
                 lower one of them",
                self.p,
                self.bound,
                SPAN_CEILING
            ),
        }
        Ok(field)
    }

    /// The part of the configuration echoed into reports.
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            p: self.p,
            dim: self.dim,
            bound: self.bound,
            rounds: self.rounds,
            seed: self.seed,
        }
    }

    /// Path of the oscillation calibration fixture.
    pub fn thresholds_path(&self) -> PathBuf {
        self.fixtures.join("osc_thresholds.json")
    }
}

/// Configuration snapshot embedded in every report header.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub p: u64,
    pub dim: usize,
    pub bound: usize,
    pub rounds: usize,
    pub seed: u64,
}
