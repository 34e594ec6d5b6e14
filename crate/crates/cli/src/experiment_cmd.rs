//! `blocklab experiment`: the two finite dichotomy searches, with the
//! returned verdict re-verified before it is reported.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use blocklab::experiments::{
    asymptotic_below_search, kernel_dichotomy_search, verify_avoidance_witness,
    verify_injective_witness, verify_kernel_witness, AsymptoticVerdict, KernelVerdict, LinMap,
    VecSetOracle,
};
use blocklab::vecspace::BlockSeq;
use clap::Subcommand;
use serde::Serialize;

use crate::config::{ConfigEcho, RunConfig};
use crate::report::{self, SCHEMA};

#[derive(Debug, Subcommand)]
pub enum ExperimentCmd {
    /// Suffix scan for a common kernel or common injectivity.
    Kernel {
        /// JSON matrix files, each {"p":3,"rows":[[...],...]}; repeatable.
        #[arg(long, required = true, num_args = 1..)]
        maps: Vec<PathBuf>,
        /// Blocks in the reported witness.
        #[arg(long, default_value_t = 2)]
        target_len: usize,
    },
    /// Avoid-or-meet search over probe subsequences of the ground.
    Asymptotic {
        /// Comma-separated oracle names: empty | all-nonzero | class-<n>.
        #[arg(long)]
        oracles: String,
        /// Blocks per probe subsequence.
        #[arg(long, default_value_t = 2)]
        probe: usize,
    },
}

#[derive(Debug, Serialize)]
struct KernelReport {
    schema: u32,
    command: &'static str,
    config: ConfigEcho,
    maps: Vec<String>,
    target_len: usize,
    verdict: KernelVerdict,
    verified: bool,
}

#[derive(Debug, Serialize)]
struct AsymptoticReport {
    schema: u32,
    command: &'static str,
    config: ConfigEcho,
    oracles: Vec<String>,
    probe: usize,
    verdict: AsymptoticVerdict,
    verified: bool,
}

fn load_map(path: &PathBuf) -> Result<LinMap> {
    let body = fs::read_to_string(path)
        .with_context(|| format!("reading map file {}", path.display()))?;
    serde_json::from_str(&body).with_context(|| format!("parsing map file {}", path.display()))
}

fn parse_oracle(name: &str) -> Result<VecSetOracle> {
    match name {
        "empty" => Ok(VecSetOracle::empty()),
        "all-nonzero" => Ok(VecSetOracle::all_nonzero()),
        _ => {
            if let Some(n) = name.strip_prefix("class-") {
                let class: u32 =
                    n.parse().with_context(|| format!("bad class in oracle {name:?}"))?;
                Ok(VecSetOracle::osc_class(class))
            } else {
                bail!("unknown oracle {name:?}; use empty, all-nonzero or class-<n>")
            }
        }
    }
}

pub fn cmd_experiment(cmd: &ExperimentCmd, cfg: &RunConfig) -> Result<i32> {
    let field = cfg.field()?;
    let ground = BlockSeq::from_basis(field, 0..cfg.dim.min(cfg.bound));
    match cmd {
        ExperimentCmd::Kernel { maps: paths, target_len } => {
            anyhow::ensure!(*target_len >= 1, "--target-len must be at least 1");
            let maps: Vec<LinMap> =
                paths.iter().map(load_map).collect::<Result<_>>()?;
            for (path, map) in paths.iter().zip(&maps) {
                if map.field() != field {
                    bail!(
                        "map {} lives over F_{}, the run is over F_{}",
                        path.display(),
                        map.field().p(),
                        cfg.p
                    );
                }
                if map.domain_dim() < cfg.dim {
                    bail!(
                        "map {} has domain dimension {}, smaller than --dim {}",
                        path.display(),
                        map.domain_dim(),
                        cfg.dim
                    );
                }
            }
            let verdict = kernel_dichotomy_search(&maps, &ground, *target_len, cfg.bound)?;
            let verified = match &verdict {
                KernelVerdict::Kernel { witness, .. } => verify_kernel_witness(&maps, witness)?,
                KernelVerdict::Injective { witness, .. } => {
                    verify_injective_witness(&maps, witness, cfg.bound)?
                }
                KernelVerdict::NeitherFound { .. } => true,
            };
            let report = KernelReport {
                schema: SCHEMA,
                command: "experiment-kernel",
                config: cfg.echo(),
                maps: paths.iter().map(|p| p.display().to_string()).collect(),
                target_len: *target_len,
                verdict,
                verified,
            };
            report::emit(&report, cfg.out.as_deref())?;
            Ok(report::exit_for(usize::from(!report.verified)))
        }
        ExperimentCmd::Asymptotic { oracles, probe } => {
            anyhow::ensure!(*probe >= 1, "--probe must be at least 1");
            anyhow::ensure!(
                *probe <= ground.len(),
                "--probe {} exceeds the ground's {} blocks",
                probe,
                ground.len()
            );
            let oracles: Vec<VecSetOracle> = oracles
                .split(',')
                .map(|n| parse_oracle(n.trim()))
                .collect::<Result<_>>()?;
            anyhow::ensure!(!oracles.is_empty(), "--oracles needs at least one name");
            let verdict = asymptotic_below_search(&oracles, &ground, *probe, cfg.bound)?;
            let verified = match &verdict {
                AsymptoticVerdict::AvoidsAll { witness } => {
                    verify_avoidance_witness(&oracles, witness, cfg.bound)?
                }
                AsymptoticVerdict::Neither { counterexample, avoided } => {
                    let named: Vec<VecSetOracle> = oracles
                        .iter()
                        .filter(|o| o.name() == avoided.as_str())
                        .cloned()
                        .collect();
                    named.len() == 1
                        && verify_avoidance_witness(&named, counterexample, cfg.bound)?
                }
                // MeetsAll is its own exhaustive scan; nothing cheaper recheck it.
                AsymptoticVerdict::MeetsAll { .. } => true,
            };
            let report = AsymptoticReport {
                schema: SCHEMA,
                command: "experiment-asymptotic",
                config: cfg.echo(),
                oracles: oracles.iter().map(|o| o.name().to_string()).collect(),
                probe: *probe,
                verdict,
                verified,
            };
            report::emit(&report, cfg.out.as_deref())?;
            Ok(report::exit_for(usize::from(!report.verified)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use blocklab::vecspace::FieldSpec;
    use std::path::Path;

    fn cfg(fixtures: &Path) -> RunConfig {
        RunConfig {
            p: 3,
            dim: 10,
            bound: 10,
            rounds: 4,
            seed: 42,
            out: None,
            fixtures: fixtures.to_path_buf(),
        }
    }

    fn write_map(dir: &Path, name: &str, map: &LinMap) -> PathBuf {
        let path = dir.join(name);
        fs::write(&path, serde_json::to_string(map).unwrap()).unwrap();
        path
    }

    #[test]
    fn zero_map_reports_a_kernel_and_exits_clean() {
        let dir = tempfile::tempdir().unwrap();
        let field = FieldSpec::new(3).unwrap();
        let zero = write_map(dir.path(), "zero.json", &LinMap::zero(field, 10));
        let cmd = ExperimentCmd::Kernel { maps: vec![zero], target_len: 2 };
        assert_eq!(cmd_experiment(&cmd, &cfg(dir.path())).unwrap(), 0);
    }

    #[test]
    fn mismatched_fields_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let field = FieldSpec::new(5).unwrap();
        let map = write_map(dir.path(), "f5.json", &LinMap::identity(field, 10));
        let cmd = ExperimentCmd::Kernel { maps: vec![map], target_len: 2 };
        let message = cmd_experiment(&cmd, &cfg(dir.path())).unwrap_err().to_string();
        assert!(message.contains("F_5"));
    }

    #[test]
    fn short_domains_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let field = FieldSpec::new(3).unwrap();
        let map = write_map(dir.path(), "small.json", &LinMap::identity(field, 4));
        let cmd = ExperimentCmd::Kernel { maps: vec![map], target_len: 2 };
        assert!(cmd_experiment(&cmd, &cfg(dir.path())).is_err());
    }

    #[test]
    fn oracle_names_parse_or_refuse() {
        assert_eq!(parse_oracle("class-2").unwrap().name(), "class-2");
        assert_eq!(parse_oracle("empty").unwrap().name(), "empty");
        assert!(parse_oracle("class-x").is_err());
        assert!(parse_oracle("weird").is_err());
    }

    #[test]
    fn asymptotic_search_from_the_cli_verifies() {
        let dir = tempfile::tempdir().unwrap();
        let cmd = ExperimentCmd::Asymptotic { oracles: "empty".into(), probe: 2 };
        assert_eq!(cmd_experiment(&cmd, &cfg(dir.path())).unwrap(), 0);
        let cmd = ExperimentCmd::Asymptotic { oracles: "class-0,class-1".into(), probe: 4 };
        assert_eq!(cmd_experiment(&cmd, &cfg(dir.path())).unwrap(), 0);
    }
}
