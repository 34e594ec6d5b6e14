//! `blocklab codec`: the two coding pipelines from the command line.

use std::collections::BTreeSet;

use anyhow::{Context, Result};
use blocklab::codec::{
    parse_bits, pipeline_decode, pipeline_encode_play, recover_prefix, z_of, CodecError,
};
use blocklab::games::Transcript;
use blocklab::vecspace::{decompose, enumerate_span, BlockSeq};
use clap::Subcommand;
use serde::Serialize;

use crate::config::{ConfigEcho, RunConfig};
use crate::play::show_vector;
use crate::report::{self, SCHEMA};

#[derive(Debug, Subcommand)]
pub enum CodecCmd {
    /// Encode a 0/1 word into its trace of cut codes.
    Encode {
        /// The word, e.g. 101.
        #[arg(long)]
        g: String,
    },
    /// Recover the longest provably determined prefix from trace elements.
    Recover {
        /// Comma-separated trace elements, e.g. 5,1.
        #[arg(long)]
        w: String,
    },
    /// Play a code set through the game and decode every outcome vector.
    Pipeline {
        /// Comma-separated, strictly increasing classes, e.g. 0,1.
        #[arg(long)]
        z: String,
    },
}

#[derive(Debug, Serialize)]
struct EncodeReport {
    schema: u32,
    command: &'static str,
    config: ConfigEcho,
    g: String,
    z: Vec<u64>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum RecoverResult {
    Prefix { prefix: String },
    Inconsistent { lo: u64, hi: u64 },
}

#[derive(Debug, Serialize)]
struct RecoverReport {
    schema: u32,
    command: &'static str,
    config: ConfigEcho,
    w: Vec<u64>,
    result: RecoverResult,
}

#[derive(Debug, Serialize)]
struct DecodeRow {
    vector: String,
    classes: Vec<u32>,
    expected: Vec<u32>,
    ok: bool,
}

#[derive(Debug, Serialize)]
struct PipelineReport {
    schema: u32,
    command: &'static str,
    config: ConfigEcho,
    z: Vec<u32>,
    outcome: BlockSeq,
    decode_table: Vec<DecodeRow>,
    failures: usize,
    transcript: Transcript,
}

fn parse_elements(s: &str) -> Result<BTreeSet<u64>> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .with_context(|| format!("bad trace element {c:?}"))
        })
        .collect()
}

fn parse_classes(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|c| c.trim().parse::<u32>().with_context(|| format!("bad class {c:?}")))
        .collect()
}

pub fn cmd_codec(cmd: &CodecCmd, cfg: &RunConfig) -> Result<i32> {
    cfg.field()?;
    match cmd {
        CodecCmd::Encode { g } => {
            let bits = parse_bits(g).context("--g must be a word over {0,1}")?;
            let trace = z_of(&bits)?;
            let report = EncodeReport {
                schema: SCHEMA,
                command: "codec-encode",
                config: cfg.echo(),
                g: g.clone(),
                z: trace.z_elements.iter().copied().collect(),
            };
            report::emit(&report, cfg.out.as_deref())?;
            Ok(report::EXIT_OK)
        }
        CodecCmd::Recover { w } => {
            let elements = parse_elements(w)?;
            anyhow::ensure!(!elements.is_empty(), "--w needs at least one element");
            let result = match recover_prefix(&elements) {
                Ok(prefix) => RecoverResult::Prefix {
                    prefix: blocklab::codec::format_bits(&prefix),
                },
                Err(CodecError::Inconsistent { lo, hi }) => {
                    RecoverResult::Inconsistent { lo, hi }
                }
                Err(e) => return Err(e).context("recovering a prefix"),
            };
            let report = RecoverReport {
                schema: SCHEMA,
                command: "codec-recover",
                config: cfg.echo(),
                w: elements.into_iter().collect(),
                result,
            };
            report::emit(&report, cfg.out.as_deref())?;
            Ok(report::EXIT_OK)
        }
        CodecCmd::Pipeline { z } => {
            let z = parse_classes(z)?;
            anyhow::ensure!(!z.is_empty(), "--z needs at least one class");
            let field = cfg.field()?;
            let ground = BlockSeq::from_basis(field, 0..cfg.dim.min(cfg.bound));
            let catalog = vec![ground.clone(); z.len()];
            let run = pipeline_encode_play(&ground, &z, &catalog, z.len(), cfg.bound)
                .context("the encoder could not realize the code set")?;
            let mut decode_table = Vec::new();
            let mut failures = 0usize;
            for v in enumerate_span(&run.outcome, cfg.bound)? {
                let coeffs = decompose(&v, &run.outcome)?;
                let expected: Vec<u32> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| c != 0)
                    .map(|(i, _)| z[i])
                    .collect::<BTreeSet<u32>>()
                    .into_iter()
                    .collect();
                let classes: Vec<u32> = pipeline_decode(&v, &run.outcome)?.into_iter().collect();
                let ok = classes == expected;
                if !ok {
                    failures += 1;
                }
                decode_table.push(DecodeRow {
                    vector: show_vector(&v),
                    classes,
                    expected,
                    ok,
                });
            }
            let report = PipelineReport {
                schema: SCHEMA,
                command: "codec-pipeline",
                config: cfg.echo(),
                z,
                outcome: run.outcome,
                decode_table,
                failures,
                transcript: run.transcript,
            };
            report::emit(&report, cfg.out.as_deref())?;
            Ok(report::exit_for(failures))
        }
    }
}
