//! Command-line front end for the block-sequence laboratory.
//!
//! Subcommands: `verify` re-checks library slabs against independent
//! arithmetic, `play` runs the games (optionally interactively),
//! `calibrate` measures oscillation thresholds into a fixture, and
//! `codec` / `experiment` expose the coding pipelines and dichotomy
//! searches. Every command prints exactly one JSON report with a schema
//! tag; a fixed seed makes reports byte-identical run over run.

pub mod calibrate;
pub mod codec_cmd;
pub mod config;
pub mod experiment_cmd;
pub mod play;
pub mod report;
pub mod verify;
