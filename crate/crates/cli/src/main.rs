use std::process::ExitCode;

use clap::{Parser, Subcommand};

use blocklab_cli::calibrate::cmd_calibrate;
use blocklab_cli::codec_cmd::{cmd_codec, CodecCmd};
use blocklab_cli::config::RunConfig;
use blocklab_cli::experiment_cmd::{cmd_experiment, ExperimentCmd};
use blocklab_cli::play::{cmd_play, PlayArgs};
use blocklab_cli::report::EXIT_USAGE;
use blocklab_cli::verify::{cmd_verify, Suite};

/// Desk-scale laboratory for block sequences over small prime fields:
/// oscillation classes, asymptotic games, tree conditions, codings, and
/// dichotomy experiments.
#[derive(Debug, Parser)]
#[command(name = "blocklab", version)]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite and report every property checked.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Play one game between strategies, or take a side yourself.
    Play(PlayArgs),
    /// Measure oscillation thresholds exhaustively and write the fixture.
    Calibrate,
    /// Coding pipelines: traces, prefix recovery, and the leak table.
    #[command(subcommand)]
    Codec(CodecCmd),
    /// Dichotomy searches with re-verified verdicts.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Command::Verify { suite } => cmd_verify(*suite, &cli.cfg),
        Command::Play(args) => cmd_play(args, &cli.cfg),
        Command::Calibrate => cmd_calibrate(&cli.cfg),
        Command::Codec(sub) => cmd_codec(sub, &cli.cfg),
        Command::Experiment(sub) => cmd_experiment(sub, &cli.cfg),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
