//! `blocklab play`: run one game between strategies, optionally taking one
//! side yourself on standard input.
//!
//! Interactive input is validated before it reaches the engine: an illegal
//! move prints the rejection and prompts again, so the game never advances
//! on one. Prompts go to stderr; stdout carries only the final report.

use std::io::{BufRead, Write};

use anyhow::{anyhow, bail, Context, Result};
use blocklab::games::{
    catalog_player, class_chaser, encoder, new_game, reveal_player, run, script_player,
    tail_player, FamilyOracle, GameKind, GameState, Move, Strategy, StrategyError, Transcript,
};
use blocklab::osc::asymptotic_class;
use blocklab::vecspace::{BlockSeq, FieldSpec, Vector};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::calibrate;
use crate::config::{ConfigEcho, RunConfig};
use crate::report::{self, SCHEMA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// I names thresholds, II replies from the ground above them.
    #[value(alias = "f")]
    Asymptotic,
    /// I plays whole block sequences, II replies inside them.
    #[value(alias = "g")]
    Gowers,
    /// I reveals one vector at a time; II may pass with 0.
    #[value(alias = "gstar")]
    FinitizedGowers,
    /// Gowers with I's blocks gated by a family oracle.
    #[value(alias = "gh")]
    RestrictedGowers,
}

impl KindArg {
    pub fn kind(self) -> GameKind {
        match self {
            KindArg::Asymptotic => GameKind::Asymptotic,
            KindArg::Gowers => GameKind::Gowers,
            KindArg::FinitizedGowers => GameKind::FinitizedGowers,
            KindArg::RestrictedGowers => GameKind::RestrictedGowers,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HumanSide {
    I,
    Ii,
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    /// Which game to play.
    #[arg(long, value_enum, default_value = "asymptotic")]
    pub kind: KindArg,

    /// Player I: auto | tail | catalog | reveal | nats:3,0,7
    #[arg(long = "i", default_value = "auto")]
    pub strat_i: String,

    /// Player II: auto | chaser:1,0 | encoder:0,1
    #[arg(long = "ii", default_value = "auto")]
    pub strat_ii: String,

    /// Family gate for the restricted game: unrestricted | min-support:N | len:K
    #[arg(long)]
    pub oracle: Option<String>,

    /// Take a side yourself; bare --interactive means playing II.
    #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "ii")]
    pub interactive: Option<HumanSide>,
}

// ------------------------------------------------------------ move parsing

/// Accepts `e3`, a comma-separated coefficient list like `0,2,1`, or `0`
/// (alias `pass`) for the zero vector.
pub fn parse_vector(field: FieldSpec, s: &str) -> Result<Vector, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty input".into());
    }
    if t == "0" || t.eq_ignore_ascii_case("pass") {
        return Ok(Vector::zero(field));
    }
    if let Some(rest) = t.strip_prefix('e') {
        let i: usize = rest
            .trim()
            .parse()
            .map_err(|_| format!("bad basis index in {t:?}"))?;
        return Ok(Vector::basis(field, i));
    }
    let coeffs: Result<Vec<u64>, String> = t
        .split(',')
        .map(|c| c.trim().parse::<u64>().map_err(|_| format!("bad coefficient {c:?}")))
        .collect();
    let v = Vector::from_coeffs(field, coeffs?);
    if v.is_zero() {
        return Err("that coefficient list is the zero vector; enter 0 to pass".into());
    }
    Ok(v)
}

/// Parses a line into a move of the shape the state expects next.
pub fn parse_move(state: &GameState, line: &str) -> Result<Move, String> {
    let field = state.ground().field();
    match (state.to_move(), state.kind()) {
        (blocklab::games::Side::I, GameKind::Asymptotic) => {
            let n = line
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("expected a natural number, got {:?}", line.trim()))?;
            Ok(Move::Nat(n))
        }
        (blocklab::games::Side::I, GameKind::FinitizedGowers) => {
            let v = parse_vector(field, line)?;
            if v.is_zero() {
                return Err("a reveal must be a nonzero vector".into());
            }
            Ok(Move::Reveal(v))
        }
        (blocklab::games::Side::I, _) => {
            let blocks: Result<Vec<Vector>, String> = line
                .split(';')
                .map(|part| {
                    let v = parse_vector(field, part)?;
                    if v.is_zero() {
                        Err("blocks must be nonzero".to_string())
                    } else {
                        Ok(v)
                    }
                })
                .collect();
            let x = BlockSeq::new(field, blocks?).map_err(|e| e.to_string())?;
            Ok(Move::Block(x))
        }
        (blocklab::games::Side::II, _) => Ok(Move::Reply(parse_vector(field, line)?)),
    }
}

pub fn show_vector(v: &Vector) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.support()
        .into_iter()
        .map(|i| {
            let c = v.coeff(i);
            if c == 1 {
                format!("e{i}")
            } else {
                format!("{c}e{i}")
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

pub fn show_blockseq(x: &BlockSeq) -> String {
    if x.is_empty() {
        return "(empty)".into();
    }
    x.iter().map(show_vector).collect::<Vec<_>>().join(" | ")
}

// ------------------------------------------------------------- human player

/// A strategy that reads moves from stdin. Input is validated against the
/// live state; anything illegal is explained and asked for again, so this
/// strategy never hands the engine an illegal move.
struct HumanPlayer;

fn describe_turn(state: &GameState, err: &mut impl Write) -> std::io::Result<()> {
    writeln!(err, "[{} | reply {}]", state.kind().as_str(), state.replies() + 1)?;
    if let Some((side, mv)) = state.history().last() {
        let shown = match mv {
            Move::Nat(n) => format!("n={n}"),
            Move::Block(x) => show_blockseq(x),
            Move::Reveal(v) => show_vector(v),
            Move::Reply(v) => show_vector(v),
        };
        writeln!(err, "  last move ({side:?}): {shown}")?;
    }
    writeln!(err, "  outcome: {}", show_blockseq(state.outcome()))?;
    if state.kind() == GameKind::FinitizedGowers {
        writeln!(err, "  revealed: {}", show_blockseq(state.round_buffer()))?;
    }
    if let Some(floor) = state.reply_floor() {
        writeln!(err, "  next reply must be supported strictly above {floor}")?;
    }
    Ok(())
}

impl Strategy for HumanPlayer {
    fn name(&self) -> String {
        "human".into()
    }

    fn next_move(&mut self, state: &GameState) -> Result<Move, StrategyError> {
        let stdin = std::io::stdin();
        let mut err = std::io::stderr();
        let round = state.replies();
        describe_turn(state, &mut err).ok();
        loop {
            write!(err, "{:?}> ", state.to_move()).ok();
            err.flush().ok();
            let mut line = String::new();
            match stdin.lock().read_line(&mut line) {
                Ok(0) => {
                    return Err(StrategyError::Exhausted {
                        round,
                        reason: "input ended".into(),
                    })
                }
                Ok(_) => {}
                Err(e) => {
                    return Err(StrategyError::Exhausted {
                        round,
                        reason: format!("input failed: {e}"),
                    })
                }
            }
            let mv = match parse_move(state, &line) {
                Ok(mv) => mv,
                Err(reason) => {
                    writeln!(err, "  cannot read that: {reason}").ok();
                    continue;
                }
            };
            match state.validate_move(&mv) {
                Ok(()) => return Ok(mv),
                Err(rejection) => {
                    writeln!(err, "  illegal move: {rejection}").ok();
                    continue;
                }
            }
        }
    }
}

// -------------------------------------------------------------- resolution

fn parse_targets(spec: &str) -> Result<Vec<u32>> {
    spec.split(',')
        .map(|c| {
            c.trim()
                .parse::<u32>()
                .with_context(|| format!("bad class {c:?} in strategy targets"))
        })
        .collect()
}

fn default_targets(cfg: &RunConfig, rounds: usize) -> Result<Vec<u32>> {
    let (thresholds, _) = calibrate::load_or_compute(cfg)?;
    let palette = crate::verify::gated_targets(cfg, &thresholds)?;
    anyhow::ensure!(!palette.is_empty(), "no class is guaranteed over F_{}", cfg.p);
    Ok((0..rounds).map(|k| palette[k % palette.len()]).collect())
}

fn resolve_i(
    spec: &str,
    kind: GameKind,
    ground: &BlockSeq,
    rounds: usize,
) -> Result<Box<dyn Strategy>> {
    let auto = spec == "auto";
    match kind {
        GameKind::Asymptotic => {
            if auto || spec == "tail" {
                return Ok(Box::new(tail_player()));
            }
            if let Some(ns) = spec.strip_prefix("nats:") {
                let moves: Result<Vec<Move>> = ns
                    .split(',')
                    .map(|n| {
                        Ok(Move::Nat(
                            n.trim().parse().with_context(|| format!("bad number {n:?}"))?,
                        ))
                    })
                    .collect();
                return Ok(Box::new(script_player(moves?)));
            }
            bail!("player I in the asymptotic game must be tail or nats:<list>, got {spec:?}");
        }
        GameKind::FinitizedGowers => {
            if auto || spec == "reveal" {
                return Ok(Box::new(reveal_player(vec![ground.clone(); rounds])));
            }
            bail!("player I in the finitized game must be reveal, got {spec:?}");
        }
        GameKind::Gowers | GameKind::RestrictedGowers => {
            if auto || spec == "catalog" {
                return Ok(Box::new(catalog_player(vec![ground.clone(); rounds])));
            }
            bail!("player I here must be catalog, got {spec:?}");
        }
    }
}

fn resolve_ii(spec: &str, cfg: &RunConfig, rounds: usize) -> Result<Box<dyn Strategy>> {
    if spec == "auto" {
        return Ok(Box::new(class_chaser(default_targets(cfg, rounds)?, cfg.bound)));
    }
    if let Some(ts) = spec.strip_prefix("chaser:") {
        return Ok(Box::new(class_chaser(parse_targets(ts)?, cfg.bound)));
    }
    if let Some(ts) = spec.strip_prefix("encoder:") {
        let enc = encoder(parse_targets(ts)?, cfg.bound)
            .context("encoder targets must be strictly increasing")?;
        return Ok(Box::new(enc));
    }
    bail!("player II must be auto, chaser:<classes> or encoder:<classes>, got {spec:?}");
}

fn resolve_oracle(spec: Option<&str>, kind: GameKind) -> Result<Option<FamilyOracle>> {
    let Some(spec) = spec else {
        if kind == GameKind::RestrictedGowers {
            bail!("the restricted game needs --oracle (unrestricted | min-support:N | len:K)");
        }
        return Ok(None);
    };
    if kind != GameKind::RestrictedGowers {
        bail!("--oracle only applies to the restricted game");
    }
    if spec == "unrestricted" {
        return Ok(Some(FamilyOracle::unrestricted()));
    }
    if let Some(n) = spec.strip_prefix("min-support:") {
        return Ok(Some(FamilyOracle::supported_at_or_above(
            n.parse().with_context(|| format!("bad bound {n:?}"))?,
        )));
    }
    if let Some(k) = spec.strip_prefix("len:") {
        return Ok(Some(FamilyOracle::at_least_blocks(
            k.parse().with_context(|| format!("bad bound {k:?}"))?,
        )));
    }
    bail!("unknown oracle {spec:?}; use unrestricted, min-support:N or len:K");
}

// ------------------------------------------------------------------ report

#[derive(Debug, Serialize)]
struct PlayReport {
    schema: u32,
    command: &'static str,
    config: ConfigEcho,
    kind: GameKind,
    player_i: String,
    player_ii: String,
    rounds: usize,
    outcome: BlockSeq,
    classes: Vec<u32>,
    exhausted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    exhaustion: Option<String>,
    transcript: Transcript,
}

pub fn cmd_play(args: &PlayArgs, cfg: &RunConfig) -> Result<i32> {
    let field = cfg.field()?;
    let kind = args.kind.kind();
    let ground = BlockSeq::from_basis(field, 0..cfg.dim);
    let rounds = cfg.rounds.max(1);
    let oracle = resolve_oracle(args.oracle.as_deref(), kind)?;

    let mut strat_i: Box<dyn Strategy> = match args.interactive {
        Some(HumanSide::I) => Box::new(HumanPlayer),
        _ => resolve_i(&args.strat_i, kind, &ground, rounds)?,
    };
    let mut strat_ii: Box<dyn Strategy> = match args.interactive {
        Some(HumanSide::Ii) => Box::new(HumanPlayer),
        _ => resolve_ii(&args.strat_ii, cfg, rounds)?,
    };

    let start = new_game(kind, ground, BlockSeq::empty(field), oracle)?;
    let out = run(&start, strat_i.as_mut(), strat_ii.as_mut(), rounds)
        .map_err(|e| anyhow!("game aborted: {e}"))?;

    let classes = out
        .outcome
        .iter()
        .map(|y| asymptotic_class(y).expect("replies are nonzero"))
        .collect();
    let report = PlayReport {
        schema: SCHEMA,
        command: "play",
        config: cfg.echo(),
        kind,
        player_i: strat_i.name(),
        player_ii: strat_ii.name(),
        rounds,
        outcome: out.outcome,
        classes,
        exhausted: out.exhausted,
        exhaustion: out
            .exhaustion
            .map(|(name, err)| format!("{name}: {err}")),
        transcript: out.transcript,
    };
    report::emit(&report, cfg.out.as_deref())?;
    Ok(report::EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn cfg() -> RunConfig {
        RunConfig {
            p: 3,
            dim: 8,
            bound: 8,
            rounds: 2,
            seed: 42,
            out: None,
            fixtures: PathBuf::from("no-such-dir"),
        }
    }

    fn f3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    #[test]
    fn vector_syntax_covers_basis_csv_and_pass() {
        assert_eq!(parse_vector(f3(), "e3").unwrap(), Vector::basis(f3(), 3));
        assert_eq!(
            parse_vector(f3(), "0,2,1").unwrap(),
            Vector::from_coeffs(f3(), vec![0, 2, 1])
        );
        assert!(parse_vector(f3(), "pass").unwrap().is_zero());
        assert!(parse_vector(f3(), "0").unwrap().is_zero());
        assert!(parse_vector(f3(), "e?").is_err());
        assert!(parse_vector(f3(), "1,x").is_err());
        // All-zero coefficient lists are refused so a pass is always explicit.
        assert!(parse_vector(f3(), "0,0,0").is_err());
    }

    #[test]
    fn moves_parse_by_shape() {
        let ground = BlockSeq::from_basis(f3(), 0..6);
        let f = new_game(GameKind::Asymptotic, ground.clone(), BlockSeq::empty(f3()), None)
            .unwrap();
        assert_eq!(parse_move(&f, "3").unwrap(), Move::Nat(3));
        assert!(parse_move(&f, "e1").is_err());

        let g = new_game(GameKind::Gowers, ground.clone(), BlockSeq::empty(f3()), None)
            .unwrap();
        match parse_move(&g, "e0; 0,2,1").unwrap() {
            Move::Block(x) => assert_eq!(x.len(), 2),
            other => panic!("expected a block move, got {other:?}"),
        }

        let gs = new_game(GameKind::FinitizedGowers, ground, BlockSeq::empty(f3()), None)
            .unwrap();
        assert!(matches!(parse_move(&gs, "e2").unwrap(), Move::Reveal(_)));
        assert!(parse_move(&gs, "0").is_err());
    }

    #[test]
    fn vectors_render_readably() {
        assert_eq!(show_vector(&Vector::from_coeffs(f3(), vec![0, 2, 1])), "2e1+e2");
        assert_eq!(show_vector(&Vector::zero(f3())), "0");
        assert_eq!(show_blockseq(&BlockSeq::empty(f3())), "(empty)");
    }

    #[test]
    fn machine_play_reports_requested_classes() {
        let args = PlayArgs {
            kind: KindArg::Asymptotic,
            strat_i: "tail".into(),
            strat_ii: "chaser:1,0".into(),
            oracle: None,
            interactive: None,
        };
        let cfg = RunConfig { rounds: 2, ..cfg() };
        // Exercise the resolution path; the report goes to stdout.
        let code = cmd_play(&args, &cfg).unwrap();
        assert_eq!(code, report::EXIT_OK);
    }

    #[test]
    fn bad_strategy_names_are_usage_errors() {
        let args = PlayArgs {
            kind: KindArg::Asymptotic,
            strat_i: "catalog".into(),
            strat_ii: "auto".into(),
            oracle: None,
            interactive: None,
        };
        assert!(cmd_play(&args, &cfg()).is_err());

        let args = PlayArgs {
            kind: KindArg::RestrictedGowers,
            strat_i: "auto".into(),
            strat_ii: "chaser:1".into(),
            oracle: None,
            interactive: None,
        };
        let message = cmd_play(&args, &cfg()).unwrap_err().to_string();
        assert!(message.contains("--oracle"));
    }

    #[test]
    fn encoder_targets_must_increase() {
        let err = match resolve_ii("encoder:1,0", &cfg(), 2) {
            Err(e) => e,
            Ok(_) => panic!("decreasing encoder targets were accepted"),
        };
        assert!(err.to_string().contains("strictly increasing"));
    }

    #[test]
    fn oracle_specs_resolve_or_refuse() {
        let oracle = resolve_oracle(Some("min-support:2"), GameKind::RestrictedGowers)
            .unwrap()
            .unwrap();
        assert_eq!(oracle.name(), "min-support>=2");
        assert!(resolve_oracle(Some("weird"), GameKind::RestrictedGowers).is_err());
        assert!(resolve_oracle(Some("len:2"), GameKind::Gowers).is_err());
        assert!(resolve_oracle(None, GameKind::Gowers).unwrap().is_none());
    }
}
