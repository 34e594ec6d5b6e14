//! Four turn-based games on block sequences, with one engine.
//!
//! Fix a ground block sequence X (and optionally a finite prefix played
//! before the game starts). The games differ only in what player I reveals
//! and what constrains player II's replies; in every case II's nonzero
//! replies extend the prefix to the outcome block sequence.
//!
//! * **Asymptotic** (`F`): I plays a natural number `n`; II replies with a
//!   nonzero vector of the ground span supported strictly above `n`.
//! * **Gowers** (`G`): I plays a block sequence `Y ⪯ X`; II replies with a
//!   nonzero vector of `⟨Y⟩`.
//! * **Finitized Gowers** (`G*`): I reveals one nonzero vector of `⟨X⟩` at
//!   a time, each forming a block above the previous reveals of the round;
//!   II either passes (replies zero) or commits to a nonzero vector in the
//!   span of the round's reveals, which ends the round and clears the
//!   buffer.
//! * **Restricted Gowers** (`G_H`): Gowers, except I's block moves must be
//!   admitted by a family oracle.
//!
//! Moves are validated structurally ([`GameState::validate_move`]) and the
//! engine ([`run`]) drives two [`Strategy`] values until enough replies
//! accumulate or a strategy reports exhaustion, which is an outcome, not an
//! error. Transcripts serialize and replay.

mod state;
mod strategies;

pub use state::{new_game, GameState, GameSummary};
pub use strategies::{
    catalog_player, class_chaser, encoder, reveal_player, script_player, tail_player,
    CatalogPlayer, ClassSeeker, RevealPlayer, ScriptPlayer, TailPlayer,
};

use serde::{Deserialize, Serialize};

use crate::vecspace::{BlockSeq, VecError, Vector};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameKind {
    Asymptotic,
    Gowers,
    FinitizedGowers,
    RestrictedGowers,
}

impl GameKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GameKind::Asymptotic => "asymptotic",
            GameKind::Gowers => "gowers",
            GameKind::FinitizedGowers => "finitized-gowers",
            GameKind::RestrictedGowers => "restricted-gowers",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    I,
    II,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::I => Side::II,
            Side::II => Side::I,
        }
    }
}

/// One move. Which variants are legal depends on the game kind and whose
/// turn it is; `Reply` is always II's shape, the rest are I's.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    /// I in the asymptotic game: a support threshold.
    Nat(usize),
    /// I in the (restricted) Gowers game: a block sequence below the ground.
    Block(BlockSeq),
    /// I in the finitized game: the next vector of the round.
    Reveal(Vector),
    /// II in any game. Zero means "pass" and is legal only in the
    /// finitized game.
    Reply(Vector),
}

/// Why a move is illegal. These are surfaced verbatim in interactive play.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Rejection {
    #[error("wrong move shape: expected {expected}")]
    WrongShape { expected: &'static str },
    #[error("support too low: the reply must be supported strictly above {floor}")]
    SupportTooLow { floor: usize },
    #[error("vector is outside the span it must come from")]
    NotInSpan,
    #[error("move does not continue the block sequence: supports must start above {floor}")]
    NotBlockCompatible { floor: usize },
    #[error("block sequence rejected by the family oracle {name:?}")]
    OracleRejected { name: String },
}

/// A predicate on block sequences, used to restrict I's moves in the
/// restricted Gowers game.
#[derive(Clone)]
pub struct FamilyOracle {
    name: String,
    pred: Arc<dyn Fn(&BlockSeq) -> bool + Send + Sync>,
}

impl FamilyOracle {
    pub fn new(
        name: impl Into<String>,
        pred: impl Fn(&BlockSeq) -> bool + Send + Sync + 'static,
    ) -> Self {
        FamilyOracle {
            name: name.into(),
            pred: Arc::new(pred),
        }
    }

    /// Admits every block sequence.
    pub fn unrestricted() -> Self {
        FamilyOracle::new("unrestricted", |_| true)
    }

    /// Admits the sequences all of whose blocks start at or above `n`.
    pub fn supported_at_or_above(n: usize) -> Self {
        FamilyOracle::new(format!("min-support>={n}"), move |y: &BlockSeq| {
            y.min_support().map_or(true, |lo| lo >= n)
        })
    }

    /// Admits the sequences with at least `k` blocks.
    pub fn at_least_blocks(k: usize) -> Self {
        FamilyOracle::new(format!("len>={k}"), move |y: &BlockSeq| y.len() >= k)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn admits(&self, y: &BlockSeq) -> bool {
        (self.pred)(y)
    }
}

impl std::fmt::Debug for FamilyOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FamilyOracle")
            .field("name", &self.name)
            .finish()
    }
}

/// Fatal engine errors. Strategy exhaustion is *not* here: it ends a run
/// normally with the `exhausted` flag set.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GameError {
    #[error("prefix block {index} is neither in the ground span nor below the ground")]
    InvalidPrefix { index: usize },
    #[error("the restricted game needs a family oracle")]
    MissingOracle,
    #[error("strategy {name:?} produced an illegal move for {side:?}: {rejection}")]
    IllegalStrategyMove {
        name: String,
        side: Side,
        rejection: Rejection,
    },
    #[error("game exceeded {0} moves without finishing")]
    RunawayGame(usize),
    #[error("encoder targets must be strictly increasing")]
    EncoderTargetsNotIncreasing,
    #[error(transparent)]
    Vec(#[from] VecError),
}

/// Why a strategy has no move. Reported by [`run`] as a normal outcome.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("no legal move at reply {round}: {reason}")]
    Exhausted { round: usize, reason: String },
    #[error("catalog exhausted at round {round}")]
    CatalogExhausted { round: usize },
}

/// A deterministic move chooser for one side. `next_move` may only depend
/// on the state (and the strategy's own parameters), so replays agree.
pub trait Strategy {
    fn name(&self) -> String;
    fn next_move(&mut self, state: &GameState) -> Result<Move, StrategyError>;
}

/// A finished play: every move in order, the outcome, and whether a
/// strategy ran out of moves before the requested number of replies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub kind: GameKind,
    pub moves: Vec<TranscriptMove>,
    pub outcome: BlockSeq,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptMove {
    pub side: Side,
    #[serde(flatten)]
    pub mv: Move,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub outcome: BlockSeq,
    pub transcript: Transcript,
    pub exhausted: bool,
    /// Name and round of the strategy that ran out, when `exhausted`.
    pub exhaustion: Option<(String, StrategyError)>,
}

/// Hard cap on total moves per run; generous for desk-scale play, small
/// enough to catch non-terminating strategy pairs.
pub const MOVE_LIMIT: usize = 100_000;

/// Alternates the two strategies from `start` until II has made `rounds`
/// nonzero replies beyond the prefix, or a strategy reports exhaustion.
pub fn run(
    start: &GameState,
    strat_i: &mut dyn Strategy,
    strat_ii: &mut dyn Strategy,
    rounds: usize,
) -> Result<RunOutcome, GameError> {
    let mut state = start.clone();
    let mut exhaustion = None;
    while state.replies() < rounds {
        if state.history().len() >= MOVE_LIMIT {
            return Err(GameError::RunawayGame(MOVE_LIMIT));
        }
        let side = state.to_move();
        let strat: &mut dyn Strategy = match side {
            Side::I => &mut *strat_i,
            Side::II => &mut *strat_ii,
        };
        match strat.next_move(&state) {
            Ok(mv) => {
                let name = strat.name();
                state = state.step(mv).map_err(|rejection| {
                    GameError::IllegalStrategyMove {
                        name,
                        side,
                        rejection,
                    }
                })?;
            }
            Err(err) => {
                exhaustion = Some((strat.name(), err));
                break;
            }
        }
    }
    Ok(RunOutcome {
        outcome: state.outcome().clone(),
        transcript: Transcript {
            kind: state.kind(),
            moves: state
                .history()
                .iter()
                .map(|(side, mv)| TranscriptMove {
                    side: *side,
                    mv: mv.clone(),
                })
                .collect(),
            outcome: state.outcome().clone(),
            exhausted: exhaustion.is_some(),
        },
        exhausted: exhaustion.is_some(),
        exhaustion,
    })
}

/// Replays a transcript from a fresh state, validating every move. Returns
/// the final state; fails with the first rejection.
pub fn replay(start: &GameState, transcript: &Transcript) -> Result<GameState, GameError> {
    let mut state = start.clone();
    for tm in &transcript.moves {
        let side = state.to_move();
        state = state
            .step(tm.mv.clone())
            .map_err(|rejection| GameError::IllegalStrategyMove {
                name: "replay".into(),
                side,
                rejection,
            })?;
    }
    Ok(state)
}

/// Runs the Gowers game through the finitized engine: each of I's block
/// moves is revealed to `G*` one vector at a time, and II's strategy
/// decides when enough of the block is on the table. For strategies that
/// search the revealed span in canonical order this produces exactly the
/// replies of the direct Gowers run against the same blocks.
pub fn simulate_gowers_via_finitized(
    ground: &BlockSeq,
    prefix: &BlockSeq,
    i_blocks: &[BlockSeq],
    strat_ii: &mut dyn Strategy,
) -> Result<RunOutcome, GameError> {
    let state = new_game(
        GameKind::FinitizedGowers,
        ground.clone(),
        prefix.clone(),
        None,
    )?;
    let mut reveal = reveal_player(i_blocks.to_vec());
    run(&state, &mut reveal, strat_ii, i_blocks.len())
}
