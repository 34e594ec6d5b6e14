use super::{GameError, GameKind, GameState, Move, Strategy, StrategyError};
use crate::osc::asymptotic_class;
use crate::vecspace::{enumerate_span, BlockSeq, Vector};

/// II's workhorse: given a list of target classes, reply at round `k` with
/// the canonically first admissible vector whose asymptotic class is
/// `targets[k]`. "Admissible" means: in the span the game offers, supported
/// strictly above every floor in force. In the finitized game the seeker
/// passes while no such vector has been revealed yet; elsewhere a missing
/// vector exhausts the strategy.
#[derive(Debug, Clone)]
pub struct ClassSeeker {
    name: String,
    targets: Vec<u32>,
    bound: usize,
}

/// A [`ClassSeeker`] that chases the given classes in order.
pub fn class_chaser(targets: impl Into<Vec<u32>>, bound: usize) -> ClassSeeker {
    let targets = targets.into();
    let list = targets
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(",");
    ClassSeeker {
        name: format!("class-chaser[{list}]"),
        targets,
        bound,
    }
}

/// A [`ClassSeeker`] whose targets must be strictly increasing, the shape
/// expected when the played classes are later read back off as a set.
pub fn encoder(targets: impl Into<Vec<u32>>, bound: usize) -> Result<ClassSeeker, GameError> {
    let seeker = class_chaser(targets, bound);
    if !seeker.targets.windows(2).all(|w| w[0] < w[1]) {
        return Err(GameError::EncoderTargetsNotIncreasing);
    }
    Ok(ClassSeeker {
        name: seeker.name.replacen("class-chaser", "encoder", 1),
        ..seeker
    })
}

impl ClassSeeker {
    fn search(&self, state: &GameState) -> Result<Option<Vector>, StrategyError> {
        let round = state.replies();
        let target = self.targets[round];
        let Some(source) = state.reply_source() else {
            return Err(StrategyError::Exhausted {
                round,
                reason: "no span to reply from yet".into(),
            });
        };
        let restricted = match state.reply_floor() {
            Some(n) => source.tail(n),
            None => source.clone(),
        };
        let iter = enumerate_span(&restricted, self.bound).map_err(|e| {
            StrategyError::Exhausted {
                round,
                reason: e.to_string(),
            }
        })?;
        for v in iter {
            if asymptotic_class(&v).expect("span vectors are nonzero") == target {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
}

impl Strategy for ClassSeeker {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn next_move(&mut self, state: &GameState) -> Result<Move, StrategyError> {
        let round = state.replies();
        if round >= self.targets.len() {
            return Err(StrategyError::Exhausted {
                round,
                reason: "all targets already played".into(),
            });
        }
        match self.search(state)? {
            Some(v) => Ok(Move::Reply(v)),
            None if state.kind() == GameKind::FinitizedGowers => {
                Ok(Move::Reply(Vector::zero(state.ground().field())))
            }
            None => Err(StrategyError::Exhausted {
                round,
                reason: format!("no vector of class {} available", self.targets[round]),
            }),
        }
    }
}

/// I in the asymptotic game: always point at the top of the outcome, the
/// least threshold that actually constrains II's next reply.
#[derive(Debug, Clone, Default)]
pub struct TailPlayer;

pub fn tail_player() -> TailPlayer {
    TailPlayer
}

impl Strategy for TailPlayer {
    fn name(&self) -> String {
        "tail".into()
    }

    fn next_move(&mut self, state: &GameState) -> Result<Move, StrategyError> {
        Ok(Move::Nat(state.outcome().max_support().unwrap_or(0)))
    }
}

/// I in the (restricted) Gowers game: play a fixed catalog of block
/// sequences, each cut down to its blocks above the current outcome so the
/// move stays answerable.
#[derive(Debug, Clone)]
pub struct CatalogPlayer {
    catalog: Vec<BlockSeq>,
}

pub fn catalog_player(catalog: impl Into<Vec<BlockSeq>>) -> CatalogPlayer {
    CatalogPlayer {
        catalog: catalog.into(),
    }
}

impl Strategy for CatalogPlayer {
    fn name(&self) -> String {
        "catalog".into()
    }

    fn next_move(&mut self, state: &GameState) -> Result<Move, StrategyError> {
        let round = state.replies();
        let Some(entry) = self.catalog.get(round) else {
            return Err(StrategyError::CatalogExhausted { round });
        };
        let cut = match state.outcome().max_support() {
            Some(n) => entry.tail(n),
            None => entry.clone(),
        };
        if cut.is_empty() {
            return Err(StrategyError::CatalogExhausted { round });
        }
        Ok(Move::Block(cut))
    }
}

/// Plays a fixed list of moves verbatim, for replays and worked examples.
#[derive(Debug, Clone)]
pub struct ScriptPlayer {
    moves: Vec<Move>,
    at: usize,
}

pub fn script_player(moves: impl Into<Vec<Move>>) -> ScriptPlayer {
    ScriptPlayer {
        moves: moves.into(),
        at: 0,
    }
}

impl Strategy for ScriptPlayer {
    fn name(&self) -> String {
        "script".into()
    }

    fn next_move(&mut self, state: &GameState) -> Result<Move, StrategyError> {
        let Some(mv) = self.moves.get(self.at) else {
            return Err(StrategyError::Exhausted {
                round: state.replies(),
                reason: "script finished".into(),
            });
        };
        self.at += 1;
        Ok(mv.clone())
    }
}

/// I in the finitized game: put the rounds' block sequences on the table
/// one vector at a time. Entry `k` feeds II's round `k`; the buffer length
/// tracks how much of the entry is already revealed.
#[derive(Debug, Clone)]
pub struct RevealPlayer {
    rounds: Vec<BlockSeq>,
}

pub fn reveal_player(rounds: impl Into<Vec<BlockSeq>>) -> RevealPlayer {
    RevealPlayer {
        rounds: rounds.into(),
    }
}

impl Strategy for RevealPlayer {
    fn name(&self) -> String {
        "reveal".into()
    }

    fn next_move(&mut self, state: &GameState) -> Result<Move, StrategyError> {
        let round = state.replies();
        let Some(entry) = self.rounds.get(round) else {
            return Err(StrategyError::Exhausted {
                round,
                reason: "no further rounds to reveal".into(),
            });
        };
        let at = state.round_buffer().len();
        let Some(v) = entry.get(at) else {
            return Err(StrategyError::Exhausted {
                round,
                reason: "round fully revealed without a reply".into(),
            });
        };
        Ok(Move::Reveal(v.clone()))
    }
}
