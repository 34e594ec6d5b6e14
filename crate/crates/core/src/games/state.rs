use serde::{Deserialize, Serialize};

use super::{FamilyOracle, GameError, GameKind, Move, Rejection, Side};
use crate::vecspace::{in_span, precedes, BlockSeq};

/// Full position of a game in progress. Stepping is pure: `step` returns
/// the successor state and leaves the original untouched.
#[derive(Debug, Clone)]
pub struct GameState {
    kind: GameKind,
    ground: BlockSeq,
    prefix: BlockSeq,
    outcome: BlockSeq,
    history: Vec<(Side, Move)>,
    /// I's reveals since the last nonzero reply (finitized game only).
    round_buffer: BlockSeq,
    /// I's latest block move (Gowers games only).
    current_block: Option<BlockSeq>,
    /// I's latest number (asymptotic game only).
    last_nat: Option<usize>,
    oracle: Option<FamilyOracle>,
    to_move: Side,
}

/// Starts a game. Prefix blocks must lie in the ground span or entirely
/// below the ground's first block; the restricted game needs an oracle.
pub fn new_game(
    kind: GameKind,
    ground: BlockSeq,
    prefix: BlockSeq,
    oracle: Option<FamilyOracle>,
) -> Result<GameState, GameError> {
    if kind == GameKind::RestrictedGowers && oracle.is_none() {
        return Err(GameError::MissingOracle);
    }
    for (index, b) in prefix.iter().enumerate() {
        let below_ground = match (b.max_support(), ground.min_support()) {
            (Some(hi), Some(lo)) => hi < lo,
            _ => false,
        };
        if !below_ground && !in_span(b, &ground)? {
            return Err(GameError::InvalidPrefix { index });
        }
    }
    let field = ground.field();
    Ok(GameState {
        kind,
        ground,
        outcome: prefix.clone(),
        prefix,
        history: Vec::new(),
        round_buffer: BlockSeq::empty(field),
        current_block: None,
        last_nat: None,
        oracle,
        to_move: Side::I,
    })
}

impl GameState {
    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn ground(&self) -> &BlockSeq {
        &self.ground
    }

    pub fn prefix(&self) -> &BlockSeq {
        &self.prefix
    }

    /// The prefix followed by II's nonzero replies so far.
    pub fn outcome(&self) -> &BlockSeq {
        &self.outcome
    }

    pub fn history(&self) -> &[(Side, Move)] {
        &self.history
    }

    pub fn round_buffer(&self) -> &BlockSeq {
        &self.round_buffer
    }

    pub fn current_block(&self) -> Option<&BlockSeq> {
        self.current_block.as_ref()
    }

    pub fn last_nat(&self) -> Option<usize> {
        self.last_nat
    }

    pub fn oracle(&self) -> Option<&FamilyOracle> {
        self.oracle.as_ref()
    }

    pub fn to_move(&self) -> Side {
        self.to_move
    }

    /// Number of II's nonzero replies beyond the prefix.
    pub fn replies(&self) -> usize {
        self.outcome.len() - self.prefix.len()
    }

    /// The span II's next nonzero reply must come from.
    pub fn reply_source(&self) -> Option<&BlockSeq> {
        match self.kind {
            GameKind::Asymptotic => Some(&self.ground),
            GameKind::Gowers | GameKind::RestrictedGowers => self.current_block.as_ref(),
            GameKind::FinitizedGowers => Some(&self.round_buffer),
        }
    }

    /// The index II's next reply must be supported strictly above, from the
    /// block discipline and (in the asymptotic game) I's latest number.
    pub fn reply_floor(&self) -> Option<usize> {
        let block_floor = self.outcome.max_support();
        let nat_floor = match self.kind {
            GameKind::Asymptotic => self.last_nat,
            _ => None,
        };
        match (block_floor, nat_floor) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    /// Checks a move without applying it. The checks run in a fixed order
    /// (shape, support floor, block compatibility, span membership, oracle)
    /// so rejection reasons are stable.
    pub fn validate_move(&self, mv: &Move) -> Result<(), Rejection> {
        match (self.to_move, mv) {
            (Side::I, Move::Nat(_)) => {
                if self.kind != GameKind::Asymptotic {
                    return Err(self.wrong_shape_i());
                }
                Ok(())
            }
            (Side::I, Move::Block(y)) => {
                if !matches!(
                    self.kind,
                    GameKind::Gowers | GameKind::RestrictedGowers
                ) {
                    return Err(self.wrong_shape_i());
                }
                if y.is_empty() || y.field() != self.ground.field() {
                    return Err(Rejection::WrongShape {
                        expected: "a nonempty block sequence over the ground field",
                    });
                }
                if !precedes(y, &self.ground).map_err(|_| Rejection::NotInSpan)? {
                    return Err(Rejection::NotInSpan);
                }
                if self.kind == GameKind::RestrictedGowers {
                    let oracle = self.oracle.as_ref().expect("restricted game has an oracle");
                    if !oracle.admits(y) {
                        return Err(Rejection::OracleRejected {
                            name: oracle.name().to_string(),
                        });
                    }
                }
                Ok(())
            }
            (Side::I, Move::Reveal(v)) => {
                if self.kind != GameKind::FinitizedGowers {
                    return Err(self.wrong_shape_i());
                }
                if v.is_zero() || v.field() != self.ground.field() {
                    return Err(Rejection::WrongShape {
                        expected: "a nonzero vector over the ground field",
                    });
                }
                if let Some(hi) = self.round_buffer.max_support() {
                    if v.min_support().expect("nonzero") <= hi {
                        return Err(Rejection::NotBlockCompatible { floor: hi });
                    }
                }
                if !in_span(v, &self.ground).map_err(|_| Rejection::NotInSpan)? {
                    return Err(Rejection::NotInSpan);
                }
                Ok(())
            }
            (Side::II, Move::Reply(v)) => {
                if v.field() != self.ground.field() {
                    return Err(Rejection::WrongShape {
                        expected: "a vector over the ground field",
                    });
                }
                if v.is_zero() {
                    if self.kind == GameKind::FinitizedGowers {
                        return Ok(());
                    }
                    return Err(Rejection::WrongShape {
                        expected: "a nonzero reply (passing is a finitized-game move)",
                    });
                }
                let lo = v.min_support().expect("nonzero");
                if self.kind == GameKind::Asymptotic {
                    if let Some(n) = self.last_nat {
                        if lo <= n {
                            return Err(Rejection::SupportTooLow { floor: n });
                        }
                    }
                }
                if let Some(hi) = self.outcome.max_support() {
                    if lo <= hi {
                        return Err(Rejection::NotBlockCompatible { floor: hi });
                    }
                }
                let source = self
                    .reply_source()
                    .ok_or(Rejection::NotInSpan)?;
                if !in_span(v, source).map_err(|_| Rejection::NotInSpan)? {
                    return Err(Rejection::NotInSpan);
                }
                Ok(())
            }
            _ => Err(match self.to_move {
                Side::I => self.wrong_shape_i(),
                Side::II => Rejection::WrongShape {
                    expected: "a reply vector from II",
                },
            }),
        }
    }

    fn wrong_shape_i(&self) -> Rejection {
        Rejection::WrongShape {
            expected: match self.kind {
                GameKind::Asymptotic => "a natural number from I",
                GameKind::Gowers | GameKind::RestrictedGowers => "a block sequence from I",
                GameKind::FinitizedGowers => "a revealed vector from I",
            },
        }
    }

    /// Validates and applies a move, returning the successor state.
    pub fn step(&self, mv: Move) -> Result<GameState, Rejection> {
        self.validate_move(&mv)?;
        let mut next = self.clone();
        next.history.push((self.to_move, mv.clone()));
        match mv {
            Move::Nat(n) => next.last_nat = Some(n),
            Move::Block(y) => next.current_block = Some(y),
            Move::Reveal(v) => {
                next.round_buffer = next
                    .round_buffer
                    .appended(v)
                    .expect("validated reveal continues the buffer");
            }
            Move::Reply(v) => {
                if !v.is_zero() {
                    next.outcome = next
                        .outcome
                        .appended(v)
                        .expect("validated reply continues the outcome");
                    if next.kind == GameKind::FinitizedGowers {
                        next.round_buffer = BlockSeq::empty(next.ground.field());
                    }
                }
            }
        }
        next.to_move = self.to_move.other();
        Ok(next)
    }
}

/// Configuration echo for reports: which game, how big the ground is.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameSummary {
    pub kind: GameKind,
    pub ground_blocks: usize,
    pub prefix_blocks: usize,
}

impl From<&GameState> for GameSummary {
    fn from(s: &GameState) -> Self {
        GameSummary {
            kind: s.kind(),
            ground_blocks: s.ground().len(),
            prefix_blocks: s.prefix().len(),
        }
    }
}
