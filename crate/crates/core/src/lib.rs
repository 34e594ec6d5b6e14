//! Finite, fully inspectable models of block-sequence combinatorics over
//! prime fields.
//!
//! Everything here is desk scale: vectors have finite support, block
//! sequences are finite, spans are enumerated exhaustively under explicit
//! bounds, and every search is deterministic. The crate provides
//!
//! * [`vecspace`]: vectors over F_p, block sequences, span decomposition;
//! * [`osc`]: the oscillation statistic, its residue partition, and the
//!   derived classification of span vectors;
//! * [`games`]: four turn-based vector games with pluggable strategies;
//! * [`ptree`]: depth-bounded perfect binary trees with branching levels,
//!   cone restriction, and fusion;
//! * [`codec`]: finite-set/natural-number codings and the game pipeline
//!   that leaks a hidden bit string through oscillation classes;
//! * [`experiments`]: dichotomy searches over linear maps and vector-set
//!   oracles.

pub mod codec;
pub mod experiments;
pub mod games;
pub mod osc;
pub mod ptree;
pub mod vecspace;
