//! Vectors with finite support over a prime field, and block sequences:
//! finite lists of nonzero vectors whose support windows strictly increase.
//!
//! The span of a block sequence is a finite set once the field and the
//! blocks are fixed; [`enumerate_span`] walks it in a single canonical
//! order that the rest of the crate treats as the definition of
//! "first vector such that ...".

mod blockseq;
mod field;
mod span;
mod vector;

pub use blockseq::{decompose, in_span, precedes, BlockSeq};
pub use field::FieldSpec;
pub use span::{enumerate_span, SpanIter};
pub use vector::Vector;

/// Errors for vector and block-sequence construction and span operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VecError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large for exact arithmetic")]
    ModulusTooLarge(u64),
    #[error("operands belong to different prime fields")]
    FieldMismatch,
    #[error("a block must be a nonzero vector (block {index})")]
    ZeroBlock { index: usize },
    #[error("block supports must be strictly increasing (block {index})")]
    BlockOverlap { index: usize },
    #[error("vector is not in the span of the block sequence")]
    NotInSpan,
    #[error("span of {blocks} blocks exceeds the exhaustive bound of {bound} blocks")]
    BoundExceeded { blocks: usize, bound: usize },
}
