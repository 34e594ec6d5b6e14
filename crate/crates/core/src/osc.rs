//! The oscillation statistic and the residue partition it feeds.
//!
//! For a nonzero vector with dense coefficients `a_0, a_1, ...` (zero beyond
//! the stored range), `osc(v)` counts the support indices `i` with
//! `a_i != a_{i+1}`. Interior zeros count; the final drop to zero always
//! counts; scaling the vector never changes the count.
//!
//! Naturals are partitioned by [`partition_class`]: class `n` holds the `k`
//! with `k ≡ 2^n - 1 (mod 2^{n+1})`, i.e. binary expansions ending in
//! exactly `n` ones. Consecutive members of class `n` differ by exactly
//! `2^{n+1}`, so every interval of that length meets the class. Composing
//! the two maps classifies every nonzero vector by [`asymptotic_class`].
//!
//! Which classes are realized inside the span of a given block sequence is
//! an empirical question at desk scale; `find_in_class` and `osc_image`
//! answer it by exhaustive enumeration, and the command-line calibrator
//! records the answers as fixtures rather than constants in code.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::vecspace::{enumerate_span, BlockSeq, VecError, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum OscError {
    #[error("the zero vector has no oscillation")]
    ZeroVector,
}

/// Number of support indices where the coefficient differs from its right
/// neighbor.
pub fn osc(v: &Vector) -> Result<u64, OscError> {
    if v.is_zero() {
        return Err(OscError::ZeroVector);
    }
    let c = v.coeffs();
    let mut count = 0;
    for (i, &a) in c.iter().enumerate() {
        if a != 0 && a != c.get(i + 1).copied().unwrap_or(0) {
            count += 1;
        }
    }
    Ok(count)
}

/// The unique `n` with `k ≡ 2^n - 1 (mod 2^{n+1})`: the number of trailing
/// ones in the binary expansion of `k`. Total on the naturals.
pub fn partition_class(k: u64) -> u32 {
    k.trailing_ones()
}

/// `partition_class(osc(v))` for nonzero `v`.
pub fn asymptotic_class(v: &Vector) -> Result<u32, OscError> {
    Ok(partition_class(osc(v)?))
}

/// The canonically first span vector of `x` in the given class, if any.
pub fn find_in_class(
    x: &BlockSeq,
    class: u32,
    bound: usize,
) -> Result<Option<Vector>, VecError> {
    for v in enumerate_span(x, bound)? {
        if asymptotic_class(&v).expect("span vectors are nonzero") == class {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// The set of oscillation values over the nonzero span of a block sequence,
/// with the length of its longest run of consecutive integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscImage {
    pub values: BTreeSet<u64>,
    pub longest_run: u64,
}

pub fn osc_image(x: &BlockSeq, bound: usize) -> Result<OscImage, VecError> {
    let mut values = BTreeSet::new();
    for v in enumerate_span(x, bound)? {
        values.insert(osc(&v).expect("span vectors are nonzero"));
    }
    let mut longest = 0u64;
    let mut run = 0u64;
    let mut prev: Option<u64> = None;
    for &k in &values {
        run = match prev {
            Some(q) if k == q + 1 => run + 1,
            _ => 1,
        };
        longest = longest.max(run);
        prev = Some(k);
    }
    Ok(OscImage {
        values,
        longest_run: longest,
    })
}
