use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{FieldSpec, VecError, Vector};

/// A finite block sequence: nonzero vectors whose support windows strictly
/// increase (`max supp(x_i) < min supp(x_{i+1})`). Validity is checked on
/// construction and preserved by every operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSeq {
    field: FieldSpec,
    blocks: Vec<Vector>,
}

impl BlockSeq {
    pub fn new(field: FieldSpec, blocks: Vec<Vector>) -> Result<Self, VecError> {
        let mut prev_max: Option<usize> = None;
        for (index, b) in blocks.iter().enumerate() {
            if b.field() != field {
                return Err(VecError::FieldMismatch);
            }
            if b.is_zero() {
                return Err(VecError::ZeroBlock { index });
            }
            let lo = b.min_support().expect("nonzero block has support");
            if let Some(hi) = prev_max {
                if lo <= hi {
                    return Err(VecError::BlockOverlap { index });
                }
            }
            prev_max = b.max_support();
        }
        Ok(BlockSeq { field, blocks })
    }

    pub fn empty(field: FieldSpec) -> Self {
        BlockSeq {
            field,
            blocks: Vec::new(),
        }
    }

    /// Basis blocks e_i for the given indices. Indices are sorted and
    /// deduplicated, so the result is always a valid block sequence.
    pub fn from_basis(field: FieldSpec, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        BlockSeq {
            field,
            blocks: idx.into_iter().map(|i| Vector::basis(field, i)).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vector] {
        &self.blocks
    }

    pub fn get(&self, i: usize) -> Option<&Vector> {
        self.blocks.get(i)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vector> {
        self.blocks.iter()
    }

    pub fn min_support(&self) -> Option<usize> {
        self.blocks.first().and_then(Vector::min_support)
    }

    pub fn max_support(&self) -> Option<usize> {
        self.blocks.last().and_then(Vector::max_support)
    }

    /// The maximal suffix all of whose blocks have min support strictly
    /// above `n`. Support windows increase, so this keeps exactly the blocks
    /// with `min supp > n`.
    pub fn tail(&self, n: usize) -> BlockSeq {
        let start = self
            .blocks
            .partition_point(|b| b.min_support().expect("nonzero block") <= n);
        BlockSeq {
            field: self.field,
            blocks: self.blocks[start..].to_vec(),
        }
    }

    /// A copy of the suffix starting at block `start`.
    pub fn suffix(&self, start: usize) -> BlockSeq {
        BlockSeq {
            field: self.field,
            blocks: self.blocks[start.min(self.blocks.len())..].to_vec(),
        }
    }

    /// A new sequence with `block` appended; it must continue the window
    /// discipline.
    pub fn appended(&self, block: Vector) -> Result<BlockSeq, VecError> {
        if block.field() != self.field {
            return Err(VecError::FieldMismatch);
        }
        if block.is_zero() {
            return Err(VecError::ZeroBlock {
                index: self.blocks.len(),
            });
        }
        if let (Some(hi), Some(lo)) = (self.max_support(), block.min_support()) {
            if lo <= hi {
                return Err(VecError::BlockOverlap {
                    index: self.blocks.len(),
                });
            }
        }
        let mut blocks = self.blocks.clone();
        blocks.push(block);
        Ok(BlockSeq {
            field: self.field,
            blocks,
        })
    }
}

impl fmt::Display for BlockSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for BlockSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.blocks.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BlockSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let blocks = Vec::<Vector>::deserialize(deserializer)?;
        // An empty sequence carries no field of its own; parsing one yields
        // the two-element field.
        let field = match blocks.first() {
            Some(b) => b.field(),
            None => FieldSpec::new(2).expect("2 is prime"),
        };
        BlockSeq::new(field, blocks).map_err(D::Error::custom)
    }
}

/// Expresses `v` in the blocks of `x`: returns coefficients `c` with
/// `v = sum c_i x_i`, scanning the support of `v` from the top down.
///
/// Support windows are disjoint, so `v` is in the span exactly when it
/// vanishes outside the windows and equals a scalar multiple of the block
/// inside each window; no elimination is needed. The scalar for window `i`
/// is pinned by the window's top index, where the block is nonzero. The
/// membership scan allocates nothing, so rejections are cheap; the
/// coefficient vector is built only for members.
pub fn decompose(v: &Vector, x: &BlockSeq) -> Result<Vec<u64>, VecError> {
    if v.field() != x.field() {
        return Err(VecError::FieldMismatch);
    }
    let f = v.field();
    let vc = v.coeffs();
    let at = |j: usize| if j < vc.len() { vc[j] } else { 0 };
    let window_scalar = |block: &Vector| {
        let hi = block.max_support().expect("nonzero block");
        f.mul(at(hi), f.inv(block.coeff(hi)))
    };
    // `top`: everything at index >= top is already known to vanish or to be
    // covered by a higher window.
    let mut top = vc.len();
    for block in x.blocks().iter().rev() {
        let hi = block.max_support().expect("nonzero block");
        let lo = block.min_support().expect("nonzero block");
        while top > hi + 1 {
            // The gap above this window (or above all of them).
            if vc[top - 1] != 0 {
                return Err(VecError::NotInSpan);
            }
            top -= 1;
        }
        let c = window_scalar(block);
        // With c pinned by the top index, a lead strictly inside the window
        // (c = 0 there) or any other mismatch fails this comparison.
        for j in lo..=hi {
            if at(j) != f.mul(c, block.coeff(j)) {
                return Err(VecError::NotInSpan);
            }
        }
        // min: when v ends below this window, top already sits under lo.
        top = top.min(lo);
    }
    while top > 0 {
        // Below the lowest window nothing can cancel a nonzero entry.
        if vc[top - 1] != 0 {
            return Err(VecError::NotInSpan);
        }
        top -= 1;
    }
    Ok(x.blocks().iter().map(window_scalar).collect())
}

/// True iff `v` lies in the span of `x`. The zero vector is in every span.
pub fn in_span(v: &Vector, x: &BlockSeq) -> Result<bool, VecError> {
    match decompose(v, x) {
        Ok(_) => Ok(true),
        Err(VecError::NotInSpan) => Ok(false),
        Err(e) => Err(e),
    }
}

/// True iff every block of `y` lies in the span of `x` (written `y ⪯ x`).
pub fn precedes(y: &BlockSeq, x: &BlockSeq) -> Result<bool, VecError> {
    if y.field() != x.field() {
        return Err(VecError::FieldMismatch);
    }
    for b in y.iter() {
        if !in_span(b, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}
