use super::{BlockSeq, VecError, Vector};

/// Enumerates every nonzero vector in the span of `x` in canonical order.
///
/// The order is fixed once and for all: a counter `k = 1, 2, ..., p^m - 1`
/// is read as base-p digits, the digit of weight `p^i` being the coefficient
/// of block `i`. The first block is the least significant digit, so for
/// `x = (e0)` over F_3 the order is `e0, 2e0`, and vectors supported on
/// early blocks come first. Every "canonically first vector such that ..."
/// in this crate means first in this enumeration.
///
/// `bound` caps the number of blocks enumerated exhaustively.
pub fn enumerate_span<'a>(x: &'a BlockSeq, bound: usize) -> Result<SpanIter<'a>, VecError> {
    if x.len() > bound {
        return Err(VecError::BoundExceeded {
            blocks: x.len(),
            bound,
        });
    }
    let p = x.field().p() as u128;
    let total = p
        .checked_pow(x.len() as u32)
        .ok_or(VecError::BoundExceeded {
            blocks: x.len(),
            bound,
        })?;
    Ok(SpanIter {
        x,
        counter: 1,
        total,
    })
}

pub struct SpanIter<'a> {
    x: &'a BlockSeq,
    counter: u128,
    total: u128,
}

impl<'a> Iterator for SpanIter<'a> {
    type Item = Vector;

    fn next(&mut self) -> Option<Vector> {
        if self.counter >= self.total {
            return None;
        }
        let p = self.x.field().p() as u128;
        let mut k = self.counter;
        self.counter += 1;
        let mut acc = Vector::zero(self.x.field());
        for block in self.x.iter() {
            let c = (k % p) as u64;
            if c != 0 {
                acc = acc
                    .add_scaled(c, block)
                    .expect("blocks share the sequence's field");
            }
            k /= p;
            if k == 0 {
                break;
            }
        }
        Some(acc)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.counter) as usize;
        (left, Some(left))
    }
}
