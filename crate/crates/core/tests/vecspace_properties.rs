//! Randomized cross-checks of span arithmetic against brute force.
//!
//! The oracle here never calls `decompose`: it rebuilds every span vector
//! by direct summation over all coefficient tuples and compares the two
//! answers vector by vector.

use std::collections::HashMap;

use blocklab::vecspace::{
    decompose, enumerate_span, in_span, precedes, BlockSeq, FieldSpec, VecError, Vector,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every nonzero span vector with its coefficient tuple, by summing
/// scaled blocks directly. Insertion collisions would mean the blocks are
/// linearly dependent, which disjoint windows rule out.
fn brute_force_span(x: &BlockSeq) -> HashMap<Vector, Vec<u64>> {
    let p = x.field().p();
    let mut table = HashMap::new();
    let mut coeffs = vec![0u64; x.len()];
    loop {
        let mut i = 0;
        loop {
            if i == x.len() {
                return table;
            }
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        let mut v = Vector::zero(x.field());
        for (c, b) in coeffs.iter().zip(x.iter()) {
            v = v.add_scaled(*c, b).unwrap();
        }
        let clash = table.insert(v, coeffs.clone());
        assert!(clash.is_none(), "two coefficient tuples rebuilt one vector");
    }
}

/// A window: gap before it, then coefficients whose ends are nonzero.
fn arb_window(p: u64) -> impl Strategy<Value = (usize, Vec<u64>)> {
    (0..3usize, 1..=3usize).prop_flat_map(move |(gap, width)| {
        (
            Just(gap),
            1..p,
            prop::collection::vec(0..p, width.saturating_sub(2)),
            1..p,
            Just(width),
        )
            .prop_map(|(gap, lead, interior, top, width)| {
                let mut w = vec![lead];
                if width >= 2 {
                    w.extend(interior);
                    w.push(top);
                }
                (gap, w)
            })
    })
}

fn arb_blockseq(p: u64) -> impl Strategy<Value = BlockSeq> {
    prop::collection::vec(arb_window(p), 1..=4).prop_map(move |specs| {
        let field = FieldSpec::new(p).unwrap();
        let mut blocks = Vec::new();
        let mut next = 0usize;
        for (gap, window) in specs {
            let start = next + gap;
            let mut coeffs = vec![0u64; start];
            coeffs.extend(&window);
            blocks.push(Vector::from_coeffs(field, coeffs));
            next = start + window.len();
        }
        BlockSeq::new(field, blocks).expect("windows were laid out disjointly")
    })
}

fn arb_field_blockseq() -> impl Strategy<Value = BlockSeq> {
    prop_oneof![Just(2u64), Just(3u64)].prop_flat_map(arb_blockseq)
}

/// Groups consecutive blocks into nonzero combinations, producing a
/// sequence strictly below the input.
fn combine_groups(x: &BlockSeq, rng: &mut ChaCha8Rng) -> BlockSeq {
    let p = x.field().p();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < x.len() {
        let size = rng.random_range(1..=(x.len() - i).min(2));
        let mut v = x.blocks()[i].scaled(rng.random_range(1..p));
        for j in i + 1..i + size {
            v = v.add_scaled(rng.random_range(0..p), &x.blocks()[j]).unwrap();
        }
        blocks.push(v);
        i += size;
    }
    BlockSeq::new(x.field(), blocks).unwrap()
}

proptest! {
    #[test]
    fn decompose_agrees_with_brute_force(x in arb_field_blockseq()) {
        let table = brute_force_span(&x);
        let expected = (x.field().p() as usize).pow(x.len() as u32) - 1;
        prop_assert_eq!(table.len(), expected);
        for (v, coeffs) in &table {
            prop_assert!(in_span(v, &x).unwrap());
            prop_assert_eq!(&decompose(v, &x).unwrap(), coeffs);
        }
        let mut seen = 0usize;
        for v in enumerate_span(&x, 8).unwrap() {
            prop_assert!(table.contains_key(&v));
            seen += 1;
        }
        prop_assert_eq!(seen, table.len());
    }

    #[test]
    fn membership_survives_perturbation(
        x in arb_field_blockseq(),
        bump_at in 0..32usize,
        bump_by in 1..5u64,
    ) {
        // Nudge every span vector by a basis multiple and ask both the
        // oracle and the implementation whether the result still lies in
        // the span. They must agree, and rejections must be NotInSpan.
        let table = brute_force_span(&x);
        let range = x.max_support().unwrap() + 2;
        let bump = Vector::basis(x.field(), bump_at % range).scaled(x.field().reduce(bump_by));
        for v in table.keys() {
            let moved = v.add(&bump).unwrap();
            if moved.is_zero() {
                continue;
            }
            let oracle = table.contains_key(&moved);
            prop_assert_eq!(in_span(&moved, &x).unwrap(), oracle);
            match decompose(&moved, &x) {
                Ok(coeffs) => prop_assert_eq!(Some(&coeffs), table.get(&moved)),
                Err(VecError::NotInSpan) => prop_assert!(!oracle),
                Err(other) => prop_assert!(false, "unexpected error {other}"),
            }
        }
    }

    #[test]
    fn precedes_is_reflexive_and_transitive(x in arb_field_blockseq(), seed in any::<u64>()) {
        prop_assert!(precedes(&x, &x).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = combine_groups(&x, &mut rng);
        let z = combine_groups(&y, &mut rng);
        prop_assert!(precedes(&y, &x).unwrap());
        prop_assert!(precedes(&z, &y).unwrap());
        prop_assert!(precedes(&z, &x).unwrap());
    }

    #[test]
    fn tails_cut_cleanly_and_idempotently(x in arb_field_blockseq(), n in 0..16usize) {
        let tail = x.tail(n);
        for b in tail.iter() {
            prop_assert!(b.min_support().unwrap() > n);
        }
        prop_assert_eq!(tail.tail(n), x.tail(n));
        // Dropped blocks are exactly those reaching n or below.
        let dropped = x.len() - tail.len();
        let expected = x.iter().filter(|b| b.min_support().unwrap() <= n).count();
        prop_assert_eq!(dropped, expected);
    }
}
