//! Depth-bounded approximations to perfect binary trees.
//!
//! A condition is a downward-closed set of 0/1 strings with a fixed leaf
//! depth and no dead ends: every node shorter than the leaf depth has a
//! child, so every branch reaches the bottom. The API speaks strings over
//! the alphabet {0, 1} with the empty string as root; internally a node is
//! a bit at its heap index (root 1, children 2i and 2i+1), so cones,
//! unions, intersections, and comparisons are word operations.
//!
//! The branching level of a node counts its branching strict predecessors.
//! `branching_levels(p, n)` collects the minimal nodes at level `n`; when
//! defined it always has exactly 2^n members, and the cones below those
//! nodes cover the condition. `q ≤_n p` means `q ⊆ p` with the same level-n
//! frontier, which is what fusion consumes: a chain `p_{i+1} ≤_{i+1} p_i`
//! intersects and prunes to a condition refining every stage.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

/// Largest supported leaf depth. A condition owns 2^(depth+1) bits of index
/// space, so this cap keeps a single value at a few megabytes.
pub const MAX_DEPTH: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PTreeError {
    #[error("node {0:?} contains characters other than 0 and 1")]
    BadLabel(String),
    #[error("node {0:?} exceeds leaf depth {1}")]
    TooDeep(String, usize),
    #[error("leaf depth {depth} exceeds the supported maximum {max}")]
    DepthUnsupported { depth: usize, max: usize },
    #[error("tree does not contain the root")]
    MissingRoot,
    #[error("node {0:?} is missing its parent")]
    Orphan(String),
    #[error("node {0:?} ends before leaf depth")]
    DeadEnd(String),
    #[error("node {0:?} is not in the tree")]
    NodeAbsent(String),
    #[error("branching level {level} undefined: the branch at {node:?} has only {found} branchings")]
    LevelUndefined {
        level: usize,
        node: String,
        found: usize,
    },
    #[error("leaf depths differ: {0} vs {1}")]
    DepthMismatch(usize, usize),
    #[error("fusion takes at least one condition")]
    EmptyChain,
    #[error("fusion chain broken: element {0} does not refine element {1} at stage {0}")]
    ChainViolation(usize, usize),
    #[error("refiner output at stage {0} is not a restriction of its cone")]
    RefinerOutput(usize),
}

fn word_len(depth: usize) -> usize {
    (1usize << (depth + 1)).div_ceil(64)
}

fn bit(bits: &[u64], i: u64) -> bool {
    (bits[(i / 64) as usize] >> (i % 64)) & 1 == 1
}

fn set_bit(bits: &mut [u64], i: u64) {
    bits[(i / 64) as usize] |= 1u64 << (i % 64);
}

fn clear_bit(bits: &mut [u64], i: u64) {
    bits[(i / 64) as usize] &= !(1u64 << (i % 64));
}

/// Heap index of a label: 1 for the root, then one bit per character.
/// `None` for characters outside {0, 1}; the caller bounds the length.
fn index_of(s: &str) -> Option<u64> {
    let mut i = 1u64;
    for c in s.chars() {
        match c {
            '0' => i <<= 1,
            '1' => i = i << 1 | 1,
            _ => return None,
        }
    }
    Some(i)
}

fn depth_of(i: u64) -> usize {
    (63 - i.leading_zeros()) as usize
}

fn label_of(i: u64) -> String {
    let len = depth_of(i);
    let mut s = String::with_capacity(len);
    for k in (0..len).rev() {
        s.push(if (i >> k) & 1 == 1 { '1' } else { '0' });
    }
    s
}

/// Copies the bits of `src` in the index range `[from, to)` into `dst`.
fn copy_range(src: &[u64], dst: &mut [u64], from: u64, to: u64) {
    for w in (from / 64) as usize..to.div_ceil(64) as usize {
        let lo = w as u64 * 64;
        let mut mask = u64::MAX;
        if from > lo {
            mask &= u64::MAX << (from - lo);
        }
        if to < lo + 64 {
            mask &= u64::MAX >> (lo + 64 - to);
        }
        dst[w] |= src[w] & mask;
    }
}

/// Clears the bits of `bits` in the index range `[from, to)`.
fn clear_range(bits: &mut [u64], from: u64, to: u64) {
    for w in (from / 64) as usize..to.div_ceil(64) as usize {
        let lo = w as u64 * 64;
        let mut mask = u64::MAX;
        if from > lo {
            mask &= u64::MAX << (from - lo);
        }
        if to < lo + 64 {
            mask &= u64::MAX >> (lo + 64 - to);
        }
        bits[w] &= !mask;
    }
}

/// A depth-bounded perfect-tree condition. Immutable after construction;
/// all operations return new values.
#[derive(Clone, PartialEq, Eq)]
pub struct PTreeApprox {
    depth: usize,
    bits: Vec<u64>,
}

impl PTreeApprox {
    pub fn new(depth: usize, nodes: BTreeSet<String>) -> Result<Self, PTreeError> {
        if depth > MAX_DEPTH {
            return Err(PTreeError::DepthUnsupported {
                depth,
                max: MAX_DEPTH,
            });
        }
        if !nodes.contains("") {
            return Err(PTreeError::MissingRoot);
        }
        let mut bits = vec![0u64; word_len(depth)];
        for s in &nodes {
            if !s.chars().all(|c| c == '0' || c == '1') {
                return Err(PTreeError::BadLabel(s.clone()));
            }
            if s.len() > depth {
                return Err(PTreeError::TooDeep(s.clone(), depth));
            }
            set_bit(&mut bits, index_of(s).expect("label was checked"));
        }
        for s in &nodes {
            if !s.is_empty() && !bit(&bits, index_of(s).expect("label was checked") >> 1) {
                return Err(PTreeError::Orphan(s.clone()));
            }
        }
        for level in 0..depth {
            for i in (1u64 << level)..(1u64 << (level + 1)) {
                if bit(&bits, i) && !bit(&bits, i << 1) && !bit(&bits, i << 1 | 1) {
                    return Err(PTreeError::DeadEnd(label_of(i)));
                }
            }
        }
        Ok(PTreeApprox { depth, bits })
    }

    /// The full binary tree of the given leaf depth.
    pub fn full(depth: usize) -> Self {
        assert!(
            depth <= MAX_DEPTH,
            "leaf depth {depth} exceeds the supported maximum {MAX_DEPTH}"
        );
        let mut bits = vec![u64::MAX; word_len(depth)];
        bits[0] &= !1; // index 0 is unused
        let spare = word_len(depth) * 64 - (1usize << (depth + 1));
        if spare > 0 {
            let last = bits.len() - 1;
            bits[last] &= u64::MAX >> spare;
        }
        PTreeApprox { depth, bits }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        (1..(1u64 << (self.depth + 1))).filter(move |&i| bit(&self.bits, i))
    }

    /// The node labels, rebuilt from the bitset.
    pub fn nodes(&self) -> BTreeSet<String> {
        self.indices().map(label_of).collect()
    }

    /// Number of nodes; a valid condition always contains at least the root.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, s: &str) -> bool {
        if s.len() > self.depth {
            return false;
        }
        match index_of(s) {
            Some(i) => bit(&self.bits, i),
            None => false,
        }
    }

    /// Nodes at leaf depth.
    pub fn leaves(&self) -> impl Iterator<Item = String> + '_ {
        let lo = 1u64 << self.depth;
        (lo..lo * 2)
            .filter(move |&i| bit(&self.bits, i))
            .map(label_of)
    }

    pub fn is_branching(&self, s: &str) -> bool {
        if s.len() >= self.depth {
            return false;
        }
        match index_of(s) {
            Some(i) => bit(&self.bits, i << 1) && bit(&self.bits, i << 1 | 1),
            None => false,
        }
    }

    /// `self` restricted to the cone at `s`: the nodes comparable with `s`.
    pub fn restrict(&self, s: &str) -> Result<Self, PTreeError> {
        if !self.contains(s) {
            return Err(PTreeError::NodeAbsent(s.to_string()));
        }
        let at = index_of(s).expect("contained label is valid");
        let mut bits = vec![0u64; self.bits.len()];
        // Ancestors are present by downward closure; the descendants at
        // distance k below s fill the contiguous index range [at<<k, (at+1)<<k).
        let mut a = at;
        loop {
            set_bit(&mut bits, a);
            if a == 1 {
                break;
            }
            a >>= 1;
        }
        for k in 1..=(self.depth - s.len()) {
            copy_range(&self.bits, &mut bits, at << k, (at + 1) << k);
        }
        // Every branch of a valid condition through s reaches leaf depth,
        // so the cone is again a valid condition.
        Ok(PTreeApprox {
            depth: self.depth,
            bits,
        })
    }

    /// The minimal nodes whose branches have passed exactly `n` branching
    /// nodes. Undefined when some branch bottoms out with fewer branchings.
    pub fn branching_levels(&self, n: usize) -> Result<BTreeSet<String>, PTreeError> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<(u64, usize)> = vec![(1, 0)];
        while let Some((node, count)) = stack.pop() {
            if count == n {
                out.insert(label_of(node));
                continue;
            }
            if depth_of(node) == self.depth {
                return Err(PTreeError::LevelUndefined {
                    level: n,
                    node: label_of(node),
                    found: count,
                });
            }
            let children = [node << 1, node << 1 | 1];
            let step = if children.iter().all(|&c| bit(&self.bits, c)) {
                1
            } else {
                0
            };
            for c in children {
                if bit(&self.bits, c) {
                    stack.push((c, count + step));
                }
            }
        }
        Ok(out)
    }

    /// `self ≤_n p`: node containment with the same level-`n` frontier.
    /// Both frontiers must be defined.
    pub fn leq_n(&self, p: &PTreeApprox, n: usize) -> Result<bool, PTreeError> {
        if self.depth != p.depth {
            return Err(PTreeError::DepthMismatch(self.depth, p.depth));
        }
        let mine = self.branching_levels(n)?;
        let theirs = p.branching_levels(n)?;
        Ok(self.is_subset(p) && mine == theirs)
    }

    fn is_subset(&self, p: &PTreeApprox) -> bool {
        self.bits.iter().zip(&p.bits).all(|(a, b)| a & !b == 0)
    }

    /// Plain refinement: same depth and node containment.
    pub fn is_restriction_of(&self, p: &PTreeApprox) -> bool {
        self.depth == p.depth && self.is_subset(p)
    }

    /// The union of two conditions of the same depth. Downward closure and
    /// the no-dead-end rule both survive unions, so the result is again a
    /// valid condition.
    pub fn union(&self, p: &PTreeApprox) -> Result<Self, PTreeError> {
        if self.depth != p.depth {
            return Err(PTreeError::DepthMismatch(self.depth, p.depth));
        }
        let bits = self.bits.iter().zip(&p.bits).map(|(a, b)| a | b).collect();
        Ok(PTreeApprox {
            depth: self.depth,
            bits,
        })
    }
}

impl fmt::Debug for PTreeApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PTreeApprox")
            .field("depth", &self.depth)
            .field("nodes", &self.nodes())
            .finish()
    }
}

impl Serialize for PTreeApprox {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            depth: usize,
            nodes: BTreeSet<String>,
        }
        Repr {
            depth: self.depth,
            nodes: self.nodes(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PTreeApprox {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        struct Repr {
            depth: usize,
            nodes: BTreeSet<String>,
        }
        let repr = Repr::deserialize(deserializer)?;
        PTreeApprox::new(repr.depth, repr.nodes).map_err(D::Error::custom)
    }
}

/// Fuses a chain `p_0, p_1, ..., p_k` with `p_{i+1} ≤_{i+1} p_i`: verifies
/// the chain, intersects the node sets, and prunes branches that no longer
/// reach leaf depth. The result refines `p_n` at level `n` for every stage.
pub fn fuse(chain: &[PTreeApprox]) -> Result<PTreeApprox, PTreeError> {
    let first = chain.first().ok_or(PTreeError::EmptyChain)?;
    for (i, q) in chain.iter().enumerate().skip(1) {
        if !q.leq_n(&chain[i - 1], i)? {
            return Err(PTreeError::ChainViolation(i, i - 1));
        }
    }
    let mut bits = first.bits.clone();
    for q in &chain[1..] {
        for (a, b) in bits.iter_mut().zip(&q.bits) {
            *a &= b;
        }
    }
    prune_bits(first.depth, &mut bits);
    if !bit(&bits, 1) {
        return Err(PTreeError::MissingRoot);
    }
    let fused = PTreeApprox {
        depth: first.depth,
        bits,
    };
    debug_assert!((0..chain.len()).all(|n| fused.leq_n(&chain[n], n).unwrap_or(false)));
    Ok(fused)
}

/// Keeps only the nodes lying on a branch that reaches leaf depth, sweeping
/// levels bottom-up so each parent sees its children's final state.
fn prune_bits(depth: usize, bits: &mut [u64]) {
    for level in (0..depth).rev() {
        for i in (1u64 << level)..(1u64 << (level + 1)) {
            if bit(bits, i) && !bit(bits, i << 1) && !bit(bits, i << 1 | 1) {
                clear_bit(bits, i);
            }
        }
    }
}

/// True iff the pruned intersection of the two conditions is again a valid
/// condition. A common leaf pulls its whole branch into both trees (they
/// are downward closed), so this holds exactly when the conditions share a
/// leaf at full depth.
pub fn compatible(q: &PTreeApprox, p: &PTreeApprox) -> Result<bool, PTreeError> {
    if q.depth() != p.depth() {
        return Err(PTreeError::DepthMismatch(q.depth(), p.depth()));
    }
    let lo = 1u64 << q.depth;
    for w in (lo / 64) as usize..(lo * 2).div_ceil(64) as usize {
        let base = w as u64 * 64;
        let mut mask = u64::MAX;
        if lo > base {
            mask &= u64::MAX << (lo - base);
        }
        if lo * 2 < base + 64 {
            mask &= u64::MAX >> (base + 64 - lo * 2);
        }
        if q.bits[w] & p.bits[w] & mask != 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One fusion stage after another, cone by cone: at stage `n` every cone of
/// `p_n` at its level-`n+1` frontier is handed to `refiner`, and the union
/// of the refined cones becomes `p_{n+1}`. The refiner must return a
/// restriction of its cone (same depth, nodes contained); stems up to the
/// frontier survive automatically, so each stage satisfies
/// `p_{n+1} ≤_{n+1} p_n`, and the stages fuse.
pub fn fusion_build(
    start: &PTreeApprox,
    mut refiner: impl FnMut(&PTreeApprox, usize) -> PTreeApprox,
    stages: usize,
) -> Result<FusionBuild, PTreeError> {
    let mut sequence = vec![start.clone()];
    for n in 0..stages {
        let current = sequence.last().expect("sequence starts nonempty");
        let frontier = current.branching_levels(n + 1)?;
        let mut union: Option<PTreeApprox> = None;
        for t in &frontier {
            let cone = current.restrict(t)?;
            let refined = refiner(&cone, n);
            if !refined.is_restriction_of(&cone) {
                return Err(PTreeError::RefinerOutput(n));
            }
            union = Some(match union {
                None => refined,
                Some(u) => u.union(&refined)?,
            });
        }
        let next = union.expect("a defined frontier is nonempty");
        if !next.leq_n(current, n + 1)? {
            return Err(PTreeError::RefinerOutput(n));
        }
        sequence.push(next);
    }
    let fused = fuse(&sequence)?;
    Ok(FusionBuild { sequence, fused })
}

#[derive(Debug, Clone)]
pub struct FusionBuild {
    pub sequence: Vec<PTreeApprox>,
    pub fused: PTreeApprox,
}

/// A random condition: the full tree of the given depth with `prunes` cone
/// removals. Each removal picks a branching node (uniformly among the
/// current ones) and deletes the cone above one child, which keeps the
/// condition valid. Deterministic for a fixed generator state.
pub fn random_condition(depth: usize, prunes: usize, rng: &mut impl Rng) -> PTreeApprox {
    random_refinement(&PTreeApprox::full(depth), prunes, rng)
}

/// A random refinement of `p`, by the same cone-removal walk.
pub fn random_refinement(p: &PTreeApprox, prunes: usize, rng: &mut impl Rng) -> PTreeApprox {
    let mut bits = p.bits.clone();
    let depth = p.depth;
    for _ in 0..prunes {
        let mut branching: Vec<u64> = Vec::new();
        for level in 0..depth {
            for i in (1u64 << level)..(1u64 << (level + 1)) {
                if bit(&bits, i) && bit(&bits, i << 1) && bit(&bits, i << 1 | 1) {
                    branching.push(i);
                }
            }
        }
        if branching.is_empty() {
            break;
        }
        let at = branching[rng.random_range(0..branching.len())];
        let child = at << 1 | u64::from(rng.random_bool(0.5));
        for k in 0..(depth - depth_of(at)) {
            clear_range(&mut bits, child << k, (child + 1) << k);
        }
    }
    PTreeApprox { depth, bits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn full_tree_has_all_nodes() {
        let p = PTreeApprox::full(3);
        assert_eq!(p.len(), 15);
        assert!(p.contains(""));
        assert!(p.contains("010"));
        assert_eq!(p.leaves().count(), 8);
    }

    #[test]
    fn validation_rejects_broken_trees() {
        assert_eq!(
            PTreeApprox::new(1, set(&["0"])),
            Err(PTreeError::MissingRoot)
        );
        assert_eq!(
            PTreeApprox::new(2, set(&["", "0", "00", "11"])),
            Err(PTreeError::Orphan("11".into()))
        );
        assert_eq!(
            PTreeApprox::new(2, set(&["", "0", "00", "1"])),
            Err(PTreeError::DeadEnd("1".into()))
        );
        assert_eq!(
            PTreeApprox::new(1, set(&["", "0", "01"])),
            Err(PTreeError::TooDeep("01".into(), 1))
        );
        assert_eq!(
            PTreeApprox::new(1, set(&["", "a"])),
            Err(PTreeError::BadLabel("a".into()))
        );
        assert_eq!(
            PTreeApprox::new(MAX_DEPTH + 1, set(&[""])),
            Err(PTreeError::DepthUnsupported {
                depth: MAX_DEPTH + 1,
                max: MAX_DEPTH
            })
        );
    }

    #[test]
    fn restrict_keeps_the_comparable_nodes() {
        let p = PTreeApprox::full(3);
        let cone = p.restrict("0").unwrap();
        assert_eq!(
            cone.nodes(),
            set(&["", "0", "00", "01", "000", "001", "010", "011"])
        );
        assert_eq!(cone.len(), 8);
        assert_eq!(
            p.restrict("2").err(),
            Some(PTreeError::NodeAbsent("2".into()))
        );
    }

    #[test]
    fn branching_levels_of_the_full_tree() {
        let p = PTreeApprox::full(3);
        assert_eq!(p.branching_levels(0).unwrap(), set(&[""]));
        assert_eq!(p.branching_levels(1).unwrap(), set(&["0", "1"]));
        assert_eq!(
            p.branching_levels(2).unwrap(),
            set(&["00", "01", "10", "11"])
        );
        assert!(matches!(
            p.branching_levels(4),
            Err(PTreeError::LevelUndefined { level: 4, .. })
        ));
    }

    #[test]
    fn branching_levels_skip_non_branching_stems() {
        // Remove the cone at "1": the root stops branching, so level 1
        // moves down to the children of "0".
        let mut nodes = PTreeApprox::full(3).nodes();
        nodes.retain(|s| !s.starts_with('1'));
        let p = PTreeApprox::new(3, nodes).unwrap();
        assert_eq!(p.branching_levels(0).unwrap(), set(&[""]));
        assert_eq!(p.branching_levels(1).unwrap(), set(&["00", "01"]));
    }

    #[test]
    fn cone_decomposition_covers_the_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_condition(6, 3, &mut rng);
            for n in 0..3 {
                let Ok(level) = p.branching_levels(n) else {
                    continue;
                };
                assert_eq!(level.len(), 1 << n);
                let mut union: BTreeSet<String> = BTreeSet::new();
                for s in &level {
                    union.extend(p.restrict(s).unwrap().nodes());
                }
                assert_eq!(union, p.nodes());
            }
        }
    }

    #[test]
    fn union_reassembles_split_cones() {
        let p = PTreeApprox::full(3);
        let left = p.restrict("0").unwrap();
        let right = p.restrict("1").unwrap();
        assert_eq!(left.union(&right).unwrap(), p);
        assert_eq!(
            left.union(&PTreeApprox::full(2)).err(),
            Some(PTreeError::DepthMismatch(3, 2))
        );
    }

    #[test]
    fn leq_n_checks_containment_and_frontier() {
        let p = PTreeApprox::full(3);
        let q = p.restrict("0").unwrap();
        // Restriction to one cone kills the root branching: frontiers differ.
        assert!(!q.leq_n(&p, 1).unwrap());
        assert!(q.is_restriction_of(&p));
        // Pruning below the level-1 frontier preserves it.
        let mut nodes = p.nodes();
        nodes.retain(|s| !s.starts_with("01"));
        let r = PTreeApprox::new(3, nodes).unwrap();
        assert!(r.leq_n(&p, 1).unwrap());
        assert!(!r.leq_n(&p, 2).unwrap());
    }

    #[test]
    fn fuse_refines_every_stage() {
        let p0 = PTreeApprox::full(4);
        // p1 ≤_1 p0: prune below the level-1 frontier.
        let mut n1 = p0.nodes();
        n1.retain(|s| !s.starts_with("01"));
        let p1 = PTreeApprox::new(4, n1).unwrap();
        // p2 ≤_2 p1: prune strictly below p1's level-2 frontier ("000" is a
        // frontier node there, so removing the cone at "0000" keeps it).
        let mut n2 = p1.nodes();
        n2.retain(|s| !s.starts_with("0000"));
        let p2 = PTreeApprox::new(4, n2).unwrap();
        let fused = fuse(&[p0.clone(), p1.clone(), p2.clone()]).unwrap();
        assert_eq!(fused, p2);
        assert!(fused.leq_n(&p0, 0).unwrap());
        assert!(fused.leq_n(&p1, 1).unwrap());
        assert!(fused.leq_n(&p2, 2).unwrap());
    }

    #[test]
    fn fuse_rejects_broken_chains() {
        let p0 = PTreeApprox::full(3);
        let q = p0.restrict("0").unwrap(); // not ≤_1: frontier changed
        assert_eq!(
            fuse(&[p0, q]).err(),
            Some(PTreeError::ChainViolation(1, 0))
        );
        assert_eq!(fuse(&[]).err(), Some(PTreeError::EmptyChain));
    }

    #[test]
    fn compatibility_is_shared_leaf_existence() {
        let p = PTreeApprox::full(3);
        let left = p.restrict("0").unwrap();
        let right = p.restrict("1").unwrap();
        assert!(!compatible(&left, &right).unwrap());
        assert!(compatible(&left, &p).unwrap());
        assert!(matches!(
            compatible(&left, &PTreeApprox::full(2)),
            Err(PTreeError::DepthMismatch(3, 2))
        ));
    }

    #[test]
    fn fusion_build_runs_cone_by_cone() {
        let p = PTreeApprox::full(6);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let built = fusion_build(&p, |cone, _| random_refinement(cone, 1, &mut rng), 3).unwrap();
        assert_eq!(built.sequence.len(), 4);
        for n in 1..built.sequence.len() {
            assert!(built.sequence[n]
                .leq_n(&built.sequence[n - 1], n)
                .unwrap());
        }
        for (n, stage) in built.sequence.iter().enumerate() {
            assert!(built.fused.leq_n(stage, n).unwrap());
        }
    }

    #[test]
    fn fusion_build_rejects_bad_refiners() {
        let p = PTreeApprox::full(4);
        // Returning the whole condition instead of a restriction of the cone.
        let err = fusion_build(&p, |_, _| PTreeApprox::full(4), 1);
        assert_eq!(err.err(), Some(PTreeError::RefinerOutput(0)));
    }

    #[test]
    fn random_conditions_are_valid_and_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let p = random_condition(8, 4, &mut a);
            let q = random_condition(8, 4, &mut b);
            assert_eq!(p, q);
            assert!(PTreeApprox::new(p.depth(), p.nodes()).is_ok());
        }
    }

    #[test]
    fn serde_round_trip_validates() {
        let p = PTreeApprox::full(2);
        let json = serde_json::to_string(&p).unwrap();
        let back: PTreeApprox = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"depth":2,"nodes":["","0"]}"#;
        assert!(serde_json::from_str::<PTreeApprox>(bad).is_err());
    }
}
