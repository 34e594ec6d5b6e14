//! Dichotomy searches over linear maps and vector-set oracles.
//!
//! Two finite searches, each resolving a family of questions about what a
//! block sequence's span can look like:
//!
//! * [`kernel_dichotomy_search`]: given finitely many linear maps, scan the
//!   suffixes of a ground sequence for one on which every map vanishes
//!   outright, or every map is injective. The witness returned is the first
//!   stretch of the first suffix where a horn holds; `NeitherFound` is a
//!   legitimate verdict at finite scale.
//! * [`asymptotic_below_search`]: given membership oracles for sets of
//!   vectors, look for a block subsequence whose span avoids every set, or
//!   certify that every subsequence of the probe length meets every set.
//!
//! All searches run in canonical enumeration order, so verdicts are
//! deterministic, and every verdict re-verifies from its recorded witness.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::osc::asymptotic_class;
use crate::vecspace::{enumerate_span, BlockSeq, FieldSpec, VecError, Vector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpError {
    #[error("matrix rows must all have {expected} entries; row {row} has {found}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("vector support reaches {support}, outside the map domain 0..{dim}")]
    DomainExceeded { support: usize, dim: usize },
    #[error("maps, oracles, and ground must share one field")]
    FieldMismatch,
    #[error("probe length {probe_len} exceeds the {blocks} ground blocks")]
    ProbeTooLong { probe_len: usize, blocks: usize },
    #[error(transparent)]
    Vec(#[from] VecError),
}

/// A linear map out of the span of the first `domain_dim` basis vectors,
/// stored as a matrix: row `i` lists the coefficients the domain basis
/// contributes to output coordinate `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinMap {
    field: FieldSpec,
    rows: Vec<Vec<u64>>,
}

impl LinMap {
    pub fn new(field: FieldSpec, rows: Vec<Vec<u64>>) -> Result<Self, ExpError> {
        let width = rows.first().map_or(0, Vec::len);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != width {
                return Err(ExpError::RaggedRows {
                    row,
                    expected: width,
                    found: r.len(),
                });
            }
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|e| field.reduce(e)).collect())
            .collect();
        Ok(LinMap { field, rows })
    }

    /// The map sending everything to zero.
    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        LinMap {
            field,
            rows: vec![vec![0; dim]; dim],
        }
    }

    /// The identity on the truncated domain.
    pub fn identity(field: FieldSpec, dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| u64::from(i == j)).collect())
            .collect();
        LinMap { field, rows }
    }

    /// The identity with the given coordinates sent to zero.
    pub fn projection_killing(field: FieldSpec, dim: usize, killed: &[usize]) -> Self {
        let dead: BTreeSet<usize> = killed.iter().copied().collect();
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| u64::from(i == j && !dead.contains(&i)))
                    .collect()
            })
            .collect();
        LinMap { field, rows }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn domain_dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector, ExpError> {
        if v.field() != self.field {
            return Err(ExpError::FieldMismatch);
        }
        if let Some(hi) = v.max_support() {
            if hi >= self.domain_dim() {
                return Err(ExpError::DomainExceeded {
                    support: hi,
                    dim: self.domain_dim(),
                });
            }
        }
        let coeffs = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(0, |acc, (j, &a)| self.field.add(acc, self.field.mul(a, v.coeff(j))))
            })
            .collect::<Vec<u64>>();
        Ok(Vector::from_coeffs(self.field, coeffs))
    }

    pub fn kills(&self, v: &Vector) -> Result<bool, ExpError> {
        Ok(self.apply(v)?.is_zero())
    }
}

#[derive(Serialize, Deserialize)]
struct LinMapRepr {
    p: u64,
    rows: Vec<Vec<u64>>,
}

impl Serialize for LinMap {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        LinMapRepr {
            p: self.field.p(),
            rows: self.rows.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for LinMap {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = LinMapRepr::deserialize(de)?;
        let field = FieldSpec::new(repr.p).map_err(serde::de::Error::custom)?;
        LinMap::new(field, repr.rows).map_err(serde::de::Error::custom)
    }
}

/// Row rank of a matrix over the field, by Gaussian elimination.
pub fn rank(field: FieldSpec, rows: &[Vec<u64>]) -> usize {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut padded: Vec<u64> = r.iter().map(|&e| field.reduce(e)).collect();
            padded.resize(width, 0);
            padded
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(src) = (pivot_row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pivot_row, src);
        let inv = field.inv(m[pivot_row][col]);
        for c in col..width {
            m[pivot_row][c] = field.mul(m[pivot_row][c], inv);
        }
        for r in 0..m.len() {
            if r != pivot_row && m[r][col] != 0 {
                let factor = m[r][col];
                for c in col..width {
                    let sub = field.mul(factor, m[pivot_row][c]);
                    m[r][c] = field.sub(m[r][c], sub);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    pivot_row
}

/// Injectivity on the span, decided by rank: the map is injective there
/// exactly when the block images stay independent.
pub fn injective_on_span_rank(map: &LinMap, x: &BlockSeq) -> Result<bool, ExpError> {
    if x.field() != map.field() {
        return Err(ExpError::FieldMismatch);
    }
    let images = x
        .iter()
        .map(|b| map.apply(b).map(|img| img.coeffs().to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rank(map.field(), &images) == x.len())
}

/// Injectivity on the span, decided the slow way: no nonzero span vector
/// may be killed. Cross-checks the rank route.
pub fn injective_on_span_exhaustive(
    map: &LinMap,
    x: &BlockSeq,
    bound: usize,
) -> Result<bool, ExpError> {
    if x.field() != map.field() {
        return Err(ExpError::FieldMismatch);
    }
    for v in enumerate_span(x, bound)? {
        if map.kills(&v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn injective_for_all(maps: &[LinMap], x: &BlockSeq, bound: usize) -> Result<bool, ExpError> {
    for map in maps {
        let by_rank = injective_on_span_rank(map, x)?;
        if cfg!(debug_assertions) {
            debug_assert_eq!(
                by_rank,
                injective_on_span_exhaustive(map, x, bound)?,
                "rank and exhaustive injectivity checks disagree"
            );
        }
        if !by_rank {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of [`kernel_dichotomy_search`]: the offset locates the suffix of
/// the ground where the horn holds, and the witness is its first stretch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum KernelVerdict {
    /// Every map vanishes on the whole suffix: the witness spans kernel.
    Kernel { witness: BlockSeq, offset: usize },
    /// Every map is injective on the whole suffix's span.
    Injective { witness: BlockSeq, offset: usize },
    NeitherFound { offsets_searched: usize },
}

/// Scans the suffixes of the ground, earliest first, for one where the
/// maps either all vanish or are all injective — vanish takes priority.
/// The witness is the suffix's first `target_len` blocks, but both horns
/// are checked against the whole suffix, the finite stand-in for a tail.
pub fn kernel_dichotomy_search(
    maps: &[LinMap],
    ground: &BlockSeq,
    target_len: usize,
    bound: usize,
) -> Result<KernelVerdict, ExpError> {
    if maps.iter().any(|m| m.field() != ground.field()) {
        return Err(ExpError::FieldMismatch);
    }
    let mut offsets_searched = 0;
    for offset in 0..=ground.len().saturating_sub(target_len.max(1)) {
        let suffix = ground.suffix(offset);
        if suffix.len() < target_len {
            break;
        }
        offsets_searched += 1;
        let witness = BlockSeq::new(
            ground.field(),
            suffix.blocks()[..target_len].to_vec(),
        )?;
        let mut all_killed = true;
        for map in maps {
            for b in suffix.iter() {
                if !map.kills(b)? {
                    all_killed = false;
                    break;
                }
            }
            if !all_killed {
                break;
            }
        }
        if all_killed {
            return Ok(KernelVerdict::Kernel { witness, offset });
        }
        if injective_for_all(maps, &suffix, bound)? {
            return Ok(KernelVerdict::Injective { witness, offset });
        }
    }
    Ok(KernelVerdict::NeitherFound { offsets_searched })
}

/// Re-checks a kernel witness: every map kills every block.
pub fn verify_kernel_witness(maps: &[LinMap], witness: &BlockSeq) -> Result<bool, ExpError> {
    for map in maps {
        for b in witness.iter() {
            if !map.kills(b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Re-checks an injectivity witness by exhausting its span: no map may
/// kill a nonzero span vector.
pub fn verify_injective_witness(
    maps: &[LinMap],
    witness: &BlockSeq,
    bound: usize,
) -> Result<bool, ExpError> {
    for map in maps {
        if !injective_on_span_exhaustive(map, witness, bound)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A named membership predicate on nonzero vectors.
#[derive(Clone)]
pub struct VecSetOracle {
    name: String,
    pred: Arc<dyn Fn(&Vector) -> bool + Send + Sync>,
}

impl VecSetOracle {
    pub fn new(
        name: impl Into<String>,
        pred: impl Fn(&Vector) -> bool + Send + Sync + 'static,
    ) -> Self {
        VecSetOracle {
            name: name.into(),
            pred: Arc::new(pred),
        }
    }

    /// The empty set of vectors.
    pub fn empty() -> Self {
        VecSetOracle::new("empty", |_| false)
    }

    /// All nonzero vectors.
    pub fn all_nonzero() -> Self {
        VecSetOracle::new("all-nonzero", |v: &Vector| !v.is_zero())
    }

    /// The vectors of one oscillation class.
    pub fn osc_class(class: u32) -> Self {
        VecSetOracle::new(format!("class-{class}"), move |v: &Vector| {
            asymptotic_class(v).map_or(false, |c| c == class)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn admits(&self, v: &Vector) -> bool {
        (self.pred)(v)
    }
}

impl std::fmt::Debug for VecSetOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VecSetOracle")
            .field("name", &self.name)
            .finish()
    }
}

/// Outcome of [`asymptotic_below_search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AsymptoticVerdict {
    /// This subsequence's span avoids every oracle set.
    AvoidsAll { witness: BlockSeq },
    /// Every probe-length subsequence's span meets every oracle set.
    MeetsAll { candidates: usize },
    /// No subsequence avoids everything, yet this one avoids the named
    /// set, so neither horn holds at this probe length.
    Neither {
        counterexample: BlockSeq,
        avoided: String,
    },
}

fn avoided_oracles<'a>(
    candidate: &BlockSeq,
    oracles: &'a [VecSetOracle],
    bound: usize,
) -> Result<Vec<&'a VecSetOracle>, ExpError> {
    let mut avoided: Vec<&VecSetOracle> = oracles.iter().collect();
    for v in enumerate_span(candidate, bound)? {
        avoided.retain(|o| !o.admits(&v));
        if avoided.is_empty() {
            break;
        }
    }
    Ok(avoided)
}

/// Runs over every `probe_len`-block subsequence of the ground in
/// canonical (index-lexicographic) order, asking whether its span avoids
/// all the oracle sets, meets all of them, or neither. The first full
/// avoider wins; otherwise the certificate or the first partial avoider
/// is reported.
pub fn asymptotic_below_search(
    oracles: &[VecSetOracle],
    ground: &BlockSeq,
    probe_len: usize,
    bound: usize,
) -> Result<AsymptoticVerdict, ExpError> {
    if probe_len > ground.len() {
        return Err(ExpError::ProbeTooLong {
            probe_len,
            blocks: ground.len(),
        });
    }
    let mut candidates = 0;
    let mut partial: Option<(BlockSeq, String)> = None;
    let mut indices: Vec<usize> = (0..probe_len).collect();
    loop {
        let candidate = BlockSeq::new(
            ground.field(),
            indices.iter().map(|&i| ground.blocks()[i].clone()).collect(),
        )?;
        candidates += 1;
        let avoided = avoided_oracles(&candidate, oracles, bound)?;
        if avoided.len() == oracles.len() {
            return Ok(AsymptoticVerdict::AvoidsAll { witness: candidate });
        }
        if partial.is_none() {
            if let Some(o) = avoided.first() {
                partial = Some((candidate, o.name().to_string()));
            }
        }
        // Advance to the next combination of ground indices.
        let mut i = probe_len;
        loop {
            if i == 0 {
                match partial {
                    Some((counterexample, avoided)) => {
                        return Ok(AsymptoticVerdict::Neither {
                            counterexample,
                            avoided,
                        })
                    }
                    None => return Ok(AsymptoticVerdict::MeetsAll { candidates }),
                }
            }
            i -= 1;
            if indices[i] < ground.len() - (probe_len - i) {
                indices[i] += 1;
                for j in i + 1..probe_len {
                    indices[j] = indices[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Re-checks an avoidance witness by exhausting its span against every
/// oracle.
pub fn verify_avoidance_witness(
    oracles: &[VecSetOracle],
    witness: &BlockSeq,
    bound: usize,
) -> Result<bool, ExpError> {
    Ok(avoided_oracles(witness, oracles, bound)?.len() == oracles.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    fn vec3(c: &[u64]) -> Vector {
        Vector::from_coeffs(f3(), c.to_vec())
    }

    #[test]
    fn maps_apply_linearly() {
        let t = LinMap::new(f3(), vec![vec![1, 2], vec![0, 1]]).unwrap();
        // T(e0) = e0, T(e1) = 2e0 + e1.
        assert_eq!(t.apply(&Vector::basis(f3(), 0)).unwrap(), vec3(&[1]));
        assert_eq!(t.apply(&Vector::basis(f3(), 1)).unwrap(), vec3(&[2, 1]));
        let v = vec3(&[1, 1]);
        let sum = t
            .apply(&Vector::basis(f3(), 0))
            .unwrap()
            .add(&t.apply(&Vector::basis(f3(), 1)).unwrap())
            .unwrap();
        assert_eq!(t.apply(&v).unwrap(), sum);
        assert_eq!(
            t.apply(&Vector::basis(f3(), 5)),
            Err(ExpError::DomainExceeded { support: 5, dim: 2 })
        );
    }

    #[test]
    fn map_construction_rejects_ragged_rows() {
        assert_eq!(
            LinMap::new(f3(), vec![vec![1, 2], vec![1]]).err(),
            Some(ExpError::RaggedRows {
                row: 1,
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn map_serde_uses_the_matrix_shape() {
        let t = LinMap::new(f3(), vec![vec![1, 2], vec![0, 1]]).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"p":3,"rows":[[1,2],[0,1]]}"#);
        let back: LinMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<LinMap>(r#"{"p":4,"rows":[[1]]}"#).is_err());
        assert!(serde_json::from_str::<LinMap>(r#"{"p":3,"rows":[[1],[1,2]]}"#).is_err());
    }

    #[test]
    fn rank_of_known_matrices() {
        assert_eq!(rank(f3(), &[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(rank(f3(), &[vec![1, 2], vec![2, 4 % 3]]), 1);
        assert_eq!(rank(f3(), &[vec![0, 0]]), 0);
        assert_eq!(rank(f3(), &[]), 0);
        // Rows 1,1,1 / 0,1,2 / 1,2,0: the third is their sum mod 3.
        assert_eq!(
            rank(f3(), &[vec![1, 1, 1], vec![0, 1, 2], vec![1, 2, 0]]),
            2
        );
    }

    #[test]
    fn injectivity_routes_agree() {
        let ground = BlockSeq::from_basis(f3(), 0..4);
        let maps = [
            LinMap::identity(f3(), 4),
            LinMap::zero(f3(), 4),
            LinMap::projection_killing(f3(), 4, &[1]),
            LinMap::new(f3(), vec![vec![1, 1, 1, 1]; 4]).unwrap(),
        ];
        for map in &maps {
            assert_eq!(
                injective_on_span_rank(map, &ground).unwrap(),
                injective_on_span_exhaustive(map, &ground, 16).unwrap(),
            );
        }
        assert!(injective_on_span_rank(&maps[0], &ground).unwrap());
        assert!(!injective_on_span_rank(&maps[1], &ground).unwrap());
        assert!(!injective_on_span_rank(&maps[2], &ground).unwrap());
    }

    #[test]
    fn zero_maps_yield_the_kernel_horn_immediately() {
        let ground = BlockSeq::from_basis(f3(), 0..6);
        let verdict =
            kernel_dichotomy_search(&[LinMap::zero(f3(), 6)], &ground, 3, 16).unwrap();
        let KernelVerdict::Kernel { witness, offset } = verdict else {
            panic!("zero map must vanish everywhere, got {verdict:?}");
        };
        assert_eq!(offset, 0);
        assert_eq!(witness, BlockSeq::from_basis(f3(), 0..3));
        assert!(verify_kernel_witness(&[LinMap::zero(f3(), 6)], &witness).unwrap());
    }

    #[test]
    fn identity_yields_the_injective_horn_immediately() {
        let ground = BlockSeq::from_basis(f3(), 0..6);
        let maps = [LinMap::identity(f3(), 6)];
        let verdict = kernel_dichotomy_search(&maps, &ground, 3, 16).unwrap();
        let KernelVerdict::Injective { witness, offset } = verdict else {
            panic!("identity is injective, got {verdict:?}");
        };
        assert_eq!(offset, 0);
        assert_eq!(witness, BlockSeq::from_basis(f3(), 0..3));
        assert!(verify_injective_witness(&maps, &witness, 16).unwrap());
    }

    #[test]
    fn projections_resolve_on_the_live_tail() {
        let ground = BlockSeq::from_basis(f3(), 0..10);
        let maps = [LinMap::projection_killing(f3(), 10, &[0, 1, 2, 3])];
        let verdict = kernel_dichotomy_search(&maps, &ground, 2, 16).unwrap();
        let KernelVerdict::Injective { witness, offset } = verdict else {
            panic!("the projection is injective past its kernel, got {verdict:?}");
        };
        assert_eq!(offset, 4);
        assert_eq!(witness, BlockSeq::from_basis(f3(), 4..6));
        assert!(verify_injective_witness(&maps, &witness, 16).unwrap());
    }

    #[test]
    fn incompatible_map_families_find_neither_horn() {
        // One map kills exactly the front, the other exactly the back: no
        // suffix is uniformly killed or uniformly safe.
        let ground = BlockSeq::from_basis(f3(), 0..4);
        let maps = [
            LinMap::projection_killing(f3(), 4, &[0, 1]),
            LinMap::projection_killing(f3(), 4, &[2, 3]),
        ];
        let verdict = kernel_dichotomy_search(&maps, &ground, 2, 16).unwrap();
        assert_eq!(
            verdict,
            KernelVerdict::NeitherFound {
                offsets_searched: 3
            }
        );
    }

    #[test]
    fn search_rejects_foreign_fields() {
        let ground = BlockSeq::from_basis(f3(), 0..4);
        let f5 = FieldSpec::new(5).unwrap();
        assert_eq!(
            kernel_dichotomy_search(&[LinMap::zero(f5, 4)], &ground, 2, 16).err(),
            Some(ExpError::FieldMismatch)
        );
    }

    #[test]
    fn empty_oracle_sets_are_avoided_trivially() {
        let ground = BlockSeq::from_basis(f3(), 0..6);
        let verdict =
            asymptotic_below_search(&[VecSetOracle::empty()], &ground, 3, 16).unwrap();
        let AsymptoticVerdict::AvoidsAll { witness } = verdict else {
            panic!("nothing meets the empty set, got {verdict:?}");
        };
        assert_eq!(witness, BlockSeq::from_basis(f3(), 0..3));
        assert!(verify_avoidance_witness(&[VecSetOracle::empty()], &witness, 16).unwrap());
    }

    #[test]
    fn the_set_of_all_vectors_is_always_met() {
        let ground = BlockSeq::from_basis(f3(), 0..6);
        let verdict =
            asymptotic_below_search(&[VecSetOracle::all_nonzero()], &ground, 3, 16).unwrap();
        assert_eq!(verdict, AsymptoticVerdict::MeetsAll { candidates: 20 });
    }

    #[test]
    fn low_oscillation_classes_are_met_by_every_probe() {
        // Classes 0 and 1 both appear in the span of any 4 of 8 basis
        // blocks: singletons oscillate once, scaled pairs twice.
        let ground = BlockSeq::from_basis(f3(), 0..8);
        let oracles = [VecSetOracle::osc_class(0), VecSetOracle::osc_class(1)];
        let verdict = asymptotic_below_search(&oracles, &ground, 4, 16).unwrap();
        assert_eq!(verdict, AsymptoticVerdict::MeetsAll { candidates: 70 });
    }

    #[test]
    fn mixed_oracles_report_the_avoided_set() {
        // Class 3 needs oscillation 7, beyond two blocks; class 1 is
        // everywhere. Nothing avoids both, everything avoids class 3.
        let ground = BlockSeq::from_basis(f3(), 0..4);
        let oracles = [VecSetOracle::osc_class(1), VecSetOracle::osc_class(3)];
        let verdict = asymptotic_below_search(&oracles, &ground, 2, 16).unwrap();
        let AsymptoticVerdict::Neither {
            counterexample,
            avoided,
        } = verdict
        else {
            panic!("neither horn can hold, got {verdict:?}");
        };
        assert_eq!(avoided, "class-3");
        assert_eq!(counterexample, BlockSeq::from_basis(f3(), 0..2));
    }

    #[test]
    fn probe_lengths_beyond_the_ground_are_rejected() {
        let ground = BlockSeq::from_basis(f3(), 0..3);
        assert_eq!(
            asymptotic_below_search(&[VecSetOracle::empty()], &ground, 4, 16).err(),
            Some(ExpError::ProbeTooLong {
                probe_len: 4,
                blocks: 3
            })
        );
    }
}
