//! Two codings glue sets of naturals to game play.
//!
//! The first is a plain bijection: a finite set S of naturals is the number
//! Σ_{i∈S} 2^i, and a hidden bit string g is known through the trace of its
//! prefix codes z = {code of (g ∩ n)}. Any finite subset of a trace pins
//! down an initial segment of g exactly ([`recover_prefix`]), and subsets
//! that fit no single g are certified [`CodecError::Inconsistent`].
//!
//! The second runs the Gowers game to *leak* a code set through vectors:
//! player II replies with vectors whose oscillation classes walk through the
//! set in increasing order, and afterwards every nonzero vector of the
//! outcome span betrays which classes its decomposition touches
//! ([`pipeline_decode`]). There is no way to take a nonzero combination of
//! the replies without picking up class information.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::games::{
    catalog_player, encoder, new_game, run, GameError, GameKind, Transcript,
};
use crate::osc::asymptotic_class;
use crate::vecspace::{decompose, BlockSeq, VecError, Vector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CodecError {
    /// The indicator coding lives in a 64-bit word.
    #[error("set element {0} does not fit the 64-bit indicator code")]
    ElementTooLarge(u64),
    #[error("bit strings contain only '0' and '1', found {0:?}")]
    BadBit(char),
    /// The given code values cannot all be prefix cuts of one bit string.
    #[error("code values are not chain-compatible: {lo} and {hi} decode to incomparable cuts")]
    Inconsistent { lo: u64, hi: u64 },
    #[error("cannot play {rounds} rounds from {targets} code values")]
    RoundsExceedTargets { rounds: usize, targets: usize },
    #[error("encoding stopped at reply {round}: {name} had no move ({reason})")]
    PipelineExhausted {
        round: usize,
        name: String,
        reason: String,
    },
    #[error("the zero vector decodes to nothing")]
    ZeroVector,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Vec(#[from] VecError),
}

/// Indicator code of a finite set: Σ_{i∈S} 2^i. Inverse of [`decode_set`];
/// the empty set codes to 0.
pub fn encode_set(s: &BTreeSet<u64>) -> Result<u64, CodecError> {
    let mut code = 0u64;
    for &i in s {
        if i >= 64 {
            return Err(CodecError::ElementTooLarge(i));
        }
        code |= 1 << i;
    }
    Ok(code)
}

/// The set of binary digit positions of `k`. Inverse of [`encode_set`].
pub fn decode_set(k: u64) -> BTreeSet<u64> {
    let mut rest = k;
    let mut s = BTreeSet::new();
    while rest != 0 {
        s.insert(u64::from(rest.trailing_zeros()));
        rest &= rest - 1;
    }
    s
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>, CodecError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CodecError::BadBit(other)),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// A known prefix of a hidden bit string together with the codes of all its
/// cuts: one value per cut length, duplicates collapsing in the set. The
/// two fields stay in lockstep — deserialization recomputes and rejects
/// mismatches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZTrace {
    pub g_prefix: Vec<bool>,
    pub z_elements: BTreeSet<u64>,
}

/// Codes every cut of the prefix: `{encode_set({i < n : g[i]}) : n ≤ |g|}`.
pub fn z_of(g_prefix: &[bool]) -> Result<ZTrace, CodecError> {
    let mut z_elements = BTreeSet::new();
    let mut cut = BTreeSet::new();
    z_elements.insert(0);
    for (i, &bit) in g_prefix.iter().enumerate() {
        if bit {
            cut.insert(i as u64);
        }
        z_elements.insert(encode_set(&cut)?);
    }
    Ok(ZTrace {
        g_prefix: g_prefix.to_vec(),
        z_elements,
    })
}

#[derive(Serialize, Deserialize)]
struct ZTraceRepr {
    g_prefix: String,
    z_elements: BTreeSet<u64>,
}

impl Serialize for ZTrace {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ZTraceRepr {
            g_prefix: format_bits(&self.g_prefix),
            z_elements: self.z_elements.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ZTrace {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = ZTraceRepr::deserialize(de)?;
        let bits = parse_bits(&repr.g_prefix).map_err(serde::de::Error::custom)?;
        let trace = z_of(&bits).map_err(serde::de::Error::custom)?;
        if trace.z_elements != repr.z_elements {
            return Err(serde::de::Error::custom(
                "z_elements do not match the prefix they claim to code",
            ));
        }
        Ok(trace)
    }
}

/// Recovers the longest initial segment of the hidden bit string that a
/// finite subset of its trace determines: the decoded cuts must form a
/// chain growing upward, and the largest cut pins every bit up to its top
/// element. Nothing beyond that is guessed.
pub fn recover_prefix(w: &BTreeSet<u64>) -> Result<Vec<bool>, CodecError> {
    let cuts: Vec<(u64, BTreeSet<u64>)> =
        w.iter().map(|&v| (v, decode_set(v))).collect();
    // Value order is cut order: a strictly larger cut has a strictly
    // larger code. Each step may only add elements above everything known.
    for pair in cuts.windows(2) {
        let (lo_v, lo) = &pair[0];
        let (hi_v, hi) = &pair[1];
        let grows_upward = lo.is_subset(hi)
            && match lo.last() {
                Some(&top) => hi.difference(lo).all(|&e| e > top),
                None => true,
            };
        if !grows_upward {
            return Err(CodecError::Inconsistent {
                lo: *lo_v,
                hi: *hi_v,
            });
        }
    }
    let Some((_, largest)) = cuts.last() else {
        return Ok(Vec::new());
    };
    let Some(&top) = largest.last() else {
        return Ok(Vec::new());
    };
    Ok((0..=top).map(|i| largest.contains(&i)).collect())
}

/// A finished encoding run: II's replies and the full move record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineRun {
    pub outcome: BlockSeq,
    pub transcript: Transcript,
}

/// Plays the code set through the Gowers game: II replies with the
/// canonically first vector of class `z[k]` at round `k`, against a fixed
/// catalog of block moves for I. Exhaustion (no vector of the target class
/// in reach) is an error naming the failing round.
pub fn pipeline_encode_play(
    ground: &BlockSeq,
    z: &[u32],
    catalog: &[BlockSeq],
    rounds: usize,
    bound: usize,
) -> Result<PipelineRun, CodecError> {
    if rounds > z.len() {
        return Err(CodecError::RoundsExceedTargets {
            rounds,
            targets: z.len(),
        });
    }
    let mut enc = encoder(z.to_vec(), bound)?;
    let mut cat = catalog_player(catalog.to_vec());
    let start = new_game(
        GameKind::Gowers,
        ground.clone(),
        BlockSeq::empty(ground.field()),
        None,
    )?;
    let out = run(&start, &mut cat, &mut enc, rounds)?;
    if let Some((name, err)) = out.exhaustion {
        let round = match err {
            crate::games::StrategyError::Exhausted { round, .. }
            | crate::games::StrategyError::CatalogExhausted { round } => round,
        };
        return Err(CodecError::PipelineExhausted {
            round,
            name,
            reason: err.to_string(),
        });
    }
    debug_assert!(out
        .outcome
        .iter()
        .zip(z)
        .all(|(y, &t)| asymptotic_class(y).expect("replies are nonzero") == t));
    Ok(PipelineRun {
        outcome: out.outcome,
        transcript: out.transcript,
    })
}

/// What a span vector gives away: the classes of the outcome blocks its
/// decomposition actually uses. For encoder outcomes block `k` has class
/// `z[k]`, so this reads off `{z[k] : c_k ≠ 0}` — and class membership is
/// scalar-invariant, so rescaling `v` leaks the same set.
pub fn pipeline_decode(v: &Vector, outcome: &BlockSeq) -> Result<BTreeSet<u32>, CodecError> {
    if v.is_zero() {
        return Err(CodecError::ZeroVector);
    }
    let coeffs = decompose(v, outcome)?;
    coeffs
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(i, _)| {
            Ok(asymptotic_class(&outcome.blocks()[i]).expect("blocks are nonzero"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vecspace::FieldSpec;

    fn set(elems: &[u64]) -> BTreeSet<u64> {
        elems.iter().copied().collect()
    }

    fn f3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    #[test]
    fn indicator_code_on_known_sets() {
        assert_eq!(encode_set(&set(&[])).unwrap(), 0);
        assert_eq!(encode_set(&set(&[0, 2])).unwrap(), 5);
        assert_eq!(decode_set(0), set(&[]));
        assert_eq!(decode_set(5), set(&[0, 2]));
        for s in [set(&[]), set(&[3]), set(&[0, 1, 4, 63])] {
            assert_eq!(decode_set(encode_set(&s).unwrap()), s);
        }
        assert_eq!(
            encode_set(&set(&[64])),
            Err(CodecError::ElementTooLarge(64))
        );
    }

    #[test]
    fn bit_strings_parse_and_print() {
        assert_eq!(parse_bits("101").unwrap(), vec![true, false, true]);
        assert_eq!(format_bits(&[true, false, true]), "101");
        assert_eq!(parse_bits("").unwrap(), Vec::<bool>::new());
        assert_eq!(parse_bits("10x"), Err(CodecError::BadBit('x')));
    }

    #[test]
    fn trace_of_known_prefixes() {
        // 101: cuts ∅, {0}, {0}, {0,2} code to 0, 1, 1, 5.
        let trace = z_of(&parse_bits("101").unwrap()).unwrap();
        assert_eq!(trace.z_elements, set(&[0, 1, 5]));
        let zeros = z_of(&parse_bits("0000").unwrap()).unwrap();
        assert_eq!(zeros.z_elements, set(&[0]));
        for g in ["", "1", "0110", "111111"] {
            let bits = parse_bits(g).unwrap();
            let t = z_of(&bits).unwrap();
            assert!(t.z_elements.len() <= bits.len() + 1);
            assert!(t.z_elements.contains(&0));
        }
    }

    #[test]
    fn recovery_of_known_subsets() {
        assert_eq!(recover_prefix(&set(&[5])).unwrap(), parse_bits("101").unwrap());
        assert_eq!(recover_prefix(&set(&[])).unwrap(), Vec::<bool>::new());
        // The code 0 witnesses only the empty cut and determines nothing.
        assert_eq!(recover_prefix(&set(&[0])).unwrap(), Vec::<bool>::new());
        assert_eq!(
            recover_prefix(&set(&[1, 5])).unwrap(),
            parse_bits("101").unwrap()
        );
        // {0} and {1} are incomparable cuts.
        assert_eq!(
            recover_prefix(&set(&[1, 2])),
            Err(CodecError::Inconsistent { lo: 1, hi: 2 })
        );
        // {2} ⊆ {0,2} but the new element 0 sits below the old top.
        assert_eq!(
            recover_prefix(&set(&[4, 5])),
            Err(CodecError::Inconsistent { lo: 4, hi: 5 })
        );
    }

    #[test]
    fn every_trace_subset_recovers_a_true_prefix() {
        let g = parse_bits("1011").unwrap();
        let trace = z_of(&g).unwrap();
        assert_eq!(trace.z_elements, set(&[0, 1, 5, 13]));
        let values: Vec<u64> = trace.z_elements.iter().copied().collect();
        for mask in 0..1u32 << values.len() {
            let w: BTreeSet<u64> = values
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let prefix = recover_prefix(&w).unwrap();
            assert!(prefix.len() <= g.len());
            assert_eq!(prefix, g[..prefix.len()]);
        }
    }

    #[test]
    fn trace_serde_checks_its_own_invariant() {
        let trace = z_of(&parse_bits("101").unwrap()).unwrap();
        let json = serde_json::to_string(&trace).unwrap();
        assert_eq!(json, r#"{"g_prefix":"101","z_elements":[0,1,5]}"#);
        let back: ZTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trace);
        let tampered = r#"{"g_prefix":"101","z_elements":[0,1,6]}"#;
        assert!(serde_json::from_str::<ZTrace>(tampered).is_err());
    }

    fn basis_catalog(copies: usize) -> Vec<BlockSeq> {
        vec![BlockSeq::from_basis(f3(), 0..6); copies]
    }

    #[test]
    fn encoding_play_realizes_the_code_classes() {
        let ground = BlockSeq::from_basis(f3(), 0..6);
        let run = pipeline_encode_play(&ground, &[0, 1], &basis_catalog(2), 2, 64).unwrap();
        assert_eq!(run.outcome.len(), 2);
        let classes: Vec<u32> = run
            .outcome
            .iter()
            .map(|y| asymptotic_class(y).unwrap())
            .collect();
        assert_eq!(classes, vec![0, 1]);
    }

    #[test]
    fn zero_rounds_play_nothing() {
        let ground = BlockSeq::from_basis(f3(), 0..6);
        let run = pipeline_encode_play(&ground, &[0, 1], &basis_catalog(2), 0, 64).unwrap();
        assert!(run.outcome.is_empty());
        assert!(run.transcript.moves.is_empty());
    }

    #[test]
    fn unreachable_classes_stop_the_pipeline_at_their_round() {
        let ground = BlockSeq::from_basis(f3(), 0..6);
        let err =
            pipeline_encode_play(&ground, &[0, 9], &basis_catalog(2), 2, 64).unwrap_err();
        assert!(
            matches!(err, CodecError::PipelineExhausted { round: 1, .. }),
            "got {err:?}"
        );
        let err = pipeline_encode_play(&ground, &[0], &basis_catalog(1), 2, 64).unwrap_err();
        assert_eq!(
            err,
            CodecError::RoundsExceedTargets {
                rounds: 2,
                targets: 1
            }
        );
    }

    #[test]
    fn span_vectors_leak_their_summand_classes() {
        let ground = BlockSeq::from_basis(f3(), 0..6);
        let run = pipeline_encode_play(&ground, &[0, 1], &basis_catalog(2), 2, 64).unwrap();
        let y0 = &run.outcome.blocks()[0];
        let y1 = &run.outcome.blocks()[1];
        assert_eq!(pipeline_decode(y0, &run.outcome).unwrap(), [0].into());
        let mix = y0.add_scaled(2, y1).unwrap();
        assert_eq!(pipeline_decode(&mix, &run.outcome).unwrap(), [0, 1].into());
        assert_eq!(
            pipeline_decode(&y1.scaled(2), &run.outcome).unwrap(),
            [1].into()
        );
        assert_eq!(
            pipeline_decode(&Vector::zero(f3()), &run.outcome),
            Err(CodecError::ZeroVector)
        );
    }

    #[test]
    fn decoding_is_scalar_invariant() {
        let ground = BlockSeq::from_basis(f3(), 0..6);
        let run = pipeline_encode_play(&ground, &[0, 1], &basis_catalog(2), 2, 64).unwrap();
        let y0 = &run.outcome.blocks()[0];
        let y1 = &run.outcome.blocks()[1];
        let v = y0.add_scaled(1, y1).unwrap();
        let leaked = pipeline_decode(&v, &run.outcome).unwrap();
        for c in f3().nonzero_elements() {
            assert_eq!(pipeline_decode(&v.scaled(c), &run.outcome).unwrap(), leaked);
        }
    }
}
