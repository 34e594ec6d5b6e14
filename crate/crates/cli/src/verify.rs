//! Verification suites behind `blocklab verify`.
//!
//! Each suite re-checks a slab of the library against independent
//! arithmetic: the partition by congruence, oscillation by recount,
//! games by transcript replay, trees by frontier counting, codings by
//! brute-force realizability, and experiment verdicts by exhaustive
//! re-verification. All randomness flows from the configured seed.

use std::collections::BTreeSet;

use anyhow::{Context, Result};
use blocklab::codec::{
    encode_set, format_bits, pipeline_decode, pipeline_encode_play, recover_prefix, z_of, ZTrace,
};
use blocklab::games::{
    catalog_player, class_chaser, new_game, replay, run, simulate_gowers_via_finitized,
    tail_player, GameKind, Move, Side, Transcript, TranscriptMove,
};
use blocklab::osc::{asymptotic_class, find_in_class, osc, partition_class};
use blocklab::experiments::{
    asymptotic_below_search, kernel_dichotomy_search, verify_avoidance_witness,
    verify_injective_witness, verify_kernel_witness, AsymptoticVerdict, KernelVerdict, LinMap,
    VecSetOracle,
};
use blocklab::ptree::{
    compatible, fuse, fusion_build, random_condition, random_refinement, PTreeApprox, PTreeError,
};
use blocklab::vecspace::{decompose, enumerate_span, BlockSeq, FieldSpec, Vector};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calibrate::{self, for_each_combination, ThresholdEntry, Thresholds};
use crate::config::{ConfigEcho, RunConfig};
use crate::report::{self, CheckResult, SCHEMA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Partition,
    Osc,
    Games,
    Ptree,
    Codec,
    Experiments,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Partition => "partition",
            Suite::Osc => "osc",
            Suite::Games => "games",
            Suite::Ptree => "ptree",
            Suite::Codec => "codec",
            Suite::Experiments => "experiments",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub command: &'static str,
    pub suite: &'static str,
    pub config: ConfigEcho,
    /// Where class thresholds came from, when a suite consulted them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<&'static str>,
    pub checks: Vec<CheckResult>,
    pub failures: usize,
}

/// `blocklab verify <suite>`: run the checks, print the report, and exit
/// 0 or 1 depending on whether anything failed.
pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<i32> {
    let report = run_suite(suite, cfg)?;
    report::emit(&report, cfg.out.as_deref())?;
    Ok(report::exit_for(report.failures))
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.field()?;
    let needs_calibration = matches!(suite, Suite::Osc | Suite::Games | Suite::Codec | Suite::All);
    let calibration = if needs_calibration {
        Some(calibrate::load_or_compute(cfg)?)
    } else {
        None
    };
    let thresholds = calibration.as_ref().map(|(t, _)| t);
    let mut checks = Vec::new();
    if matches!(suite, Suite::Partition | Suite::All) {
        checks.extend(suite_partition()?);
    }
    if matches!(suite, Suite::Osc | Suite::All) {
        checks.extend(suite_osc(cfg, thresholds.expect("loaded above"))?);
    }
    if matches!(suite, Suite::Games | Suite::All) {
        checks.extend(suite_games(cfg, thresholds.expect("loaded above"))?);
    }
    if matches!(suite, Suite::Ptree | Suite::All) {
        checks.extend(suite_ptree(cfg)?);
    }
    if matches!(suite, Suite::Codec | Suite::All) {
        checks.extend(suite_codec(cfg, thresholds.expect("loaded above"))?);
    }
    if matches!(suite, Suite::Experiments | Suite::All) {
        checks.extend(suite_experiments(cfg)?);
    }
    let failures = checks.iter().map(|c| c.failures).sum();
    Ok(VerifyReport {
        schema: SCHEMA,
        command: "verify",
        suite: suite.name(),
        config: cfg.echo(),
        calibration: calibration.as_ref().map(|(_, source)| *source),
        checks,
        failures,
    })
}

// ---------------------------------------------------------------- partition

const PARTITION_LIMIT: u64 = 1 << 16;

fn suite_partition() -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    // Totality: every number sits in exactly one class, and it is the one
    // the congruence k = 2^n - 1 (mod 2^{n+1}) picks out.
    let mut failures = 0usize;
    for k in 0..PARTITION_LIMIT {
        let matching: Vec<u32> = (0..=16u32)
            .filter(|&n| k % (1u64 << (n + 1)) == (1u64 << n) - 1)
            .collect();
        if matching.len() != 1 || matching[0] != partition_class(k) {
            failures += 1;
        }
    }
    checks.push(CheckResult::new(
        "every-number-in-exactly-one-class",
        PARTITION_LIMIT as usize,
        failures,
    ));

    // Interval hitting: class n meets every window of length 2^{n+1}.
    let mut failures = 0usize;
    let mut samples = 0usize;
    for n in 0..=10u32 {
        samples += 1;
        let period = 1u64 << (n + 1);
        let members: Vec<u64> = (0..PARTITION_LIMIT).filter(|&k| partition_class(k) == n).collect();
        let spaced = members.windows(2).all(|w| w[1] - w[0] == period);
        let anchored = members.first().is_some_and(|&first| first < period);
        let covered = members.last().is_some_and(|&last| last + period >= PARTITION_LIMIT);
        if !(spaced && anchored && covered) {
            failures += 1;
        }
    }
    checks.push(
        CheckResult::new("class-n-meets-every-width-2^{n+1}-window", samples, failures)
            .with_note("classes 0..=10 against all windows below 2^16"),
    );

    Ok(checks)
}

// ---------------------------------------------------------------------- osc

fn random_nonzero_vector(field: FieldSpec, dim: usize, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let len = rng.random_range(1..=dim.max(2));
        let coeffs: Vec<u64> = (0..len).map(|_| rng.random_range(0..field.p())).collect();
        let v = Vector::from_coeffs(field, coeffs);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Calibration rows for the configured field, computed in process when the
/// grid does not cover it.
fn entries_for(cfg: &RunConfig, thresholds: &Thresholds) -> Result<Vec<ThresholdEntry>> {
    let rows: Vec<ThresholdEntry> = thresholds
        .entries
        .iter()
        .filter(|e| e.p == cfg.p)
        .cloned()
        .collect();
    if !rows.is_empty() {
        return Ok(rows);
    }
    let field = cfg.field()?;
    let dim = cfg.dim.min(8);
    let mut out = Vec::new();
    for blocks in 1..=dim.min(4) {
        out.push(calibrate::entry_for(field, dim, blocks)?);
    }
    Ok(out)
}

fn suite_osc(cfg: &RunConfig, thresholds: &Thresholds) -> Result<Vec<CheckResult>> {
    let field = cfg.field()?;
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // Scalar invariance: rescaling never moves a vector between classes.
    let samples = 10_000usize;
    let mut failures = 0usize;
    for _ in 0..samples {
        let v = random_nonzero_vector(field, cfg.dim, &mut rng);
        let class = asymptotic_class(&v).expect("nonzero by construction");
        for c in field.nonzero_elements() {
            if asymptotic_class(&v.scaled(c)).expect("still nonzero") != class {
                failures += 1;
                break;
            }
        }
    }
    checks.push(
        CheckResult::new("class-is-scalar-invariant", samples, failures)
            .with_note(format!("all {} nonzero scalars per vector", cfg.p - 1)),
    );

    // Oscillation recount: osc equals a direct neighbor-disagreement count.
    let samples = 10_000usize;
    let mut failures = 0usize;
    for _ in 0..samples {
        let v = random_nonzero_vector(field, cfg.dim, &mut rng);
        let mut padded = v.coeffs().to_vec();
        padded.push(0);
        let recount = v
            .support()
            .into_iter()
            .filter(|&i| padded[i] != padded[i + 1])
            .count() as u64;
        if osc(&v) != Ok(recount) {
            failures += 1;
        }
    }
    checks.push(CheckResult::new("oscillation-matches-direct-recount", samples, failures));

    // Desk asymptoticity: re-derive each calibration row from scratch and
    // insist the guaranteed classes really are realized in every span.
    let entries = entries_for(cfg, thresholds)?;
    let mut failures = 0usize;
    let mut sequences = 0usize;
    for entry in &entries {
        let fresh = calibrate::entry_for(field, entry.dim, entry.blocks)?;
        sequences += fresh.sequences;
        if &fresh != entry {
            failures += 1;
        }
    }
    checks.push(
        CheckResult::new("calibration-rows-reproduce", entries.len(), failures)
            .with_note(format!("{sequences} block sequences rescanned")),
    );

    // Spot checks: the canonical class search finds a vector of the right
    // class inside randomly chosen calibrated spans.
    let samples = 50usize;
    let mut failures = 0usize;
    for _ in 0..samples {
        let entry = &entries[rng.random_range(0..entries.len())];
        let mut indices: Vec<usize> = (0..entry.dim).collect();
        for i in 0..entry.blocks {
            let j = rng.random_range(i..indices.len());
            indices.swap(i, j);
        }
        let mut chosen: Vec<usize> = indices[..entry.blocks].to_vec();
        chosen.sort_unstable();
        let x = BlockSeq::from_basis(field, chosen);
        if entry.guaranteed_classes.is_empty() {
            continue;
        }
        let class = entry.guaranteed_classes
            [rng.random_range(0..entry.guaranteed_classes.len())];
        match find_in_class(&x, class, entry.blocks)? {
            Some(v) => {
                if asymptotic_class(&v) != Ok(class) {
                    failures += 1;
                }
            }
            None => failures += 1,
        }
    }
    checks.push(CheckResult::new("class-search-lands-in-class", samples, failures));

    Ok(checks)
}

// -------------------------------------------------------------------- games

/// Classes a chaser may safely be asked for: those guaranteed in every
/// two-block span, the tightest space late rounds leave it.
pub fn gated_targets(cfg: &RunConfig, thresholds: &Thresholds) -> Result<Vec<u32>> {
    if let Some(entry) = thresholds.lookup(cfg.p, 2) {
        return Ok(entry.guaranteed_classes.clone());
    }
    let field = cfg.field()?;
    Ok(calibrate::entry_for(field, cfg.dim.min(8), 2)?.guaranteed_classes)
}

/// Ground both game suites play on: basis blocks, capped so every reply
/// search stays within the span bound.
fn game_ground(cfg: &RunConfig) -> Result<BlockSeq> {
    let field = cfg.field()?;
    Ok(BlockSeq::from_basis(field, 0..cfg.dim.min(cfg.bound)))
}

/// Consecutive basis blocks combined with random coefficients: a block
/// sequence strictly below the ground.
fn random_grouped_blocks(ground: &BlockSeq, rng: &mut ChaCha8Rng) -> BlockSeq {
    let p = ground.field().p();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < ground.len() {
        let size = rng.random_range(1..=(ground.len() - i).min(2));
        let mut v = ground.blocks()[i].scaled(rng.random_range(1..p));
        for j in i + 1..i + size {
            v = v
                .add_scaled(rng.random_range(0..p), &ground.blocks()[j])
                .expect("same field");
        }
        blocks.push(v);
        i += size;
    }
    BlockSeq::new(ground.field(), blocks).expect("windows are disjoint and increasing")
}

fn reply_classes(outcome: &BlockSeq) -> Vec<u32> {
    outcome
        .iter()
        .map(|y| asymptotic_class(y).expect("replies are nonzero"))
        .collect()
}

fn suite_games(cfg: &RunConfig, thresholds: &Thresholds) -> Result<Vec<CheckResult>> {
    let field = cfg.field()?;
    let ground = game_ground(cfg)?;
    let palette = gated_targets(cfg, thresholds)?;
    anyhow::ensure!(
        !palette.is_empty(),
        "no class is guaranteed over F_{} pairs; games suite cannot pick targets",
        cfg.p
    );
    let rounds = cfg.rounds.clamp(1, 4);
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6761_6d65);

    // Asymptotic game: chaser replies against the tail player, and the
    // transcript replays cleanly with the requested classes.
    let samples = 50usize;
    let mut failures = 0usize;
    for _ in 0..samples {
        let targets: Vec<u32> =
            (0..rounds).map(|_| palette[rng.random_range(0..palette.len())]).collect();
        let start = new_game(
            GameKind::Asymptotic,
            ground.clone(),
            BlockSeq::empty(field),
            None,
        )?;
        let mut i = tail_player();
        let mut ii = class_chaser(targets.clone(), cfg.bound);
        let out = run(&start, &mut i, &mut ii, rounds)?;
        let replayed = replay(&start, &out.transcript);
        if out.exhausted
            || reply_classes(&out.outcome) != targets
            || replayed.is_err()
            || replayed.unwrap().outcome() != &out.outcome
        {
            failures += 1;
        }
    }
    checks.push(
        CheckResult::new("asymptotic-chaser-replays-cleanly", samples, failures)
            .with_note(format!("targets drawn from {palette:?}")),
    );

    // Gowers game: same discipline under block moves. The catalog hands I
    // the ground each round — the calibrated class guarantees are measured
    // on basis spans, so only there is exhaustion a genuine failure.
    let samples = 50usize;
    let mut failures = 0usize;
    for _ in 0..samples {
        let targets: Vec<u32> =
            (0..rounds).map(|_| palette[rng.random_range(0..palette.len())]).collect();
        let start =
            new_game(GameKind::Gowers, ground.clone(), BlockSeq::empty(field), None)?;
        let mut i = catalog_player(vec![ground.clone(); rounds]);
        let mut ii = class_chaser(targets.clone(), cfg.bound);
        let out = run(&start, &mut i, &mut ii, rounds)?;
        let replayed = replay(&start, &out.transcript);
        if out.exhausted
            || reply_classes(&out.outcome) != targets
            || replayed.is_err()
            || replayed.unwrap().outcome() != &out.outcome
        {
            failures += 1;
        }
    }
    checks.push(CheckResult::new("gowers-chaser-replays-cleanly", samples, failures));

    // The finitized game, fed one vector at a time, lands on the same
    // outcome as the direct Gowers run against the same blocks.
    let samples = 20usize;
    let mut failures = 0usize;
    for _ in 0..samples {
        let targets: Vec<u32> =
            (0..rounds).map(|_| palette[rng.random_range(0..palette.len())]).collect();
        let catalog: Vec<BlockSeq> =
            (0..rounds).map(|_| random_grouped_blocks(&ground, &mut rng)).collect();
        let start =
            new_game(GameKind::Gowers, ground.clone(), BlockSeq::empty(field), None)?;
        let mut i = catalog_player(catalog.clone());
        let mut ii = class_chaser(targets.clone(), cfg.bound);
        let direct = run(&start, &mut i, &mut ii, rounds)?;

        let mut ii = class_chaser(targets, cfg.bound);
        let via =
            simulate_gowers_via_finitized(&ground, &BlockSeq::empty(field), &catalog, &mut ii)?;
        if via.outcome != direct.outcome || via.exhausted != direct.exhausted {
            failures += 1;
        }
    }
    checks.push(CheckResult::new("finitized-agrees-with-direct-gowers", samples, failures));

    // Negative control: a tampered transcript must be rejected on replay.
    let samples = 10usize;
    let mut failures = 0usize;
    for case in 0..samples {
        let targets: Vec<u32> =
            (0..rounds).map(|_| palette[rng.random_range(0..palette.len())]).collect();
        let start = new_game(
            GameKind::Asymptotic,
            ground.clone(),
            BlockSeq::empty(field),
            None,
        )?;
        let mut i = tail_player();
        let mut ii = class_chaser(targets, cfg.bound);
        let out = run(&start, &mut i, &mut ii, rounds)?;
        let mut tampered = Transcript {
            moves: out.transcript.moves.clone(),
            ..out.transcript.clone()
        };
        // Replace one reply with a vector outside the ground's span.
        let foreign = Vector::basis(field, ground.max_support().unwrap_or(0) + 1 + case);
        let target = tampered
            .moves
            .iter_mut()
            .rev()
            .find(|tm| tm.side == Side::II)
            .expect("runs contain replies");
        *target = TranscriptMove {
            side: Side::II,
            mv: Move::Reply(foreign),
        };
        if replay(&start, &tampered).is_ok() {
            failures += 1;
        }
    }
    checks.push(CheckResult::new("tampered-replays-are-rejected", samples, failures));

    Ok(checks)
}

// -------------------------------------------------------------------- ptree

fn suite_ptree(cfg: &RunConfig) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7074_7265);

    // Frontier sizes and cone decomposition on deep random conditions.
    let samples = 200usize;
    let mut failures = 0usize;
    let mut frontiers_checked = 0usize;
    for _ in 0..samples {
        let prunes = rng.random_range(0..=10);
        let p = random_condition(14, prunes, &mut rng);
        let mut bad = false;
        for n in 0..=5usize {
            let frontier = match p.branching_levels(n) {
                Ok(f) => f,
                // A heavily pruned approximation may stop branching early;
                // that is a feature of finite depth, not a failure.
                Err(PTreeError::LevelUndefined { .. }) => continue,
                Err(e) => return Err(e).context("branching levels"),
            };
            frontiers_checked += 1;
            if frontier.len() != 1 << n {
                bad = true;
                continue;
            }
            let mut union: Option<PTreeApprox> = None;
            let mut leaves_seen = 0usize;
            for s in &frontier {
                let cone = p.restrict(s)?;
                if !cone.is_restriction_of(&p) {
                    bad = true;
                }
                leaves_seen += cone.leaves().count();
                union = Some(match union {
                    None => cone,
                    Some(u) => u.union(&cone)?,
                });
            }
            if union.as_ref() != Some(&p) || leaves_seen != p.leaves().count() {
                bad = true;
            }
        }
        if bad {
            failures += 1;
        }
    }
    checks.push(
        CheckResult::new("frontiers-are-dyadic-and-cones-decompose", samples, failures)
            .with_note(format!(
                "depth 14, levels 0..=5, {frontiers_checked} frontiers defined"
            )),
    );

    // Fusion: the fused tree refines every stage at its level.
    let samples = 100usize;
    let mut failures = 0usize;
    let mut completed = 0usize;
    for _ in 0..samples {
        let start = random_condition(9, rng.random_range(0..=4), &mut rng);
        let stages = 3usize;
        let seeds: Vec<u64> = (0..stages).map(|_| rng.random()).collect();
        let build = fusion_build(&start, |p, stage| {
            let mut stage_rng = ChaCha8Rng::seed_from_u64(seeds[stage]);
            random_refinement(p, 2, &mut stage_rng)
        }, stages);
        let build = match build {
            Ok(b) => b,
            Err(PTreeError::LevelUndefined { .. }) => continue,
            Err(e) => return Err(e).context("fusion build"),
        };
        completed += 1;
        let mut bad = build.sequence.len() != stages + 1;
        for (n, stage) in build.sequence.iter().enumerate() {
            match build.fused.leq_n(stage, n) {
                Ok(true) => {}
                Ok(false) => bad = true,
                Err(PTreeError::LevelUndefined { .. }) => {}
                Err(e) => return Err(e).context("fusion order"),
            }
        }
        if fuse(&build.sequence).ok().as_ref() != Some(&build.fused) {
            bad = true;
        }
        if bad {
            failures += 1;
        }
    }
    checks.push(
        CheckResult::new("fusion-refines-every-stage", samples, failures)
            .with_note(format!("{completed} chains completed at depth 9")),
    );

    // Compatibility: any refinement passes through some level-2 cone.
    let samples = 50usize;
    let mut failures = 0usize;
    let mut defined = 0usize;
    for _ in 0..samples {
        let p = random_condition(9, rng.random_range(0..=3), &mut rng);
        let q = random_refinement(&p, 3, &mut rng);
        let frontier = match p.branching_levels(2) {
            Ok(f) => f,
            Err(PTreeError::LevelUndefined { .. }) => continue,
            Err(e) => return Err(e).context("level-2 frontier"),
        };
        defined += 1;
        let mut hit = false;
        for s in &frontier {
            if compatible(&q, &p.restrict(s)?)? {
                hit = true;
                break;
            }
        }
        if !hit {
            failures += 1;
        }
    }
    checks.push(
        CheckResult::new("refinements-meet-a-level-2-cone", samples, failures)
            .with_note(format!("{defined} conditions had the frontier defined")),
    );

    Ok(checks)
}

// -------------------------------------------------------------------- codec

fn random_bits(len: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    (0..len).map(|_| rng.random()).collect()
}

fn suite_codec(cfg: &RunConfig, thresholds: &Thresholds) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x636f_6465);

    // Set coding round-trips.
    let samples = 2_000usize;
    let mut failures = 0usize;
    for _ in 0..samples {
        let k: u64 = rng.random();
        let decoded = blocklab::codec::decode_set(k);
        if encode_set(&decoded) != Ok(k) {
            failures += 1;
        }
    }
    checks.push(CheckResult::new("set-coding-round-trips", samples, failures));

    // Every nonempty subset of a trace recovers a true prefix.
    let samples = 1_000usize;
    let mut failures = 0usize;
    let mut subsets_checked = 0usize;
    for _ in 0..samples {
        let g = random_bits(rng.random_range(1..=16), &mut rng);
        let trace = z_of(&g)?;
        let values: Vec<u64> = trace.z_elements.iter().copied().collect();
        let mut bad = false;
        for mask in 1u64..(1 << values.len()) {
            let w: BTreeSet<u64> = values
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            subsets_checked += 1;
            match recover_prefix(&w) {
                Ok(prefix) if g.starts_with(&prefix) => {}
                _ => bad = true,
            }
        }
        if bad {
            failures += 1;
        }
    }
    checks.push(
        CheckResult::new("trace-subsets-recover-true-prefixes", samples, failures)
            .with_note(format!("{subsets_checked} subsets checked")),
    );

    // Consistency verdicts agree with brute-force realizability over every
    // length-8 code sequence.
    let mut realizers: Vec<[u64; 4]> = vec![[0; 4]; 256];
    for g_int in 0u64..256 {
        let g: Vec<bool> = (0..8).map(|t| g_int >> t & 1 == 1).collect();
        for v in &z_of(&g)?.z_elements {
            realizers[*v as usize][(g_int / 64) as usize] |= 1u64 << (g_int % 64);
        }
    }
    let meet = |a: u64, b: u64| {
        realizers[a as usize]
            .iter()
            .zip(&realizers[b as usize])
            .any(|(x, y)| x & y != 0)
    };
    let mut samples = 0usize;
    let mut failures = 0usize;
    for a in 0u64..256 {
        for b in a..256 {
            samples += 1;
            let w: BTreeSet<u64> = [a, b].into_iter().collect();
            if recover_prefix(&w).is_ok() != meet(a, b) {
                failures += 1;
            }
        }
    }
    checks.push(
        CheckResult::new("consistency-matches-brute-force", samples, failures)
            .with_note("all pairs from the length-8 universe"),
    );

    // Trace serialization is tamper-evident.
    let samples = 200usize;
    let mut failures = 0usize;
    for _ in 0..samples {
        let g = random_bits(rng.random_range(1..=12), &mut rng);
        let trace = z_of(&g)?;
        let body = serde_json::to_string(&trace)?;
        let back: ZTrace = serde_json::from_str(&body)?;
        let flipped = {
            let mut g = g.clone();
            let i = rng.random_range(0..g.len());
            g[i] = !g[i];
            g
        };
        let tampered = body.replace(
            &format!("\"g_prefix\":\"{}\"", format_bits(&g)),
            &format!("\"g_prefix\":\"{}\"", format_bits(&flipped)),
        );
        let rejected = serde_json::from_str::<ZTrace>(&tampered).is_err();
        if back != trace || !(rejected || trace.z_elements == z_of(&flipped)?.z_elements) {
            failures += 1;
        }
    }
    checks.push(CheckResult::new("traces-are-tamper-evident", samples, failures));

    // Leak pipeline: every span vector of an encoded outcome reveals
    // exactly the classes of the blocks it uses.
    let field = cfg.field()?;
    let palette: Vec<u32> = {
        let entry = thresholds
            .widest(cfg.p)
            .cloned()
            .map(Ok)
            .unwrap_or_else(|| calibrate::entry_for(field, cfg.dim.min(8), cfg.dim.min(4)))?;
        entry.guaranteed_classes.into_iter().take(3).collect()
    };
    let ground = game_ground(cfg)?;
    let mut samples = 0usize;
    let mut failures = 0usize;
    for mask in 1u32..(1 << palette.len()) {
        let z: Vec<u32> = palette
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &c)| c)
            .collect();
        samples += 1;
        let catalog = vec![ground.clone(); z.len()];
        let run = match pipeline_encode_play(&ground, &z, &catalog, z.len(), cfg.bound) {
            Ok(run) => run,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let mut bad = false;
        for v in enumerate_span(&run.outcome, cfg.bound)? {
            let coeffs = decompose(&v, &run.outcome)?;
            let expected: BTreeSet<u32> = coeffs
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(i, _)| z[i])
                .collect();
            if pipeline_decode(&v, &run.outcome).ok().as_ref() != Some(&expected) {
                bad = true;
            }
        }
        if bad {
            failures += 1;
        }
    }
    checks.push(
        CheckResult::new("outcome-vectors-leak-their-classes", samples, failures)
            .with_note(format!("code sets drawn from {palette:?}")),
    );

    Ok(checks)
}

// -------------------------------------------------------------- experiments

fn suite_experiments(cfg: &RunConfig) -> Result<Vec<CheckResult>> {
    let field = cfg.field()?;
    let ground = game_ground(cfg)?;
    let dim = ground.len();
    let mut checks = Vec::new();

    // Kernel dichotomy on the canonical map families, each verdict
    // re-verified from scratch.
    let killed: Vec<usize> = (0..dim / 3).collect();
    let families: Vec<(&str, Vec<LinMap>)> = vec![
        ("zero", vec![LinMap::zero(field, dim)]),
        ("identity", vec![LinMap::identity(field, dim)]),
        (
            "projection",
            vec![LinMap::projection_killing(field, dim, &killed)],
        ),
        (
            "zero+projection",
            vec![
                LinMap::zero(field, dim),
                LinMap::projection_killing(field, dim, &killed),
            ],
        ),
    ];
    let mut failures = 0usize;
    let samples = families.len();
    let mut notes = Vec::new();
    for (label, maps) in &families {
        let verdict = kernel_dichotomy_search(maps, &ground, 2, cfg.bound)?;
        let sound = match &verdict {
            KernelVerdict::Kernel { witness, .. } => verify_kernel_witness(maps, witness)?,
            KernelVerdict::Injective { witness, .. } => {
                verify_injective_witness(maps, witness, cfg.bound)?
            }
            KernelVerdict::NeitherFound { .. } => {
                // No suffix satisfies either horn; confirm on the last one.
                let tailmost = ground.suffix(ground.len() - 2);
                !verify_kernel_witness(maps, &tailmost)?
                    && !verify_injective_witness(maps, &tailmost, cfg.bound)?
            }
        };
        let shape_ok = match (*label, &verdict) {
            ("zero", KernelVerdict::Kernel { offset, .. }) => *offset == 0,
            ("identity", KernelVerdict::Injective { offset, .. }) => *offset == 0,
            ("projection", KernelVerdict::Injective { offset, .. }) => *offset == killed.len(),
            ("zero+projection", KernelVerdict::NeitherFound { .. }) => true,
            _ => false,
        };
        if !(sound && shape_ok) {
            failures += 1;
            notes.push(format!("{label} misbehaved"));
        }
    }
    let mut check = CheckResult::new("kernel-verdicts-reverify", samples, failures);
    if !notes.is_empty() {
        check = check.with_note(notes.join("; "));
    }
    checks.push(check);

    // Asymptotic avoidance on oracle families, ditto.
    let probe = 4.min(dim);
    let families: Vec<(&str, Vec<VecSetOracle>, usize)> = vec![
        ("empty", vec![VecSetOracle::empty()], 3.min(dim)),
        ("all-nonzero", vec![VecSetOracle::all_nonzero()], probe),
        (
            "low-classes",
            vec![VecSetOracle::osc_class(0), VecSetOracle::osc_class(1)],
            probe,
        ),
        (
            "sparse-classes",
            vec![VecSetOracle::osc_class(1), VecSetOracle::osc_class(3)],
            2.min(dim),
        ),
    ];
    let samples = families.len();
    let mut failures = 0usize;
    let mut notes = Vec::new();
    for (label, oracles, probe_len) in &families {
        let sub_ground = match *label {
            // Small grounds keep the Neither horn reachable.
            "sparse-classes" => BlockSeq::from_basis(field, 0..4.min(dim)),
            "low-classes" => BlockSeq::from_basis(field, 0..8.min(dim)),
            _ => ground.clone(),
        };
        let verdict = asymptotic_below_search(oracles, &sub_ground, *probe_len, cfg.bound)?;
        let sound = match &verdict {
            AsymptoticVerdict::AvoidsAll { witness } => {
                verify_avoidance_witness(oracles, witness, cfg.bound)?
            }
            AsymptoticVerdict::MeetsAll { candidates } => {
                // Recount and re-scan: every candidate meets every oracle.
                let mut recount = 0usize;
                let mut all_meet = true;
                for_each_combination(sub_ground.len(), *probe_len, |idx| {
                    recount += 1;
                    let blocks: Vec<Vector> =
                        idx.iter().map(|&i| sub_ground.blocks()[i].clone()).collect();
                    let candidate = BlockSeq::new(field, blocks)?;
                    for oracle in oracles {
                        let mut met = false;
                        for v in enumerate_span(&candidate, cfg.bound)? {
                            if oracle.admits(&v) {
                                met = true;
                                break;
                            }
                        }
                        all_meet &= met;
                    }
                    Ok(())
                })?;
                all_meet && recount == *candidates
            }
            AsymptoticVerdict::Neither { counterexample, avoided } => {
                let named: Vec<&VecSetOracle> =
                    oracles.iter().filter(|o| o.name() == avoided.as_str()).collect();
                named.len() == 1
                    && verify_avoidance_witness(&[named[0].clone()], counterexample, cfg.bound)?
            }
        };
        let shape_ok = match (*label, &verdict) {
            ("empty", AsymptoticVerdict::AvoidsAll { .. }) => true,
            ("all-nonzero", AsymptoticVerdict::MeetsAll { .. }) => true,
            ("low-classes", AsymptoticVerdict::MeetsAll { .. }) => true,
            ("sparse-classes", AsymptoticVerdict::Neither { .. }) => true,
            _ => false,
        };
        if !(sound && shape_ok) {
            failures += 1;
            notes.push(format!("{label} misbehaved"));
        }
    }
    let mut check = CheckResult::new("asymptotic-verdicts-reverify", samples, failures);
    if !notes.is_empty() {
        check = check.with_note(notes.join("; "));
    }
    checks.push(check);

    Ok(checks)
}
