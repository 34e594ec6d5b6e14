//! Exhaustive calibration of oscillation behaviour.
//!
//! For each field and block count in a fixed grid, scan every block sequence
//! of that many basis vectors inside the stated dimension and record which
//! asymptotic classes its span realizes. The classes realized in *every*
//! such span are the ones a class-seeking strategy may safely be asked for,
//! so the verification suites read this fixture to gate their targets.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use blocklab::osc::{osc, partition_class};
use blocklab::vecspace::{enumerate_span, BlockSeq, FieldSpec};
use serde::{Deserialize, Serialize};

use crate::config::{ConfigEcho, RunConfig};
use crate::report::{self, SCHEMA};

/// Calibration facts for one field and block count, measured over every
/// block sequence of `blocks` basis vectors within dimension `dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdEntry {
    pub p: u64,
    pub dim: usize,
    pub blocks: usize,
    /// Classes realized inside every scanned span.
    pub guaranteed_classes: Vec<u32>,
    /// Classes realized inside at least one scanned span.
    pub reachable_classes: Vec<u32>,
    /// Union of oscillation values over all scanned spans.
    pub osc_values: Vec<u64>,
    /// Longest run of consecutive integers in `osc_values`.
    pub longest_run: u64,
    /// Number of block sequences scanned.
    pub sequences: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub schema: u32,
    pub entries: Vec<ThresholdEntry>,
}

impl Thresholds {
    pub fn lookup(&self, p: u64, blocks: usize) -> Option<&ThresholdEntry> {
        self.entries.iter().find(|e| e.p == p && e.blocks == blocks)
    }

    /// Largest calibrated entry for a field: the most blocks scanned.
    pub fn widest(&self, p: u64) -> Option<&ThresholdEntry> {
        self.entries.iter().filter(|e| e.p == p).max_by_key(|e| e.blocks)
    }
}

/// The calibration grid: `(p, dim, max_blocks)`. Chosen so the largest span
/// enumerated stays within the global ceiling.
pub const GRID: [(u64, usize, usize); 3] = [(2, 12, 6), (3, 12, 6), (5, 8, 4)];

/// Visits every strictly increasing `k`-tuple from `0..n`.
pub fn for_each_combination(
    n: usize,
    k: usize,
    mut f: impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if k > n || k == 0 {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn longest_run(values: &BTreeSet<u64>) -> u64 {
    let mut longest = 0u64;
    let mut run = 0u64;
    let mut prev: Option<u64> = None;
    for &k in values {
        run = match prev {
            Some(q) if k == q + 1 => run + 1,
            _ => 1,
        };
        longest = longest.max(run);
        prev = Some(k);
    }
    longest
}

pub fn entry_for(field: FieldSpec, dim: usize, blocks: usize) -> Result<ThresholdEntry> {
    let mut guaranteed: Option<BTreeSet<u32>> = None;
    let mut reachable: BTreeSet<u32> = BTreeSet::new();
    let mut osc_values: BTreeSet<u64> = BTreeSet::new();
    let mut sequences = 0usize;
    for_each_combination(dim, blocks, |idx| {
        let x = BlockSeq::from_basis(field, idx.iter().copied());
        let mut realized = BTreeSet::new();
        for v in enumerate_span(&x, blocks)? {
            let k = osc(&v).expect("span vectors are nonzero");
            osc_values.insert(k);
            realized.insert(partition_class(k));
        }
        guaranteed = Some(match guaranteed.take() {
            None => realized.clone(),
            Some(seen) => seen.intersection(&realized).copied().collect(),
        });
        reachable.extend(realized);
        sequences += 1;
        Ok(())
    })?;
    Ok(ThresholdEntry {
        p: field.p(),
        dim,
        blocks,
        guaranteed_classes: guaranteed.unwrap_or_default().into_iter().collect(),
        reachable_classes: reachable.into_iter().collect(),
        longest_run: longest_run(&osc_values),
        osc_values: osc_values.into_iter().collect(),
        sequences,
    })
}

/// Runs the whole grid. Purely exhaustive, so two runs always agree.
pub fn calibrate() -> Result<Thresholds> {
    let mut entries = Vec::new();
    for &(p, dim, max_blocks) in &GRID {
        let field = FieldSpec::new(p)?;
        for blocks in 1..=max_blocks {
            entries.push(entry_for(field, dim, blocks)?);
        }
    }
    Ok(Thresholds { schema: SCHEMA, entries })
}

pub fn load(path: &Path) -> Result<Thresholds> {
    let body = fs::read_to_string(path)
        .with_context(|| format!("reading calibration fixture {}", path.display()))?;
    let thresholds: Thresholds = serde_json::from_str(&body)
        .with_context(|| format!("parsing calibration fixture {}", path.display()))?;
    if thresholds.schema != SCHEMA {
        bail!(
            "calibration fixture {} has schema {}, expected {}; re-run `blocklab calibrate`",
            path.display(),
            thresholds.schema,
            SCHEMA
        );
    }
    Ok(thresholds)
}

pub fn write(thresholds: &Thresholds, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let mut body = serde_json::to_string_pretty(thresholds)?;
    body.push('\n');
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Loads the fixture if present, otherwise calibrates in process. The second
/// element says which happened: `"file"` or `"computed"`.
pub fn load_or_compute(cfg: &RunConfig) -> Result<(Thresholds, &'static str)> {
    let path = cfg.thresholds_path();
    if path.exists() {
        Ok((load(&path)?, "file"))
    } else {
        Ok((calibrate()?, "computed"))
    }
}

#[derive(Debug, Serialize)]
struct CalibrateReport {
    schema: u32,
    command: &'static str,
    config: ConfigEcho,
    fixture: String,
    entries: Vec<ThresholdEntry>,
}

/// `blocklab calibrate`: run the grid and write the fixture.
pub fn cmd_calibrate(cfg: &RunConfig) -> Result<i32> {
    cfg.field()?;
    let thresholds = calibrate()?;
    let path = cfg.thresholds_path();
    write(&thresholds, &path)?;
    let report = CalibrateReport {
        schema: SCHEMA,
        command: "calibrate",
        config: cfg.echo(),
        fixture: path.display().to_string(),
        entries: thresholds.entries,
    };
    report::emit(&report, cfg.out.as_deref())?;
    Ok(report::EXIT_OK)
}
