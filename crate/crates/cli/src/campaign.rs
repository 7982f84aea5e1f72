//! Exhaustive search campaigns over small semigroups and their partitions.
//!
//! Work is grouped per evaluated table: all partitions of one table form a
//! unit. Units are computed in parallel batches and written in enumeration
//! order by the calling thread, so the output does not depend on the worker
//! count. After each unit is written its canonical key is appended to the
//! checkpoint file; a resumed run drops any records of units missing from
//! the checkpoint and skips the units it lists.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use semicover::enumeration::{
    canonical_key, enumerate_semigroups, partition_codes, CellCount, EnumerationError, EnumerationOptions,
    MAX_ENUMERATION_ORDER,
};
use semicover::theorems::f_bound_saturating;
use semicover::{CanonicalKey, CayleyTable, PartitionCode};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{evaluate, parse_record, verify_record, RecordError, ReportRecord, TheoremSet};

/// Default worker count when `--jobs` is not given.
pub const JOBS_ENV: &str = "SEMICOVER_JOBS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionMode {
    All,
    Exact(usize),
    /// Explicit codes; only those whose length matches the order are used.
    Fixed(Vec<PartitionCode>),
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub orders: RangeInclusive<usize>,
    pub partitions: PartitionMode,
    pub theorems: TheoremSet,
    pub jobs: usize,
    pub out: PathBuf,
    /// Units between checkpoint flushes.
    pub checkpoint_interval: usize,
    /// Enumerate up to iso/anti-iso and evaluate each representative and its
    /// opposite. Yields the same record set as plain isomorphism dedup.
    pub anti_iso_pairs: bool,
    /// Ignore and overwrite any existing output and checkpoint.
    pub fresh: bool,
}

impl CampaignConfig {
    pub fn new(orders: RangeInclusive<usize>, out: impl Into<PathBuf>) -> Self {
        CampaignConfig {
            orders,
            partitions: PartitionMode::All,
            theorems: TheoremSet::all(),
            jobs: 1,
            out: out.into(),
            checkpoint_interval: 1,
            anti_iso_pairs: false,
            fresh: false,
        }
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        checkpoint_path(&self.out)
    }

    fn validate(&self) -> Result<(), CampaignError> {
        let (lo, hi) = (*self.orders.start(), *self.orders.end());
        if lo == 0 || hi > MAX_ENUMERATION_ORDER || lo > hi {
            return Err(CampaignError::Config(format!(
                "order range {lo}..{hi} must lie within 1..{MAX_ENUMERATION_ORDER}"
            )));
        }
        if self.jobs == 0 {
            return Err(CampaignError::Config("worker count must be at least 1".into()));
        }
        if let PartitionMode::Exact(0) = self.partitions {
            return Err(CampaignError::Config("cell count must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn checkpoint_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".checkpoint");
    PathBuf::from(s)
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("soundness failure on {key} partition [{partition}]: {source}")]
    Soundness {
        key: String,
        partition: PartitionCode,
        #[source]
        source: RecordError,
    },
    #[error("record on line {line} of {path}: {source}")]
    Load {
        path: String,
        line: usize,
        #[source]
        source: RecordError,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CampaignError + '_ {
    move |source| CampaignError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub semigroups: usize,
    pub records: usize,
    /// Records with no cell satisfying `cov Δ(A) ≤ n`.
    pub violations: usize,
    /// Records where no cell has a defined covering number.
    pub undefined_everywhere: usize,
    /// Maximum of `best − n` over records with a defined best value.
    pub max_excess: Option<i64>,
    /// Count of records by `best/n`.
    pub exact_tightness: BTreeMap<String, usize>,
    /// Count of records by `|K|/n` for the finite-semigroup construction.
    pub theorem2_tightness: BTreeMap<String, usize>,
    pub theorem1_max_k: Option<usize>,
    /// Records where `|K|` exceeded `f(n, 1)`; always zero for valid records.
    pub theorem1_over_bound: usize,
    pub theorem3_applicable: usize,
}

impl Summary {
    pub fn add(&mut self, r: &ReportRecord) {
        self.records += 1;
        if let Some(e) = &r.exact {
            if !e.passes {
                self.violations += 1;
            }
            match e.best_value {
                Some(v) => {
                    let excess = v as i64 - r.n as i64;
                    self.max_excess = Some(self.max_excess.map_or(excess, |m| m.max(excess)));
                    *self.exact_tightness.entry(format!("{v}/{}", r.n)).or_default() += 1;
                }
                None => self.undefined_everywhere += 1,
            }
        }
        if let Some(t) = &r.theorem2 {
            *self
                .theorem2_tightness
                .entry(format!("{}/{}", t.k_size, r.n))
                .or_default() += 1;
        }
        if let Some(t) = &r.theorem1 {
            self.theorem1_max_k = Some(self.theorem1_max_k.map_or(t.k_size, |m| m.max(t.k_size)));
            if t.k_size as u64 > f_bound_saturating(r.n, 1) {
                self.theorem1_over_bound += 1;
            }
        }
        if r.theorem3.as_ref().is_some_and(|t| t.applicable) {
            self.theorem3_applicable += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.theorem1_over_bound == 0
    }
}

/// Tables to evaluate for one order, each already in canonical form.
fn tables_for_order(
    order: usize,
    anti_iso_pairs: bool,
) -> Result<Box<dyn Iterator<Item = (CanonicalKey, CayleyTable)>>, CampaignError> {
    let as_unit = |t: CayleyTable| {
        let key = canonical_key(&t).expect("enumerated orders are canonicalizable");
        let table = key.to_table();
        (key, table)
    };
    if !anti_iso_pairs {
        return Ok(Box::new(
            enumerate_semigroups(order, EnumerationOptions::up_to_iso())?.map(as_unit),
        ));
    }
    let reps = enumerate_semigroups(order, EnumerationOptions::up_to_iso_and_anti_iso())?;
    Ok(Box::new(reps.flat_map(move |t| {
        let (key, table) = as_unit(t);
        let (okey, otable) = as_unit(table.transpose());
        let mut pair = vec![(key.clone(), table)];
        if okey != key {
            pair.push((okey, otable));
        }
        pair
    })))
}

fn codes_for(order: usize, mode: &PartitionMode) -> Vec<PartitionCode> {
    match mode {
        PartitionMode::All => partition_codes(order, CellCount::All)
            .map(Iterator::collect)
            .unwrap_or_default(),
        PartitionMode::Exact(n) => partition_codes(order, CellCount::Exact(*n))
            .map(Iterator::collect)
            .unwrap_or_default(),
        PartitionMode::Fixed(codes) => codes.iter().filter(|c| c.0.len() == order).cloned().collect(),
    }
}

fn evaluate_unit(
    key: &CanonicalKey,
    table: &CayleyTable,
    codes: &[PartitionCode],
    theorems: TheoremSet,
) -> Result<Vec<ReportRecord>, CampaignError> {
    codes
        .iter()
        .map(|code| {
            let record = evaluate(key, table, code, theorems).and_then(|r| verify_record(&r).map(|_| r));
            record.map_err(|source| CampaignError::Soundness {
                key: key.to_string(),
                partition: code.clone(),
                source,
            })
        })
        .collect()
}

fn load_checkpoint(path: &Path) -> Result<BTreeSet<String>, CampaignError> {
    if !path.exists() {
        return Ok(BTreeSet::new());
    }
    let file = File::open(path).map_err(io_err(path))?;
    let mut keys = BTreeSet::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(io_err(path))?;
        let line = line.trim();
        if !line.is_empty() {
            keys.insert(line.to_string());
        }
    }
    Ok(keys)
}

/// Keeps only records of checkpointed units, dropping partial leftovers.
fn truncate_to_checkpoint(out: &Path, done: &BTreeSet<String>) -> Result<(), CampaignError> {
    if !out.exists() {
        return Ok(());
    }
    let text = fs::read_to_string(out).map_err(io_err(out))?;
    let mut kept = String::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        // A torn final line from an interrupted write is dropped with its unit.
        match parse_record(line) {
            Ok(r) if done.contains(&r.key) => {
                kept.push_str(line);
                kept.push('\n');
            }
            Ok(_) => {}
            Err(_) if i + 1 == text.lines().count() => {}
            Err(source) => {
                return Err(CampaignError::Load {
                    path: out.display().to_string(),
                    line: i + 1,
                    source,
                })
            }
        }
    }
    fs::write(out, kept).map_err(io_err(out))
}

/// Runs a campaign, writing records to `config.out`, then reloads and
/// re-verifies the whole output to build the summary.
pub fn run_search(config: &CampaignConfig) -> Result<Summary, CampaignError> {
    config.validate()?;
    let ckpt_path = config.checkpoint_path();
    if config.fresh {
        for p in [&config.out, &ckpt_path] {
            if p.exists() {
                fs::remove_file(p).map_err(io_err(p))?;
            }
        }
    }
    let done = load_checkpoint(&ckpt_path)?;
    truncate_to_checkpoint(&config.out, &done)?;

    let mut out = BufWriter::new(
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&config.out)
            .map_err(io_err(&config.out))?,
    );
    let mut ckpt = BufWriter::new(
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&ckpt_path)
            .map_err(io_err(&ckpt_path))?,
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CampaignError::Config(e.to_string()))?;
    let batch_size = (config.jobs * 8).max(16);
    let mut since_flush = 0;

    for order in config.orders.clone() {
        let codes = codes_for(order, &config.partitions);
        let mut units = tables_for_order(order, config.anti_iso_pairs)?.filter(|(k, _)| !done.contains(&k.to_string()));
        loop {
            let batch: Vec<(CanonicalKey, CayleyTable)> = units.by_ref().take(batch_size).collect();
            if batch.is_empty() {
                break;
            }
            let results: Vec<Result<Vec<ReportRecord>, CampaignError>> = pool.install(|| {
                batch
                    .par_iter()
                    .map(|(key, table)| evaluate_unit(key, table, &codes, config.theorems))
                    .collect()
            });
            for ((key, _), result) in batch.iter().zip(results) {
                let records = result?;
                for r in &records {
                    writeln!(out, "{}", r.to_json_line()).map_err(io_err(&config.out))?;
                }
                out.flush().map_err(io_err(&config.out))?;
                writeln!(ckpt, "{key}").map_err(io_err(&ckpt_path))?;
                since_flush += 1;
                if since_flush >= config.checkpoint_interval.max(1) {
                    ckpt.flush().map_err(io_err(&ckpt_path))?;
                    since_flush = 0;
                }
            }
        }
    }
    out.flush().map_err(io_err(&config.out))?;
    ckpt.flush().map_err(io_err(&ckpt_path))?;
    drop(out);
    summarize_file(&config.out)
}

/// Loads a record file, re-verifying every record.
pub fn load_records(path: &Path) -> Result<Vec<ReportRecord>, CampaignError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let load = |source| CampaignError::Load {
            path: path.display().to_string(),
            line: i + 1,
            source,
        };
        let r = parse_record(&line).map_err(load)?;
        verify_record(&r).map_err(load)?;
        records.push(r);
    }
    Ok(records)
}

pub fn summarize(records: &[ReportRecord]) -> Summary {
    let mut summary = Summary::default();
    let mut keys = BTreeSet::new();
    for r in records {
        keys.insert(&r.key);
        summary.add(r);
    }
    summary.semigroups = keys.len();
    summary
}

pub fn summarize_file(path: &Path) -> Result<Summary, CampaignError> {
    Ok(summarize(&load_records(path)?))
}

/// Records with timing cleared, sorted by key then partition code.
pub fn normalized(records: &[ReportRecord]) -> Vec<ReportRecord> {
    let mut v: Vec<ReportRecord> = records.iter().map(ReportRecord::without_timing).collect();
    v.sort_by(|a, b| (a.order, &a.key, &a.partition).cmp(&(b.order, &b.key, &b.partition)));
    v
}

/// Worker count from the environment, else the available parallelism.
pub fn default_jobs() -> usize {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&j| j >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
