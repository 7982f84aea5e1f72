use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use semicover::delta::{min_cov_over_cells, verify_cover, PartitionCover};
use semicover::enumeration::{canonical_key, enumerate_semigroups, EnumerationOptions};
use semicover::structure::{decompose_right_group, minimal_right_ideal};
use semicover::theorems::{f_bound_saturating, witness_theorem1, witness_theorem2, witness_theorem3_partition};
use semicover::{enumerate_partitions, CayleyTable, CellCount, Partition, PartitionCode, SubsetMask};
use semicover_cli::campaign::{run_search, CampaignConfig, CampaignError, PartitionMode, JOBS_ENV};
use semicover_cli::exit;
use semicover_cli::partition_arg::parse_partition_code;
use semicover_cli::report::TheoremSet;
use semicover_cli::table_file::{format_table, read_table};

/// Largest order for which `check` without `--partition` walks every partition.
const CHECK_ALL_MAX_ORDER: usize = 10;

#[derive(Parser)]
#[command(
    name = "semicover",
    version,
    about = "Covering numbers of Δ-sets for partitions of finite semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report Δ and exact covering numbers per cell, and whether some cell has cov Δ(A) ≤ n.
    Check(CheckArgs),
    /// Build and verify a cover certificate with one of the three constructions.
    Witness(WitnessArgs),
    /// Exhaustively evaluate every semigroup and partition in an order range.
    Search(SearchArgs),
    /// List semigroups of an order up to isomorphism.
    Enumerate(EnumerateArgs),
    /// Show the minimal right ideal and its group × right-zero decomposition.
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct CheckArgs {
    table: PathBuf,
    /// Block labels, one per element (e.g. "0 1 0 1").
    #[arg(long)]
    partition: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WitnessArgs {
    table: PathBuf,
    #[arg(long)]
    partition: String,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    theorem: u8,
}

#[derive(Args)]
struct SearchArgs {
    /// Inclusive order range, `A..B` or a single order.
    #[arg(long, default_value = "1..4")]
    orders: String,
    /// `all`, a cell count, or `;`-separated partition codes.
    #[arg(long, default_value = "all")]
    partitions: String,
    /// Comma-separated subset of `1,2,3,exact`.
    #[arg(long, default_value = "1,2,3,exact")]
    theorems: String,
    #[arg(long, env = JOBS_ENV)]
    jobs: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Semigroups between checkpoint flushes.
    #[arg(long, default_value_t = 1)]
    checkpoint_interval: usize,
    /// Enumerate up to anti-isomorphism and evaluate each representative and its transpose.
    #[arg(long)]
    anti_iso: bool,
    /// Discard existing output and checkpoint instead of resuming.
    #[arg(long)]
    fresh: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    order: usize,
    /// Write one table file per semigroup into this directory.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Also identify anti-isomorphic semigroups.
    #[arg(long, conflicts_with = "labeled")]
    anti_iso: bool,
    /// List every labeled table instead of isomorphism classes.
    #[arg(long)]
    labeled: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    table: PathBuf,
    #[arg(long)]
    json: bool,
}

/// Failure carrying an exit status.
struct Failure(u8, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(exit::INPUT_ERROR, e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Witness(a) => witness(a),
        Command::Search(a) => search(a),
        Command::Enumerate(a) => enumerate(a).map(|_| exit::PASS).map_err(Failure::from),
        Command::Decompose(a) => decompose(a).map(|_| exit::PASS).map_err(Failure::from),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn load(path: &Path) -> Result<CayleyTable> {
    read_table(path).with_context(|| format!("reading {}", path.display()))
}

fn partition_for(text: &str, s: &CayleyTable) -> Result<PartitionCode> {
    let parsed = parse_partition_code(text, s.order())?;
    if parsed.normalized {
        eprintln!("warning: partition code normalized to [{}]", parsed.code);
    }
    Ok(parsed.code)
}

fn fmt_value(v: Option<usize>) -> String {
    v.map_or_else(|| "undefined".to_string(), |v| v.to_string())
}

fn check_report(p: &Partition, pc: &PartitionCover) -> String {
    let mut out = String::new();
    for (i, (cell, c)) in p.cells().iter().zip(&pc.cells).enumerate() {
        let _ = writeln!(
            out,
            "cell {i} {cell}: delta {}, cov {}",
            c.delta,
            fmt_value(c.cov.value())
        );
    }
    let verdict = if pc.passes() { "pass" } else { "FAIL" };
    match pc.best_cell {
        Some(b) => {
            let _ = writeln!(
                out,
                "best cell {b}, cov {} <= {}: {verdict}",
                fmt_value(pc.best_value()),
                p.len()
            );
        }
        None => {
            let _ = writeln!(out, "no cell has a defined covering number: {verdict}");
        }
    }
    out
}

fn check_json(code: &PartitionCode, pc: &PartitionCover) -> serde_json::Value {
    json!({
        "partition": code,
        "n": pc.cells.len(),
        "cells": pc.cells.iter().map(|c| json!({
            "delta": c.delta.to_vec(),
            "cov_defined": c.cov.is_defined(),
            "cov": c.cov.value(),
            "witness": c.cov.witness().map(SubsetMask::to_vec),
        })).collect::<Vec<_>>(),
        "best_cell": pc.best_cell,
        "best_value": pc.best_value(),
        "passes": pc.passes(),
    })
}

fn check(args: CheckArgs) -> Result<u8, Failure> {
    let s = load(&args.table)?;
    if let Some(text) = &args.partition {
        let code = partition_for(text, &s)?;
        let p = code.to_partition();
        let pc = min_cov_over_cells(&p, &s);
        if args.json {
            println!("{}", serde_json::to_string_pretty(&check_json(&code, &pc))?);
        } else {
            println!("order {}, partition [{code}] (n = {})", s.order(), p.len());
            print!("{}", check_report(&p, &pc));
        }
        return Ok(if pc.passes() { exit::PASS } else { exit::VIOLATION });
    }
    if s.order() > CHECK_ALL_MAX_ORDER {
        return Err(Failure(
            exit::INPUT_ERROR,
            anyhow::anyhow!(
                "order {} is too large to check every partition; pass --partition",
                s.order()
            ),
        ));
    }
    let mut failures = 0;
    let mut total = 0;
    for p in enumerate_partitions(s.order(), CellCount::All)? {
        let code = PartitionCode::from_partition(&p);
        let pc = min_cov_over_cells(&p, &s);
        total += 1;
        if !pc.passes() {
            failures += 1;
        }
        if args.json {
            println!("{}", check_json(&code, &pc));
        } else {
            println!(
                "[{code}] n={} best={} {}",
                p.len(),
                fmt_value(pc.best_value()),
                if pc.passes() { "pass" } else { "FAIL" }
            );
        }
    }
    if !args.json {
        println!("{total} partitions, {failures} failures");
    }
    Ok(if failures == 0 { exit::PASS } else { exit::VIOLATION })
}

fn witness(args: WitnessArgs) -> Result<u8, Failure> {
    let s = load(&args.table)?;
    let code = partition_for(&args.partition, &s)?;
    let p = code.to_partition();
    let n = p.len();
    let (certificate, trace) = match args.theorem {
        1 => {
            let t = witness_theorem1(&p, &s).map_err(|e| Failure(exit::VIOLATION, e.into()))?;
            let trace = json!({ "steps": t.steps, "f_bound": f_bound_saturating(n, 1) });
            (t.certificate, trace)
        }
        2 => {
            let t = witness_theorem2(&p, &s).map_err(|e| Failure(exit::VIOLATION, e.into()))?;
            let c = t.certificate.clone();
            (c, serde_json::to_value(&t)?)
        }
        _ => match witness_theorem3_partition(&p, &s).map_err(|e| Failure(exit::VIOLATION, e.into()))? {
            Some((c, w)) => (c, serde_json::to_value(&w)?),
            None => {
                println!("{}", json!({ "theorem": 3, "partition": code, "applicable": false }));
                eprintln!("not applicable: no cell contains a left or right zero");
                return Ok(exit::NOT_APPLICABLE);
            }
        },
    };
    verify_cover(&certificate, &p, &s).map_err(|e| Failure(exit::VIOLATION, e.into()))?;
    let out = json!({
        "theorem": args.theorem,
        "partition": code,
        "n": n,
        "certificate": certificate,
        "trace": trace,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(exit::PASS)
}

fn parse_orders(text: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim_start_matches('=').trim()),
        None => (text.trim(), text.trim()),
    };
    let lo: usize = lo.parse().with_context(|| format!("invalid order range `{text}`"))?;
    let hi: usize = hi.parse().with_context(|| format!("invalid order range `{text}`"))?;
    Ok(lo..=hi)
}

fn parse_partition_mode(text: &str) -> Result<PartitionMode> {
    let t = text.trim();
    if t == "all" {
        return Ok(PartitionMode::All);
    }
    if let Ok(n) = t.parse::<usize>() {
        return Ok(PartitionMode::Exact(n));
    }
    let codes = t
        .split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|c| {
            let labels = c
                .split(|ch: char| ch.is_whitespace() || ch == ',')
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<usize>().with_context(|| format!("invalid label `{x}`")))
                .collect::<Result<Vec<_>>>()?;
            Ok(PartitionCode(labels).normalized())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionMode::Fixed(codes))
}

fn parse_theorems(text: &str) -> Result<TheoremSet> {
    let mut set = TheoremSet {
        theorem1: false,
        theorem2: false,
        theorem3: false,
        exact: false,
    };
    for t in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match t {
            "1" => set.theorem1 = true,
            "2" => set.theorem2 = true,
            "3" => set.theorem3 = true,
            "exact" => set.exact = true,
            other => bail!("unknown theorem `{other}`; expected 1, 2, 3 or exact"),
        }
    }
    Ok(set)
}

fn search(args: SearchArgs) -> Result<u8, Failure> {
    let mut config = CampaignConfig::new(parse_orders(&args.orders)?, args.out);
    config.partitions = parse_partition_mode(&args.partitions)?;
    config.theorems = parse_theorems(&args.theorems)?;
    config.jobs = args.jobs.unwrap_or_else(semicover_cli::campaign::default_jobs);
    config.checkpoint_interval = args.checkpoint_interval;
    config.anti_iso_pairs = args.anti_iso;
    config.fresh = args.fresh;
    let summary = match run_search(&config) {
        Ok(s) => s,
        Err(e @ CampaignError::Soundness { .. }) => return Err(Failure(exit::VIOLATION, e.into())),
        Err(e) => return Err(e.into()),
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(if summary.passed() { exit::PASS } else { exit::VIOLATION })
}

fn rows_string(s: &CayleyTable) -> String {
    s.rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(if s.order() > 10 { "," } else { "" })
        })
        .collect::<Vec<_>>()
        .join("|")
}

fn enumerate(args: EnumerateArgs) -> Result<()> {
    let options = if args.labeled {
        EnumerationOptions::default()
    } else if args.anti_iso {
        EnumerationOptions::up_to_iso_and_anti_iso()
    } else {
        EnumerationOptions::up_to_iso()
    };
    if let Some(dir) = &args.dump {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut count = 0;
    for (i, t) in enumerate_semigroups(args.order, options)?.enumerate() {
        let key = rows_string(&t);
        println!("{key}");
        if let Some(dir) = &args.dump {
            let path = dir.join(format!("order{}_{:06}.tbl", args.order, i));
            std::fs::write(&path, format_table(&t, Some(&format!("semigroup {key}"))))
                .with_context(|| format!("writing {}", path.display()))?;
        }
        count += 1;
    }
    eprintln!("{count} semigroups of order {}", args.order);
    Ok(())
}

fn decompose(args: DecomposeArgs) -> Result<()> {
    let s = load(&args.table)?;
    let ideal = minimal_right_ideal(&s);
    let d = decompose_right_group(&ideal, &s)?;
    let group: Vec<usize> = d.group.to_vec();
    let inverses: Vec<(usize, usize)> = group.iter().map(|&h| (h, d.inverse_of(h).unwrap_or(h))).collect();
    let group_table: Vec<Vec<usize>> = group
        .iter()
        .map(|&x| group.iter().map(|&y| s.mul(x, y)).collect())
        .collect();
    if args.json {
        let out = json!({
            "ideal": d.ideal.to_vec(),
            "r": d.r,
            "idempotents": d.idempotents.to_vec(),
            "a": d.a,
            "group": group,
            "identity": d.identity(),
            "inverses": inverses,
            "group_table": group_table,
            "canonical_group": (group.len() <= 8)
                .then(|| {
                    let pos = |x: usize| group.iter().position(|&g| g == x).unwrap_or(0);
                    let products = group_table.iter().flatten().map(|&v| pos(v)).collect();
                    CayleyTable::new(group.len(), products).ok().and_then(|t| canonical_key(&t).ok())
                })
                .flatten()
                .map(|k| k.to_string()),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    }
    println!("minimal right ideal R = {}", d.ideal);
    println!("r = {}", d.r);
    println!("idempotents E = {}", d.idempotents);
    println!("a = {}", d.a);
    println!(
        "group H = R*a = {} (order {}, identity {})",
        d.group,
        group.len(),
        d.identity()
    );
    let inv: Vec<String> = inverses.iter().map(|(h, i)| format!("{h}^-1={i}")).collect();
    println!("inverses: {}", inv.join(" "));
    println!(
        "R = H x E: {} = {} x {}",
        d.ideal.count(),
        group.len(),
        d.idempotents.count()
    );
    println!("H table:");
    for (x, row) in group.iter().zip(&group_table) {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        println!("  {x}: {}", cells.join(" "));
    }
    Ok(())
}
