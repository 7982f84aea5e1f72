use std::fs;

use semicover::enumeration::{canonical_key, enumerate_semigroups, EnumerationOptions};
use semicover::PartitionCode;
use semicover_cli::campaign::{load_records, normalized, run_search, summarize, CampaignConfig, PartitionMode};
use semicover_cli::report::{parse_record, verify_record, TheoremSet};

fn bell(n: usize) -> usize {
    // Bell triangle.
    let mut row = vec![1usize];
    for _ in 1..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    *row.last().unwrap()
}

#[test]
fn record_count_is_classes_times_bell() {
    let dir = tempfile::tempdir().unwrap();
    let config = CampaignConfig::new(1..=3, dir.path().join("out.jsonl"));
    let summary = run_search(&config).unwrap();
    let expected: usize = (1..=3)
        .map(|k| {
            enumerate_semigroups(k, EnumerationOptions::up_to_iso())
                .unwrap()
                .count()
                * bell(k)
        })
        .sum();
    assert_eq!(bell(3), 5);
    assert_eq!(summary.records, expected);
    assert_eq!(summary.semigroups, 1 + 5 + 24);
    assert!(summary.passed());
    assert!(summary.max_excess.unwrap() <= 0);
}

#[test]
fn anti_iso_pairs_give_same_record_set() {
    let dir = tempfile::tempdir().unwrap();
    let a = CampaignConfig::new(1..=3, dir.path().join("a.jsonl"));
    let mut b = CampaignConfig::new(1..=3, dir.path().join("b.jsonl"));
    b.anti_iso_pairs = true;
    run_search(&a).unwrap();
    run_search(&b).unwrap();
    let ra = normalized(&load_records(&a.out).unwrap());
    let rb = normalized(&load_records(&b.out).unwrap());
    assert_eq!(ra, rb);
}

#[test]
fn resume_skips_completed_and_drops_partial_units() {
    let dir = tempfile::tempdir().unwrap();
    let full = CampaignConfig::new(1..=3, dir.path().join("full.jsonl"));
    run_search(&full).unwrap();
    let reference = normalized(&load_records(&full.out).unwrap());

    // Simulate an interruption: keep the checkpoint for the first 10 units and
    // leave the records of the next unit half-written.
    let part = CampaignConfig::new(1..=3, dir.path().join("part.jsonl"));
    let ckpt = fs::read_to_string(full.checkpoint_path()).unwrap();
    let keys: Vec<&str> = ckpt.lines().collect();
    let kept: Vec<&str> = keys[..10].to_vec();
    fs::write(part.checkpoint_path(), kept.join("\n") + "\n").unwrap();
    let text = fs::read_to_string(&full.out).unwrap();
    let mut partial = String::new();
    let mut extra = 0;
    for line in text.lines() {
        let r = parse_record(line).unwrap();
        if kept.contains(&r.key.as_str()) {
            partial.push_str(line);
            partial.push('\n');
        } else if r.key == keys[10] && extra < 2 {
            partial.push_str(line);
            partial.push('\n');
            extra += 1;
        }
    }
    partial.push_str("{\"key\": \"tor");
    fs::write(&part.out, partial).unwrap();

    let summary = run_search(&part).unwrap();
    let resumed = normalized(&load_records(&part.out).unwrap());
    assert_eq!(resumed, reference);
    assert_eq!(summary, summarize(&load_records(&full.out).unwrap()));
    let ck = fs::read_to_string(part.checkpoint_path()).unwrap();
    assert_eq!(ck.lines().count(), keys.len());
}

#[test]
fn fresh_run_overwrites() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = CampaignConfig::new(1..=2, dir.path().join("x.jsonl"));
    run_search(&c).unwrap();
    c.fresh = true;
    let s = run_search(&c).unwrap();
    assert_eq!(s.records, 11);
    // Without `fresh`, a completed run is a no-op.
    c.fresh = false;
    assert_eq!(run_search(&c).unwrap().records, 11);
}

#[test]
fn partition_modes_and_theorem_subsets() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = CampaignConfig::new(3..=3, dir.path().join("x.jsonl"));
    c.partitions = PartitionMode::Exact(2);
    c.theorems = TheoremSet {
        theorem1: false,
        theorem2: true,
        theorem3: false,
        exact: true,
    };
    let s = run_search(&c).unwrap();
    assert_eq!(s.records, 24 * 3);
    for r in load_records(&c.out).unwrap() {
        assert!(r.theorem1.is_none() && r.theorem3.is_none());
        assert!(r.theorem2.is_some() && r.exact.is_some());
        assert_eq!(r.n, 2);
    }

    let mut c = CampaignConfig::new(2..=3, dir.path().join("y.jsonl"));
    c.partitions = PartitionMode::Fixed(vec![PartitionCode(vec![0, 1, 1])]);
    let s = run_search(&c).unwrap();
    assert_eq!(s.records, 24);
    assert_eq!(s.semigroups, 24);
}

#[test]
fn records_use_canonical_tables() {
    let dir = tempfile::tempdir().unwrap();
    let c = CampaignConfig::new(2..=3, dir.path().join("x.jsonl"));
    run_search(&c).unwrap();
    for r in load_records(&c.out).unwrap() {
        let key: semicover::CanonicalKey = r.key.parse().unwrap();
        assert_eq!(canonical_key(&key.to_table()).unwrap(), key);
        verify_record(&r).unwrap();
    }
}

mod common;

#[test]
fn serial_and_parallel_runs_match_golden() {
    let dir = tempfile::tempdir().unwrap();
    let mut serial = CampaignConfig::new(1..=3, dir.path().join("s.jsonl"));
    serial.jobs = 1;
    let mut parallel = CampaignConfig::new(1..=3, dir.path().join("p.jsonl"));
    parallel.jobs = 4;
    run_search(&serial).unwrap();
    run_search(&parallel).unwrap();
    let s = normalized(&load_records(&serial.out).unwrap());
    let p = normalized(&load_records(&parallel.out).unwrap());
    assert_eq!(s, p);
    common::golden("golden_orders_1_3.jsonl", &common::jsonl(&s)).unwrap();
}
