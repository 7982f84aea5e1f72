#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::PathBuf;

use semicover_cli::report::ReportRecord;

pub const BLESS_ENV: &str = "SEMICOVER_BLESS";

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn cert(c: Option<&semicover::CoverCertificate>) -> String {
    match c {
        Some(c) => {
            let k: Vec<String> = c.witness.iter().map(|e| e.index().to_string()).collect();
            format!("{}:{}", c.cell_index, k.join(","))
        }
        None => "-".into(),
    }
}

/// One tab-separated line per record: key, partition, and every certificate.
pub fn compact(records: &[ReportRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let exact = r.exact.as_ref().and_then(|e| e.certificate.as_ref());
        let t1 = r.theorem1.as_ref().map(|t| &t.certificate);
        let t2 = r.theorem2.as_ref().map(|t| &t.certificate);
        let t3 = r.theorem3.as_ref().and_then(|t| t.certificate.as_ref());
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.key,
            r.partition,
            cert(exact),
            cert(t1),
            cert(t2),
            cert(t3)
        );
    }
    out
}

pub fn jsonl(records: &[ReportRecord]) -> String {
    records.iter().map(|r| r.to_json_line() + "\n").collect()
}

/// Compares `actual` with a fixture, rewriting the fixture when blessing.
pub fn golden(name: &str, actual: &str) -> Result<(), String> {
    let path = fixture(name);
    if std::env::var_os(BLESS_ENV).is_some() {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        return Ok(());
    }
    let line = expected
        .lines()
        .zip(actual.lines())
        .position(|(a, b)| a != b)
        .unwrap_or_else(|| expected.lines().count().min(actual.lines().count()));
    Err(format!(
        "{} differs at line {} ({} expected lines, {} actual)",
        path.display(),
        line + 1,
        expected.lines().count(),
        actual.lines().count()
    ))
}
