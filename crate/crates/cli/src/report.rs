//! One JSON-lines record per (semigroup, partition) pair, and its
//! re-verification on load.

use std::time::Instant;

use semicover::delta::{min_cov_over_cells, verify_cover, CoverCertificate, VerifyFailure};
use semicover::enumeration::{CanonicalKey, KeyParseError};
use semicover::table::TableError;
use semicover::theorems::{
    f_bound, f_bound_saturating, witness_theorem1, witness_theorem2, witness_theorem3_partition, TheoremError, ZeroKind,
};
use semicover::{CayleyTable, ElementId, Partition, PartitionCode};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which computations a record carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremSet {
    pub theorem1: bool,
    pub theorem2: bool,
    pub theorem3: bool,
    pub exact: bool,
}

impl TheoremSet {
    pub fn all() -> Self {
        TheoremSet {
            theorem1: true,
            theorem2: true,
            theorem3: true,
            exact: true,
        }
    }
}

impl Default for TheoremSet {
    fn default() -> Self {
        Self::all()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub delta: Vec<usize>,
    pub cov_defined: bool,
    pub cov: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactReport {
    pub cells: Vec<CellReport>,
    pub best_cell: Option<usize>,
    pub best_value: Option<usize>,
    /// `best_value ≤ n`.
    pub passes: bool,
    pub certificate: Option<CoverCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub certificate: CoverCertificate,
    pub k_size: usize,
    /// `f(n, 1)` in decimal.
    pub f_bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub certificate: CoverCertificate,
    pub k_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem3Report {
    pub applicable: bool,
    pub zero: Option<ElementId>,
    pub kind: Option<ZeroKind>,
    pub certificate: Option<CoverCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    /// Canonical key of the evaluated table; the table is the key itself.
    pub key: String,
    pub order: usize,
    pub partition: PartitionCode,
    pub n: usize,
    pub exact: Option<ExactReport>,
    pub theorem1: Option<Theorem1Report>,
    pub theorem2: Option<Theorem2Report>,
    pub theorem3: Option<Theorem3Report>,
    pub wall_time_us: u64,
}

impl ReportRecord {
    /// Copy with the timing field cleared, for golden comparisons.
    pub fn without_timing(&self) -> ReportRecord {
        ReportRecord {
            wall_time_us: 0,
            ..self.clone()
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Key(#[from] KeyParseError),
    #[error("table in key is invalid: {0}")]
    Table(#[from] TableError),
    #[error("partition code {0} is not a restricted-growth string of the right length")]
    Partition(PartitionCode),
    #[error("{which} certificate fails: {source}")]
    Certificate {
        which: &'static str,
        #[source]
        source: VerifyFailure,
    },
    #[error("{which}: {message}")]
    Inconsistent { which: &'static str, message: String },
    #[error("construction failed: {0}")]
    Theorem(#[from] TheoremError),
    #[error("malformed record: {0}")]
    Json(#[from] serde_json::Error),
}

/// Evaluates one pair. `table` must be the table encoded by `key`.
pub fn evaluate(
    key: &CanonicalKey,
    table: &CayleyTable,
    code: &PartitionCode,
    theorems: TheoremSet,
) -> Result<ReportRecord, RecordError> {
    let start = Instant::now();
    let p = code.to_partition();
    let n = p.len();

    let exact = theorems.exact.then(|| {
        let pc = min_cov_over_cells(&p, table);
        ExactReport {
            cells: pc
                .cells
                .iter()
                .map(|c| CellReport {
                    delta: c.delta.to_vec(),
                    cov_defined: c.cov.is_defined(),
                    cov: c.cov.value(),
                })
                .collect(),
            best_cell: pc.best_cell,
            best_value: pc.best_value(),
            passes: pc.passes(),
            certificate: pc.certificate(),
        }
    });
    let theorem1 = if theorems.theorem1 {
        let t = witness_theorem1(&p, table)?;
        Some(Theorem1Report {
            k_size: t.certificate.witness.len(),
            certificate: t.certificate,
            f_bound: f_bound(n, 1).map_or_else(|_| f_bound_saturating(n, 1).to_string(), |f| f.value.to_string()),
        })
    } else {
        None
    };
    let theorem2 = if theorems.theorem2 {
        let t = witness_theorem2(&p, table)?;
        Some(Theorem2Report {
            k_size: t.certificate.witness.len(),
            certificate: t.certificate,
        })
    } else {
        None
    };
    let theorem3 = if theorems.theorem3 {
        Some(match witness_theorem3_partition(&p, table)? {
            Some((certificate, w)) => Theorem3Report {
                applicable: true,
                zero: Some(w.zero),
                kind: Some(w.kind),
                certificate: Some(certificate),
            },
            None => Theorem3Report {
                applicable: false,
                zero: None,
                kind: None,
                certificate: None,
            },
        })
    } else {
        None
    };
    Ok(ReportRecord {
        key: key.to_string(),
        order: table.order(),
        partition: code.clone(),
        n,
        exact,
        theorem1,
        theorem2,
        theorem3,
        wall_time_us: start.elapsed().as_micros() as u64,
    })
}

fn check(which: &'static str, cert: &CoverCertificate, p: &Partition, s: &CayleyTable) -> Result<(), RecordError> {
    verify_cover(cert, p, s).map_err(|source| RecordError::Certificate { which, source })
}

fn inconsistent(which: &'static str, message: String) -> RecordError {
    RecordError::Inconsistent { which, message }
}

/// Rebuilds the table and partition from a record and re-verifies every
/// embedded certificate and the stated sizes.
pub fn verify_record(record: &ReportRecord) -> Result<(), RecordError> {
    let key: CanonicalKey = record.key.parse()?;
    let table = CayleyTable::new(key.order(), key.products())?;
    if record.partition.0.len() != table.order() || !record.partition.is_normal() {
        return Err(RecordError::Partition(record.partition.clone()));
    }
    let p = record.partition.to_partition();
    let n = p.len();
    if record.n != n || record.order != table.order() {
        return Err(inconsistent("record", format!("n={} order={}", record.n, record.order)));
    }
    if let Some(e) = &record.exact {
        if e.cells.len() != n {
            return Err(inconsistent("exact", format!("{} cells for n={n}", e.cells.len())));
        }
        match (&e.certificate, e.best_value) {
            (Some(c), Some(v)) => {
                check("exact", c, &p, &table)?;
                if c.witness.len() != v || Some(c.cell_index) != e.best_cell {
                    return Err(inconsistent("exact", "certificate does not match best cell".into()));
                }
                if e.passes != (v <= n) {
                    return Err(inconsistent("exact", "pass flag disagrees with best value".into()));
                }
            }
            (None, None) => {
                if e.passes {
                    return Err(inconsistent("exact", "passes without a defined cell".into()));
                }
            }
            _ => return Err(inconsistent("exact", "best value without certificate".into())),
        }
    }
    if let Some(t) = &record.theorem1 {
        check("theorem1", &t.certificate, &p, &table)?;
        if t.k_size != t.certificate.witness.len() || t.certificate.bound_claimed != f_bound_saturating(n, 1) {
            return Err(inconsistent("theorem1", "size or bound mismatch".into()));
        }
    }
    if let Some(t) = &record.theorem2 {
        check("theorem2", &t.certificate, &p, &table)?;
        if t.k_size != t.certificate.witness.len() || t.k_size > n {
            return Err(inconsistent("theorem2", format!("|K|={} for n={n}", t.k_size)));
        }
    }
    if let Some(t) = &record.theorem3 {
        match (&t.certificate, t.applicable) {
            (Some(c), true) => {
                check("theorem3", c, &p, &table)?;
                if c.witness.len() != 1 {
                    return Err(inconsistent("theorem3", "witness is not a singleton".into()));
                }
            }
            (None, false) => {}
            _ => return Err(inconsistent("theorem3", "applicability flag disagrees".into())),
        }
    }
    Ok(())
}

pub fn parse_record(line: &str) -> Result<ReportRecord, RecordError> {
    Ok(serde_json::from_str(line)?)
}
