//! Δ-sets, covering numbers, and cover certificates.
//!
//! For `A ⊆ S`, `Δ(A) = {x : x∘A ∩ A ≠ ∅}`. The covering number of a set `A`
//! is the least `|X|` with `S = X⁻¹A`; it exists exactly when every `x`
//! satisfies `S∘x ∩ A ≠ ∅`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::mask::SubsetMask;
use crate::setcover;
use crate::table::{CayleyTable, ElementId, Partition};

/// `Δ(A) = {x : x∘A ∩ A ≠ ∅}`.
pub fn delta(a: &SubsetMask, s: &CayleyTable) -> SubsetMask {
    let mut out = s.empty();
    for x in 0..s.order() {
        if a.iter().any(|y| a.contains(s.mul(x, y))) {
            out.insert(x);
        }
    }
    out
}

/// Rows of the covering problem for `A`: row `k` is `k⁻¹A`.
fn quotient_rows(a: &SubsetMask, s: &CayleyTable) -> Vec<SubsetMask> {
    (0..s.order()).map(|k| s.left_quotient(k, a)).collect()
}

/// Whether `cov A` is defined, i.e. `S⁻¹A = S`.
pub fn cov_defined(a: &SubsetMask, s: &CayleyTable) -> bool {
    s.set_quotient(&s.full(), a).is_full()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovMode {
    /// Minimum cover, with the lexicographically smallest witness.
    Exact,
    /// Greedy cover: an upper bound with a valid witness.
    GreedyUpper,
}

/// Outcome of a covering-number computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CovResult {
    /// `S⁻¹A ≠ S`; no `X` satisfies `S = X⁻¹A`.
    Undefined,
    /// `S = witness⁻¹A` with `|witness| = value`.
    Defined { value: usize, witness: SubsetMask },
}

impl CovResult {
    pub fn is_defined(&self) -> bool {
        matches!(self, CovResult::Defined { .. })
    }

    pub fn value(&self) -> Option<usize> {
        match self {
            CovResult::Defined { value, .. } => Some(*value),
            CovResult::Undefined => None,
        }
    }

    pub fn witness(&self) -> Option<&SubsetMask> {
        match self {
            CovResult::Defined { witness, .. } => Some(witness),
            CovResult::Undefined => None,
        }
    }
}

/// `cov A = min{|X| : S = X⁻¹A}`.
pub fn cov(a: &SubsetMask, s: &CayleyTable, mode: CovMode) -> CovResult {
    let rows = quotient_rows(a, s);
    let target = s.full();
    let picked = match mode {
        CovMode::Exact => setcover::lex_min_cover(&rows, &target),
        CovMode::GreedyUpper => setcover::greedy_cover(&rows, &target),
    };
    match picked {
        Some(ks) => CovResult::Defined {
            value: ks.len(),
            witness: SubsetMask::from_indices(s.order(), ks),
        },
        None => CovResult::Undefined,
    }
}

/// Which construction produced a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Theorem1,
    Theorem2,
    Theorem3,
    ExactSolver,
    External,
}

/// Claim that `S = K⁻¹Δ(A)` for the partition cell `A = cells[cell_index]`,
/// with `|K| ≤ bound_claimed`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub cell_index: usize,
    #[serde(rename = "k")]
    pub witness: Vec<ElementId>,
    pub bound_claimed: u64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    CellOutOfRange { cell_index: usize, cells: usize },
    ElementOutOfRange(ElementId),
    BoundExceeded { size: usize, bound: u64 },
    Uncovered(usize),
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::CellOutOfRange { cell_index, cells } => {
                write!(f, "cell index {cell_index} out of range for {cells} cells")
            }
            VerifyFailure::ElementOutOfRange(e) => write!(f, "witness element {e} out of range"),
            VerifyFailure::BoundExceeded { size, bound } => {
                write!(f, "witness has {size} elements, bound claimed is {bound}")
            }
            VerifyFailure::Uncovered(x) => write!(f, "element {x} is not covered"),
        }
    }
}

impl std::error::Error for VerifyFailure {}

/// Checks a certificate directly from the definitions.
///
/// The witness is treated as a set; repeated entries count once toward the
/// bound.
pub fn verify_cover(cert: &CoverCertificate, p: &Partition, s: &CayleyTable) -> Result<(), VerifyFailure> {
    if cert.cell_index >= p.len() {
        return Err(VerifyFailure::CellOutOfRange {
            cell_index: cert.cell_index,
            cells: p.len(),
        });
    }
    if let Some(&e) = cert.witness.iter().find(|e| e.index() >= s.order()) {
        return Err(VerifyFailure::ElementOutOfRange(e));
    }
    let k = SubsetMask::from_elements(s.order(), &cert.witness);
    if k.count() as u64 > cert.bound_claimed {
        return Err(VerifyFailure::BoundExceeded {
            size: k.count(),
            bound: cert.bound_claimed,
        });
    }
    let d = delta(p.cell(cert.cell_index), s);
    for x in 0..s.order() {
        if !k.iter().any(|kk| d.contains(s.mul(kk, x))) {
            return Err(VerifyFailure::Uncovered(x));
        }
    }
    Ok(())
}

/// Per-cell covering data for a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellCover {
    pub delta: SubsetMask,
    pub cov: CovResult,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCover {
    pub cells: Vec<CellCover>,
    /// Index of the cell with the smallest defined value, ties to the lowest
    /// index; `None` when no cell has a defined covering number.
    pub best_cell: Option<usize>,
}

impl PartitionCover {
    pub fn best_value(&self) -> Option<usize> {
        self.best_cell.and_then(|c| self.cells[c].cov.value())
    }

    /// Whether some cell satisfies `cov Δ(A) ≤ n`.
    pub fn passes(&self) -> bool {
        self.best_value().is_some_and(|v| v <= self.cells.len())
    }

    /// An exact-solver certificate for the best cell.
    pub fn certificate(&self) -> Option<CoverCertificate> {
        let c = self.best_cell?;
        let witness = self.cells[c].cov.witness()?;
        Some(CoverCertificate {
            cell_index: c,
            witness: witness.to_elements(),
            bound_claimed: witness.count() as u64,
            provenance: Provenance::ExactSolver,
        })
    }
}

/// Exact `cov Δ(A)` for every cell `A` of `p`.
pub fn min_cov_over_cells(p: &Partition, s: &CayleyTable) -> PartitionCover {
    let cells: Vec<CellCover> = p
        .cells()
        .iter()
        .map(|cell| {
            let d = delta(cell, s);
            let cov = cov(&d, s, CovMode::Exact);
            CellCover { delta: d, cov }
        })
        .collect();
    let best_cell = cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.cov.value().map(|v| (v, i)))
        .min()
        .map(|(_, i)| i);
    PartitionCover { cells, best_cell }
}
