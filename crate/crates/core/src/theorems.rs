//! Certificate-producing constructions for the three covering bounds.
//!
//! * [`witness_theorem1`]: for any n-partition, some cell `A` has
//!   `S = K⁻¹Δ(A)` with `|K| ≤ f(n, 1) ≤ 2^(2^(n-1) - 1)`, found by the
//!   two-case induction on the number of cells.
//! * [`witness_theorem2`]: for a finite semigroup, some cell admits `|K| ≤ n`,
//!   via a minimal right ideal, its right-group decomposition, a cover inside
//!   the group part, and a lift back to `S`.
//! * [`witness_theorem3`]: a cell containing a left or right zero has
//!   covering number 1.
//!
//! Every certificate is re-verified against the definitions before it is
//! returned.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::delta::{delta, verify_cover, CoverCertificate, Provenance, VerifyFailure};
use crate::mask::SubsetMask;
use crate::structure::{self, StructureError};
use crate::table::{CayleyTable, ElementId, Partition};

/// Largest `n` for which [`f_bound`] materializes exact values; the closed
/// form bound has `2^(n-1)`-bit exponents.
pub const MAX_F_BOUND_N: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TheoremError {
    #[error("structure check failed: {0}")]
    Structure(#[from] StructureError),
    #[error("produced certificate does not verify: {0}")]
    Verify(#[from] VerifyFailure),
    #[error("precondition fails: F^-1(A_1 u ... u A_n) != S (element {0} uncovered)")]
    Precondition(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("f(n, m) requires 1 <= n <= {MAX_F_BOUND_N} and m >= 1, got n={n}, m={m}")]
    BoundOutOfRange { n: usize, m: u64 },
    #[error("partition has no cells")]
    EmptyPartition,
}

/// `f(n, m)` from the recursion `f(1, m) = m`, `f(n + 1, m) = f(n, m + m²)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FBound {
    pub n: usize,
    pub m: u64,
    pub value: BigUint,
}

impl FBound {
    /// `2^(2^(n-1) - 1) · m^(2^(n-1))`.
    pub fn closed_form_bound(&self) -> BigUint {
        let e = 1u32 << (self.n - 1);
        let two = BigUint::from(2u32);
        two.pow(e - 1) * BigUint::from(self.m).pow(e)
    }
}

pub fn f_bound(n: usize, m: u64) -> Result<FBound, TheoremError> {
    if n == 0 || n > MAX_F_BOUND_N || m == 0 {
        return Err(TheoremError::BoundOutOfRange { n, m });
    }
    let mut value = BigUint::from(m);
    for _ in 1..n {
        value = &value + &value * &value;
    }
    Ok(FBound { n, m, value })
}

/// `f(n, m)` saturated at `u64::MAX`; certificates carry this value.
pub fn f_bound_saturating(n: usize, m: u64) -> u64 {
    let mut value = m;
    for _ in 1..n.max(1) {
        value = value.saturating_add(value.saturating_mul(value));
        if value == u64::MAX {
            break;
        }
    }
    value
}

/// `2^(2^(n-1) - 1)`, the `m = 1` bound, as an exact integer.
pub fn theorem1_bound(n: usize) -> BigUint {
    assert!((1..=MAX_F_BOUND_N).contains(&n));
    BigUint::one() << ((1usize << (n - 1)) - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InductionCase {
    /// One cell left: `S = F⁻¹Δ(A₁)`.
    Base,
    /// `g∘A₁ ⊆ F⁻¹(A₂ ∪ …)`: drop `A₁` and grow `F` to `F ∪ F∘g∘F`.
    Case1,
    /// No such `g`: `S = F⁻¹Δ(A₁)`.
    Case2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub case: InductionCase,
    /// Index of the cell that was first in the remaining list.
    pub cell_index: usize,
    pub g: Option<ElementId>,
    pub f_size_before: usize,
    pub f_size_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTrace {
    pub steps: Vec<TraceStep>,
    pub certificate: CoverCertificate,
}

/// Whether `S = K⁻¹D`.
fn quotient_covers(k: &SubsetMask, d: &SubsetMask, s: &CayleyTable) -> Result<(), usize> {
    match (0..s.order()).find(|&x| !k.iter().any(|kk| d.contains(s.mul(kk, x)))) {
        Some(x) => Err(x),
        None => Ok(()),
    }
}

/// The inductive construction for arbitrary starting data: given `F` with
/// `S = F⁻¹(A₁ ∪ … ∪ Aₙ)`, finds `i` and `K` with `S = K⁻¹Δ(Aᵢ)` and
/// `|K| ≤ f(n, |F|)`.
///
/// Cells need not be disjoint here. The certificate's `cell_index` indexes
/// `cells`. Cells are consumed in the given order; case 1 is taken whenever
/// some `g` admits it, with the smallest such `g`.
pub fn witness_statement_star(
    f: &SubsetMask,
    cells: &[SubsetMask],
    s: &CayleyTable,
) -> Result<WitnessTrace, TheoremError> {
    if cells.is_empty() {
        return Err(TheoremError::EmptyPartition);
    }
    let bound = f_bound_saturating(cells.len(), f.count() as u64);
    let mut f = f.clone();
    let mut steps = Vec::new();
    let mut first = 0;
    loop {
        let rest = cells[first..].iter().fold(s.empty(), |acc, c| acc.union(c));
        if let Err(x) = quotient_covers(&f, &rest, s) {
            return Err(if first == 0 {
                TheoremError::Precondition(x)
            } else {
                TheoremError::Invariant(format!("S != F^-1(A_{first}..) after case 1 (element {x} uncovered)"))
            });
        }
        let head = &cells[first];
        let before = f.count();
        if first + 1 == cells.len() {
            steps.push(TraceStep {
                case: InductionCase::Base,
                cell_index: first,
                g: None,
                f_size_before: before,
                f_size_after: before,
            });
            break;
        }
        let tail = cells[first + 1..].iter().fold(s.empty(), |acc, c| acc.union(c));
        let tail_quotient = s.set_quotient(&f, &tail);
        let g = (0..s.order()).find(|&g| head.iter().all(|a| tail_quotient.contains(s.mul(g, a))));
        match g {
            Some(g) => {
                let mut grown = f.clone();
                for h in &f {
                    let hg = s.mul(h, g);
                    for ff in &f {
                        grown.insert(s.mul(hg, ff));
                    }
                }
                let after = grown.count();
                if after > before + before * before {
                    return Err(TheoremError::Invariant(format!(
                        "case 1 grew F from {before} to {after}"
                    )));
                }
                steps.push(TraceStep {
                    case: InductionCase::Case1,
                    cell_index: first,
                    g: Some(ElementId::from(g)),
                    f_size_before: before,
                    f_size_after: after,
                });
                f = grown;
                first += 1;
            }
            None => {
                steps.push(TraceStep {
                    case: InductionCase::Case2,
                    cell_index: first,
                    g: None,
                    f_size_before: before,
                    f_size_after: before,
                });
                break;
            }
        }
    }
    if let Err(x) = quotient_covers(&f, &delta(&cells[first], s), s) {
        return Err(TheoremError::Invariant(format!("final K does not cover element {x}")));
    }
    Ok(WitnessTrace {
        steps,
        certificate: CoverCertificate {
            cell_index: first,
            witness: f.to_elements(),
            bound_claimed: bound,
            provenance: Provenance::Theorem1,
        },
    })
}

/// Runs the induction from `F = {0}` over the partition's cells in order.
/// The certificate claims `|K| ≤ f(n, 1)`.
pub fn witness_theorem1(p: &Partition, s: &CayleyTable) -> Result<WitnessTrace, TheoremError> {
    let start = SubsetMask::singleton(s.order(), 0);
    let trace = witness_statement_star(&start, p.cells(), s)?;
    verify_cover(&trace.certificate, p, s)?;
    Ok(trace)
}

/// Intermediate objects of the finite-semigroup construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem2Trace {
    pub ideal: Vec<ElementId>,
    pub r: ElementId,
    pub a: ElementId,
    pub group: Vec<ElementId>,
    /// Cell whose trace on the group part is largest.
    pub cell_index: usize,
    /// Translating elements `F ⊆ H` with pairwise disjoint `f∘B`.
    pub translates: Vec<ElementId>,
    /// Inverses of `translates`, covering `H` inside the group.
    pub group_witness: Vec<ElementId>,
    pub certificate: CoverCertificate,
}

/// Builds a certificate with `|K| ≤ n` for a partition of a finite semigroup.
///
/// With `R` a minimal right ideal, `a` its smallest idempotent and `H = R∘a`:
/// let `B` be the largest trace `Aⱼ ∩ H`. Greedily pick `F ⊆ H` (ascending)
/// with the translates `f∘B` pairwise disjoint. Each translate has `|B|`
/// elements, so `|F| ≤ |H|/|B|`, which is at most the number of nonempty
/// traces since `B` is the largest of them. Maximality of `F` means every
/// `x ∈ H` has `x∘B ∩ f∘B ≠ ∅` for some `f ∈ F`, so `f⁻¹∘x ∈ Δ_H(B)`.
/// Lifting through `r ∈ R`, with `K = {f⁻¹∘r}`: for `x ∈ S`, `y = r∘x ∈ R`
/// and `y∘u = (y∘a)∘u` for `u ∈ H`, so the group-level witness transfers
/// to `Δ(Aⱼ)`.
pub fn witness_theorem2(p: &Partition, s: &CayleyTable) -> Result<Theorem2Trace, TheoremError> {
    if p.is_empty() {
        return Err(TheoremError::EmptyPartition);
    }
    let ideal = structure::minimal_right_ideal(s);
    let d = structure::decompose_right_group(&ideal, s)?;
    let r = d.r.index();
    let h = &d.group;

    let traces: Vec<SubsetMask> = p.cells().iter().map(|c| c.intersection(h)).collect();
    let (j, b) = traces
        .iter()
        .enumerate()
        .max_by(|(i, x), (k, y)| x.count().cmp(&y.count()).then(k.cmp(i)))
        .expect("partition has cells");
    debug_assert!(!b.is_empty());

    let translate = |x: usize| SubsetMask::from_indices(s.order(), b.iter().map(|y| s.mul(x, y)));
    let mut translates: Vec<usize> = Vec::new();
    let mut used = s.empty();
    for x in h {
        let t = translate(x);
        if !t.intersects(&used) {
            used.union_with(&t);
            translates.push(x);
        }
    }
    let nonempty = traces.iter().filter(|t| !t.is_empty()).count();
    if translates.len() * b.count() > h.count() || translates.len() > nonempty {
        return Err(TheoremError::Invariant(format!(
            "{} disjoint translates of a {}-element trace in a group of order {}",
            translates.len(),
            b.count(),
            h.count()
        )));
    }
    let group_witness: Vec<usize> = translates
        .iter()
        .map(|&f| d.inverse_of(f).ok_or(StructureError::NotAGroup))
        .collect::<Result<_, _>>()?;

    let k = SubsetMask::from_indices(s.order(), group_witness.iter().map(|&z| s.mul(z, r)));
    let certificate = CoverCertificate {
        cell_index: j,
        witness: k.to_elements(),
        bound_claimed: p.len() as u64,
        provenance: Provenance::Theorem2,
    };
    verify_cover(&certificate, p, s)?;
    Ok(Theorem2Trace {
        ideal: ideal.to_elements(),
        r: d.r,
        a: d.a,
        group: h.to_elements(),
        cell_index: j,
        translates: translates.into_iter().map(ElementId::from).collect(),
        group_witness: group_witness.into_iter().map(ElementId::from).collect(),
        certificate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroKind {
    LeftZero,
    RightZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem3Witness {
    pub zero: ElementId,
    pub kind: ZeroKind,
    pub witness: Vec<ElementId>,
}

/// If `A` contains a left zero `a`, `K = {a}` works since `a∘x = a ∈ Δ(A)`.
/// Otherwise, if `A` contains a right zero, `Δ(A) = S` and `K = {0}` works.
/// `None` when `A` contains neither.
pub fn witness_theorem3(a: &SubsetMask, s: &CayleyTable) -> Option<Theorem3Witness> {
    if let Some(z) = s.left_zeros().intersection(a).first() {
        return Some(Theorem3Witness {
            zero: ElementId::from(z),
            kind: ZeroKind::LeftZero,
            witness: vec![ElementId::from(z)],
        });
    }
    let z = s.right_zeros().intersection(a).first()?;
    Some(Theorem3Witness {
        zero: ElementId::from(z),
        kind: ZeroKind::RightZero,
        witness: vec![ElementId::from(0)],
    })
}

/// Applies [`witness_theorem3`] to the first cell containing a zero.
pub fn witness_theorem3_partition(
    p: &Partition,
    s: &CayleyTable,
) -> Result<Option<(CoverCertificate, Theorem3Witness)>, TheoremError> {
    let Some((cell_index, w)) = p
        .cells()
        .iter()
        .enumerate()
        .find_map(|(i, c)| witness_theorem3(c, s).map(|w| (i, w)))
    else {
        return Ok(None);
    };
    let certificate = CoverCertificate {
        cell_index,
        witness: w.witness.clone(),
        bound_claimed: 1,
        provenance: Provenance::Theorem3,
    };
    verify_cover(&certificate, p, s)?;
    Ok(Some((certificate, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::fixtures::*;

    fn ids(xs: &[usize]) -> Vec<ElementId> {
        xs.iter().map(|&x| ElementId::from(x)).collect()
    }

    fn m(order: usize, xs: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(order, xs.iter().copied())
    }

    /// Unrolls f(n, 1) by repeated substitution into f(1, ·).
    fn f_by_unrolling(n: usize) -> u64 {
        let mut args = vec![(n, 1u64)];
        while let Some(&(k, m)) = args.last() {
            if k == 1 {
                return m;
            }
            args.push((k - 1, m + m * m));
        }
        unreachable!()
    }

    #[test]
    fn f_values() {
        for mm in 1..10 {
            assert_eq!(f_bound(1, mm).unwrap().value, BigUint::from(mm));
        }
        let expected = [1u64, 2, 6, 42];
        for (n, &want) in (1..=4).zip(&expected) {
            assert_eq!(f_by_unrolling(n), want);
            assert_eq!(f_bound(n, 1).unwrap().value, BigUint::from(want));
            assert_eq!(f_bound_saturating(n, 1), want);
        }
        let f3 = f_bound(3, 1).unwrap();
        assert_eq!(f3.closed_form_bound(), BigUint::from(8u32));
        assert!(f3.value <= f3.closed_form_bound());
        assert_eq!(theorem1_bound(3), BigUint::from(8u32));
    }

    #[test]
    fn f_bound_respects_closed_form() {
        for n in 1..=8 {
            for mm in 1..=5 {
                let f = f_bound(n, mm).unwrap();
                assert!(f.value <= f.closed_form_bound(), "n={n} m={mm}");
            }
        }
        assert!(f_bound(0, 1).is_err());
        assert!(f_bound(2, 0).is_err());
        assert_eq!(f_bound_saturating(12, 1), u64::MAX);
    }

    #[test]
    fn theorem1_on_z3() {
        let z3 = cyclic(3);
        let p = Partition::from_labels(&[0, 1, 1]).unwrap();
        let trace = witness_theorem1(&p, &z3).unwrap();
        assert_eq!(trace.steps[0].case, InductionCase::Case1);
        assert_eq!(trace.steps[0].g, Some(ElementId::from(1)));
        assert_eq!(trace.steps[0].f_size_after, 2);
        assert_eq!(trace.steps[1].case, InductionCase::Base);
        assert_eq!(trace.certificate.cell_index, 1);
        assert_eq!(trace.certificate.witness, ids(&[0, 1]));
        assert_eq!(trace.certificate.bound_claimed, 2);
    }

    #[test]
    fn theorem1_trivial_partition() {
        let s = z2_times_rz2();
        let trace = witness_theorem1(&Partition::trivial(4), &s).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.certificate.witness, ids(&[0]));
        assert_eq!(trace.certificate.bound_claimed, 1);
    }

    #[test]
    fn statement_star_precondition() {
        let lz2 = left_zero(2);
        // 0⁻¹{1} = ∅, so F = {0} does not cover via A = {1}.
        assert_eq!(
            witness_statement_star(&m(2, &[0]), &[m(2, &[1])], &lz2),
            Err(TheoremError::Precondition(0))
        );
        let trace = witness_statement_star(&m(2, &[1]), &[m(2, &[1])], &lz2).unwrap();
        assert_eq!(trace.certificate.witness, ids(&[1]));
    }

    #[test]
    fn theorem2_examples() {
        let lz2 = left_zero(2);
        let t = witness_theorem2(&Partition::from_labels(&[0, 1]).unwrap(), &lz2).unwrap();
        assert_eq!(t.ideal, ids(&[0]));
        assert_eq!(t.group, ids(&[0]));
        assert_eq!(t.certificate.cell_index, 0);
        assert_eq!(t.certificate.witness, ids(&[0]));

        let z4 = cyclic(4);
        let t = witness_theorem2(&Partition::from_labels(&[0, 1, 2, 2]).unwrap(), &z4).unwrap();
        assert_eq!(t.cell_index, 2);
        assert_eq!(t.translates, ids(&[0, 2]));
        assert_eq!(t.group_witness, ids(&[0, 2]));
        assert_eq!(t.certificate.witness, ids(&[0, 2]));
        assert_eq!(delta(&m(4, &[2, 3]), &z4), m(4, &[0, 1, 3]));

        let z3 = cyclic(3);
        let t = witness_theorem2(&Partition::trivial(3), &z3).unwrap();
        assert_eq!(t.certificate.witness.len(), 1);
    }

    #[test]
    fn theorem3_examples() {
        let null = table(&[&[0, 0], &[0, 0]]);
        let w = witness_theorem3(&m(2, &[0]), &null).unwrap();
        assert_eq!(w.kind, ZeroKind::LeftZero);
        assert_eq!(w.witness, ids(&[0]));

        let rz2 = right_zero(2);
        let w = witness_theorem3(&m(2, &[1]), &rz2).unwrap();
        assert_eq!(w.kind, ZeroKind::RightZero);
        assert_eq!(delta(&m(2, &[1]), &rz2), rz2.full());
        assert_eq!(w.witness, ids(&[0]));

        let z3 = cyclic(3);
        assert_eq!(witness_theorem3(&m(3, &[1]), &z3), None);
        assert_eq!(
            witness_theorem3_partition(&Partition::from_labels(&[0, 1, 1]).unwrap(), &z3),
            Ok(None)
        );
        let (cert, _) = witness_theorem3_partition(&Partition::from_labels(&[0, 1]).unwrap(), &rz2)
            .unwrap()
            .unwrap();
        assert_eq!(cert.cell_index, 0);
    }
}
