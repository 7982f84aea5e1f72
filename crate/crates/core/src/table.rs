//! Finite semigroups as Cayley tables, and the elementary set translations
//! on their subsets.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mask::SubsetMask;

/// Largest order accepted by [`CayleyTable::new`].
pub const MAX_ORDER: usize = 4096;

/// Index of an element in `0..order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(u16);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ElementId {
    #[inline]
    fn from(i: usize) -> Self {
        debug_assert!(i < MAX_ORDER);
        ElementId(i as u16)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A triple `(i, j, k)` with `(i∘j)∘k != i∘(j∘k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AssociativityViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl fmt::Display for AssociativityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({i}*{j})*{k} != {i}*({j}*{k})", i = self.i, j = self.j, k = self.k)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("order must be positive")]
    EmptyTable,
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("expected {expected} entries for order {order}, found {found}")]
    WrongLength {
        order: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry {row}*{col} = {value} is outside 0..{order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("operation is not associative: {0}")]
    NotAssociative(AssociativityViolation),
}

/// A finite semigroup given by its multiplication table.
///
/// `products[i * order + j] = i∘j`. Construction checks ranges and
/// associativity, so every `CayleyTable` is a semigroup.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    order: usize,
    products: Vec<u16>,
}

fn check_entries(order: usize, products: &[usize]) -> Result<(), TableError> {
    if order == 0 {
        return Err(TableError::EmptyTable);
    }
    if order > MAX_ORDER {
        return Err(TableError::OrderTooLarge(order));
    }
    if products.len() != order * order {
        return Err(TableError::WrongLength {
            order,
            expected: order * order,
            found: products.len(),
        });
    }
    if let Some(pos) = products.iter().position(|&v| v >= order) {
        return Err(TableError::EntryOutOfRange {
            row: pos / order,
            col: pos % order,
            value: products[pos],
            order,
        });
    }
    Ok(())
}

/// Cubic associativity check over a raw, range-checked table. Reports the
/// lexicographically first violating triple.
pub fn brute_force_associativity(order: usize, products: &[usize]) -> Result<(), AssociativityViolation> {
    let mul = |a: usize, b: usize| products[a * order + b];
    for i in 0..order {
        for j in 0..order {
            let ij = mul(i, j);
            for k in 0..order {
                if mul(ij, k) != mul(i, mul(j, k)) {
                    return Err(AssociativityViolation { i, j, k });
                }
            }
        }
    }
    Ok(())
}

/// Light's associativity test with a caller-supplied generator set.
///
/// If `generators` generate the whole magma and `(x∘a)∘y = x∘(a∘y)` holds for
/// every generator `a`, the operation is associative. When the generators do
/// not generate, or a violation is found, the cubic check runs instead so the
/// reported triple is always the first one in `(i, j, k)` order.
pub fn validate_with_generators(
    order: usize,
    products: &[usize],
    generators: &[usize],
) -> Result<(), AssociativityViolation> {
    let mul = |a: usize, b: usize| products[a * order + b];
    if generators.iter().any(|&g| g >= order) || !generates_all(order, products, generators) {
        return brute_force_associativity(order, products);
    }
    for &a in generators {
        for x in 0..order {
            let xa = mul(x, a);
            for y in 0..order {
                if mul(xa, y) != mul(x, mul(a, y)) {
                    return brute_force_associativity(order, products);
                }
            }
        }
    }
    Ok(())
}

/// Associativity check for a raw table, using every element as a generator
/// in Light's test. Reports the first violating triple.
pub fn validate_table(order: usize, products: &[usize]) -> Result<(), AssociativityViolation> {
    let all: Vec<usize> = (0..order).collect();
    validate_with_generators(order, products, &all)
}

/// Closure of `generators` under the (not necessarily associative) product,
/// computed as the set of all left-nested words.
fn generates_all(order: usize, products: &[usize], generators: &[usize]) -> bool {
    let mut seen = vec![false; order];
    let mut stack: Vec<usize> = Vec::new();
    for &g in generators {
        if !seen[g] {
            seen[g] = true;
            stack.push(g);
        }
    }
    let mut reached: Vec<usize> = stack.clone();
    while let Some(w) = stack.pop() {
        let snapshot = reached.clone();
        for &v in &snapshot {
            for p in [products[w * order + v], products[v * order + w]] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                    reached.push(p);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

impl CayleyTable {
    /// Builds a table from row-major products, checking ranges and
    /// associativity.
    pub fn new(order: usize, products: Vec<usize>) -> Result<Self, TableError> {
        check_entries(order, &products)?;
        validate_table(order, &products).map_err(TableError::NotAssociative)?;
        Ok(Self::from_checked(order, &products))
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, TableError> {
        let order = rows.len();
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != order) {
            return Err(TableError::WrongLength {
                order,
                expected: order * order,
                found: row * order + r.len(),
            });
        }
        Self::new(order, rows.concat())
    }

    /// Builds a table whose entries are known to be in range and associative.
    pub(crate) fn from_checked(order: usize, products: &[usize]) -> Self {
        debug_assert!(check_entries(order, products).is_ok());
        CayleyTable {
            order,
            products: products.iter().map(|&v| v as u16).collect(),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.products[a * self.order + b] as usize
    }

    #[inline]
    pub fn product(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.products[a.index() * self.order + b.index()])
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        (0..self.order).map(ElementId::from)
    }

    pub fn row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.products[a * self.order..(a + 1) * self.order]
            .iter()
            .map(|&v| v as usize)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| self.row(a).collect()).collect()
    }

    /// Row-major products as plain indices.
    pub fn products(&self) -> Vec<usize> {
        self.products.iter().map(|&v| v as usize).collect()
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask::full(self.order)
    }

    pub fn empty(&self) -> SubsetMask {
        SubsetMask::empty(self.order)
    }

    /// The opposite semigroup, `x∘ᵒᵖy = y∘x`.
    pub fn transpose(&self) -> CayleyTable {
        let n = self.order;
        let products: Vec<usize> = (0..n * n).map(|p| self.mul(p % n, p / n)).collect();
        CayleyTable::from_checked(n, &products)
    }

    /// Relabels elements by `perm`, so that `perm[i]∘perm[j] = perm[i∘j]`
    /// in the result.
    pub fn relabel(&self, perm: &[usize]) -> CayleyTable {
        let n = self.order;
        assert_eq!(perm.len(), n);
        let mut products = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                products[perm[i] * n + perm[j]] = perm[self.mul(i, j)];
            }
        }
        CayleyTable::from_checked(n, &products)
    }

    /// `a⁻¹B = {x : a∘x ∈ B}`.
    pub fn left_quotient(&self, a: usize, b: &SubsetMask) -> SubsetMask {
        let mut out = self.empty();
        for (x, ax) in self.row(a).enumerate() {
            if b.contains(ax) {
                out.insert(x);
            }
        }
        out
    }

    /// `A⁻¹B`, the union of `a⁻¹B` over `a ∈ A`.
    pub fn set_quotient(&self, a: &SubsetMask, b: &SubsetMask) -> SubsetMask {
        let mut out = self.empty();
        for x in a {
            out.union_with(&self.left_quotient(x, b));
        }
        out
    }

    /// `A∘B = {a∘b : a ∈ A, b ∈ B}`.
    pub fn subset_product(&self, a: &SubsetMask, b: &SubsetMask) -> SubsetMask {
        let mut out = self.empty();
        for x in a {
            for y in b {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    /// Elements `a` with `a∘x = a` for every `x`.
    pub fn left_zeros(&self) -> SubsetMask {
        SubsetMask::from_indices(self.order, (0..self.order).filter(|&a| self.row(a).all(|v| v == a)))
    }

    /// Elements `a` with `x∘a = a` for every `x`.
    pub fn right_zeros(&self) -> SubsetMask {
        SubsetMask::from_indices(
            self.order,
            (0..self.order).filter(|&a| (0..self.order).all(|x| self.mul(x, a) == a)),
        )
    }

    pub fn idempotents(&self) -> SubsetMask {
        SubsetMask::from_indices(self.order, (0..self.order).filter(|&e| self.mul(e, e) == e))
    }
}

impl fmt::Debug for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CayleyTable")
            .field("order", &self.order)
            .field("rows", &self.rows())
            .finish()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition has {found} labels but the semigroup has order {order}")]
    WrongLength { order: usize, found: usize },
    #[error("cell {0} is empty")]
    EmptyCell(usize),
    #[error("cells {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("element {0} is not covered by any cell")]
    Uncovered(usize),
    #[error("cell {cell} has universe {found}, expected {order}")]
    UniverseMismatch { cell: usize, found: usize, order: usize },
}

/// An ordered list of pairwise disjoint, nonempty cells covering the whole
/// element set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    cells: Vec<SubsetMask>,
}

impl Partition {
    pub fn new(order: usize, cells: Vec<SubsetMask>) -> Result<Self, PartitionError> {
        let mut seen = SubsetMask::empty(order);
        for (c, cell) in cells.iter().enumerate() {
            if cell.universe() != order {
                return Err(PartitionError::UniverseMismatch {
                    cell: c,
                    found: cell.universe(),
                    order,
                });
            }
            if cell.is_empty() {
                return Err(PartitionError::EmptyCell(c));
            }
            if seen.intersects(cell) {
                let x = seen.intersection(cell).first().unwrap_or(0);
                let other = cells.iter().position(|o| o.contains(x)).unwrap_or(0);
                return Err(PartitionError::Overlap(other, c));
            }
            seen.union_with(cell);
        }
        if let Some(x) = seen.complement().first() {
            return Err(PartitionError::Uncovered(x));
        }
        Ok(Partition { cells })
    }

    /// Builds a partition from block labels, one per element. Cells are
    /// ordered by first appearance of their label, so the result does not
    /// depend on the label values themselves.
    pub fn from_labels(labels: &[usize]) -> Result<Self, PartitionError> {
        let order = labels.len();
        let mut order_of_label: Vec<usize> = Vec::new();
        let mut cells: Vec<SubsetMask> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            let c = match order_of_label.iter().position(|&seen| seen == l) {
                Some(c) => c,
                None => {
                    order_of_label.push(l);
                    cells.push(SubsetMask::empty(order));
                    cells.len() - 1
                }
            };
            cells[c].insert(x);
        }
        Partition::new(order, cells)
    }

    /// The single-cell partition `{S}`.
    pub fn trivial(order: usize) -> Self {
        Partition {
            cells: vec![SubsetMask::full(order)],
        }
    }

    pub fn cells(&self) -> &[SubsetMask] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &SubsetMask {
        &self.cells[i]
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn order(&self) -> usize {
        self.cells.first().map_or(0, SubsetMask::universe)
    }

    /// Restricted-growth labels: element `x` gets the index of its cell.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.order()];
        for (c, cell) in self.cells.iter().enumerate() {
            for x in cell {
                labels[x] = c;
            }
        }
        labels
    }

    /// Image of the partition under the relabeling `x ↦ perm[x]`, keeping
    /// cell order.
    pub fn relabel(&self, perm: &[usize]) -> Partition {
        let order = self.order();
        Partition {
            cells: self
                .cells
                .iter()
                .map(|c| SubsetMask::from_indices(order, c.iter().map(|x| perm[x])))
                .collect(),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::CayleyTable;

    pub fn table(rows: &[&[usize]]) -> CayleyTable {
        CayleyTable::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    pub fn cyclic(n: usize) -> CayleyTable {
        let products = (0..n * n).map(|p| (p / n + p % n) % n).collect();
        CayleyTable::new(n, products).unwrap()
    }

    pub fn left_zero(n: usize) -> CayleyTable {
        CayleyTable::new(n, (0..n * n).map(|p| p / n).collect()).unwrap()
    }

    pub fn right_zero(n: usize) -> CayleyTable {
        CayleyTable::new(n, (0..n * n).map(|p| p % n).collect()).unwrap()
    }

    /// Z₂ × RZ₂ with 0=(0,a), 1=(1,a), 2=(0,b), 3=(1,b).
    pub fn z2_times_rz2() -> CayleyTable {
        let enc = |g: usize, i: usize| g + 2 * i;
        let mut products = vec![0; 16];
        for x in 0..4 {
            for y in 0..4 {
                let (gx, _) = (x % 2, x / 2);
                let (gy, iy) = (y % 2, y / 2);
                products[x * 4 + y] = enc((gx + gy) % 2, iy);
            }
        }
        CayleyTable::new(4, products).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn m(order: usize, xs: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(order, xs.iter().copied())
    }

    #[test]
    fn accepts_small_semigroups() {
        for rows in [
            vec![vec![0, 0], vec![1, 1]],
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        ] {
            let products = rows.concat();
            assert_eq!(brute_force_associativity(rows.len(), &products), Ok(()));
            assert!(CayleyTable::from_rows(&rows).is_ok());
        }
    }

    #[test]
    fn reports_first_violating_triple() {
        // x∘y = 1 - x is not associative: (0∘0)∘0 = 0, 0∘(0∘0) = 1.
        let err = CayleyTable::from_rows(&[vec![1, 1], vec![0, 0]]).unwrap_err();
        assert_eq!(
            err,
            TableError::NotAssociative(AssociativityViolation { i: 0, j: 0, k: 0 })
        );
    }

    #[test]
    fn generator_hint_agrees_with_cubic_check() {
        let z4 = cyclic(4).products();
        assert_eq!(validate_with_generators(4, &z4, &[1]), Ok(()));
        // {0} alone does not generate Z4, so the cubic fallback decides.
        assert_eq!(validate_with_generators(4, &z4, &[0]), Ok(()));
        let bad = vec![1, 1, 0, 0];
        assert_eq!(
            validate_with_generators(2, &bad, &[0]),
            brute_force_associativity(2, &bad)
        );
    }

    #[test]
    fn rejects_malformed_entries() {
        assert_eq!(
            CayleyTable::new(2, vec![0, 2, 0, 0]),
            Err(TableError::EntryOutOfRange {
                row: 0,
                col: 1,
                value: 2,
                order: 2
            })
        );
        assert!(matches!(CayleyTable::new(0, vec![]), Err(TableError::EmptyTable)));
        assert!(matches!(
            CayleyTable::new(MAX_ORDER + 1, vec![]),
            Err(TableError::OrderTooLarge(_))
        ));
        assert!(matches!(
            CayleyTable::new(2, vec![0, 0, 0]),
            Err(TableError::WrongLength { .. })
        ));
    }

    #[test]
    fn left_quotients() {
        let z3 = cyclic(3);
        assert_eq!(z3.left_quotient(1, &m(3, &[0])), m(3, &[2]));
        assert_eq!(z3.left_quotient(2, &z3.full()), z3.full());
        let lz2 = left_zero(2);
        assert_eq!(lz2.left_quotient(0, &m(2, &[0])), lz2.full());
    }

    #[test]
    fn set_quotients() {
        let z3 = cyclic(3);
        assert!(z3.set_quotient(&z3.empty(), &m(3, &[0])).is_empty());
        assert_eq!(z3.set_quotient(&m(3, &[1, 2]), &m(3, &[0])), m(3, &[1, 2]));
        assert_eq!(
            z3.set_quotient(&m(3, &[1]), &m(3, &[0, 1])),
            z3.left_quotient(1, &m(3, &[0, 1]))
        );
    }

    #[test]
    fn subset_products() {
        let z3 = cyclic(3);
        assert_eq!(z3.subset_product(&m(3, &[1]), &m(3, &[1, 2])), m(3, &[0, 2]));
        assert!(z3.subset_product(&z3.empty(), &z3.full()).is_empty());
        assert!(z3.subset_product(&z3.full(), &z3.empty()).is_empty());
        let rz2 = right_zero(2);
        assert_eq!(rz2.subset_product(&rz2.full(), &m(2, &[0])), m(2, &[0]));
    }

    #[test]
    fn zeros_and_idempotents() {
        let lz2 = left_zero(2);
        assert_eq!(lz2.left_zeros(), m(2, &[0, 1]));
        assert!(lz2.right_zeros().is_empty());
        assert_eq!(lz2.idempotents(), m(2, &[0, 1]));

        let z3 = cyclic(3);
        assert!(z3.left_zeros().is_empty());
        assert!(z3.right_zeros().is_empty());
        assert_eq!(z3.idempotents(), m(3, &[0]));

        let constant = table(&[&[0, 0], &[0, 0]]);
        assert_eq!(constant.left_zeros(), m(2, &[0]));
        assert_eq!(constant.right_zeros(), m(2, &[0]));
        assert_eq!(constant.idempotents(), m(2, &[0]));
    }

    #[test]
    fn transpose_and_relabel() {
        assert_eq!(left_zero(3).transpose(), right_zero(3));
        let z4 = cyclic(4);
        let perm = [2, 0, 3, 1];
        let r = z4.relabel(&perm);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(r.mul(perm[i], perm[j]), perm[z4.mul(i, j)]);
            }
        }
    }

    #[test]
    fn partitions_from_labels() {
        let p = Partition::from_labels(&[1, 0, 1, 2]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.cell(0), &m(4, &[0, 2]));
        assert_eq!(p.labels(), vec![0, 1, 0, 2]);
        assert_eq!(
            Partition::new(2, vec![m(2, &[0]), m(2, &[0, 1])]),
            Err(PartitionError::Overlap(0, 1))
        );
        assert_eq!(Partition::new(2, vec![m(2, &[0])]), Err(PartitionError::Uncovered(1)));
        assert_eq!(
            Partition::new(2, vec![m(2, &[0, 1]), m(2, &[])]),
            Err(PartitionError::EmptyCell(1))
        );
    }
}
