//! Streams of small semigroups (up to isomorphism) and of set partitions.
//!
//! Semigroups are generated cell by cell in row-major order. Each assignment
//! is checked against every associativity triple it completes, and, when
//! deduplicating, each finished row is checked for lexicographic minimality
//! under all relabelings. Only tables equal to their own [`CanonicalKey`]
//! are emitted, so each isomorphism class appears exactly once.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::table::{CayleyTable, Partition};

/// Largest order accepted by [`SemigroupEnumerator`].
pub const MAX_ENUMERATION_ORDER: usize = 6;
/// Largest order accepted by [`canonical_key`] (`order!` relabelings).
pub const MAX_CANONICAL_ORDER: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("order {0} is outside 1..={MAX_ENUMERATION_ORDER}")]
    OrderOutOfRange(usize),
    #[error("canonical keys are limited to order {MAX_CANONICAL_ORDER}, got {0}")]
    CanonicalOrderTooLarge(usize),
    #[error("cell count {blocks} is outside 1..={order}")]
    BlockCountOutOfRange { order: usize, blocks: usize },
}

/// The lexicographically smallest row-major table over all relabelings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn order(&self) -> usize {
        self.0.len().isqrt()
    }

    /// The canonical representative itself.
    pub fn to_table(&self) -> CayleyTable {
        CayleyTable::from_checked(self.order(), &self.products())
    }

    pub fn products(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize).collect()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed canonical key `{0}`")]
pub struct KeyParseError(pub String);

impl FromStr for CanonicalKey {
    type Err = KeyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || KeyParseError(s.to_string());
        let rows: Vec<&str> = s.split('|').collect();
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            let entries: Vec<u8> = if row.contains(',') {
                row.split(',')
                    .map(|t| t.parse::<u8>().map_err(|_| err()))
                    .collect::<Result<_, _>>()?
            } else {
                row.chars()
                    .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(err))
                    .collect::<Result<_, _>>()?
            };
            if entries.len() != n || entries.iter().any(|&v| v as usize >= n) {
                return Err(err());
            }
            cells.extend(entries);
        }
        Ok(CanonicalKey(cells))
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({self})")
    }
}

/// Rows separated by `|`, e.g. `01|11`.
impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.order().max(1);
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 && i % n == 0 {
                write!(f, "|")?;
            }
            if n > 10 && i % n != 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// All permutations of `0..n` in Heap's order, each paired with its inverse.
fn permutations(n: usize) -> Vec<(Vec<u8>, Vec<u8>)> {
    let mut perm: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::new();
    let mut c = vec![0usize; n];
    let push = |p: &Vec<u8>, out: &mut Vec<(Vec<u8>, Vec<u8>)>| {
        let mut inv = vec![0u8; p.len()];
        for (i, &v) in p.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        out.push((p.clone(), inv));
    };
    push(&perm, &mut out);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            push(&perm, &mut out);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

pub fn canonical_key(table: &CayleyTable) -> Result<CanonicalKey, EnumerationError> {
    let n = table.order();
    if n > MAX_CANONICAL_ORDER {
        return Err(EnumerationError::CanonicalOrderTooLarge(n));
    }
    let cells: Vec<u8> = table.products().into_iter().map(|v| v as u8).collect();
    let mut best = cells.clone();
    let mut candidate = vec![0u8; n * n];
    for (perm, inv) in permutations(n) {
        // Relabeled table: entry (p, q) is perm[T[inv p][inv q]].
        let mut smaller = false;
        for pos in 0..n * n {
            let (p, q) = (pos / n, pos % n);
            let v = perm[cells[inv[p] as usize * n + inv[q] as usize] as usize];
            candidate[pos] = v;
            if !smaller {
                match v.cmp(&best[pos]) {
                    std::cmp::Ordering::Less => smaller = true,
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        if smaller {
            best.copy_from_slice(&candidate);
        }
    }
    Ok(CanonicalKey(best))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Emit one table per isomorphism class.
    pub up_to_iso: bool,
    /// With `up_to_iso`, also merge each class with its opposite (transposed)
    /// class, emitting the smaller canonical table of the two.
    pub include_anti_iso_dedup: bool,
}

impl EnumerationOptions {
    pub fn up_to_iso() -> Self {
        EnumerationOptions {
            up_to_iso: true,
            include_anti_iso_dedup: false,
        }
    }

    pub fn up_to_iso_and_anti_iso() -> Self {
        EnumerationOptions {
            up_to_iso: true,
            include_anti_iso_dedup: true,
        }
    }
}

const UNSET: u8 = u8::MAX;

/// Backtracking stream of semigroup tables of a fixed order.
pub struct SemigroupEnumerator {
    n: usize,
    options: EnumerationOptions,
    cells: Vec<u8>,
    pos: usize,
    exhausted: bool,
    perms: Vec<(Vec<u8>, Vec<u8>)>,
}

pub fn enumerate_semigroups(
    order: usize,
    options: EnumerationOptions,
) -> Result<SemigroupEnumerator, EnumerationError> {
    if !(1..=MAX_ENUMERATION_ORDER).contains(&order) {
        return Err(EnumerationError::OrderOutOfRange(order));
    }
    let perms = if options.up_to_iso {
        permutations(order)
    } else {
        Vec::new()
    };
    Ok(SemigroupEnumerator {
        n: order,
        options,
        cells: vec![UNSET; order * order],
        pos: 0,
        exhausted: false,
        perms,
    })
}

impl SemigroupEnumerator {
    #[inline]
    fn get(&self, x: usize, y: usize) -> Option<usize> {
        let v = self.cells[x * self.n + y];
        (v != UNSET).then_some(v as usize)
    }

    /// Checks every associativity triple in which cell `pos` takes part and
    /// whose other lookups are all assigned.
    fn consistent(&self, pos: usize) -> bool {
        let n = self.n;
        let (i, j) = (pos / n, pos % n);
        let v = self.cells[pos] as usize;
        let differ = |a: Option<usize>, b: Option<usize>| matches!((a, b), (Some(a), Some(b)) if a != b);
        for z in 0..n {
            // (i∘j)∘z = i∘(j∘z)
            if differ(self.get(v, z), self.get(j, z).and_then(|jz| self.get(i, jz))) {
                return false;
            }
            // (z∘i)∘j = z∘(i∘j)
            if differ(self.get(z, i).and_then(|zi| self.get(zi, j)), self.get(z, v)) {
                return false;
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = self.get(x, y);
                // (x∘y)∘j with x∘y = i
                if xy == Some(i) && differ(Some(v), self.get(y, j).and_then(|yj| self.get(x, yj))) {
                    return false;
                }
                // i∘(x∘y) with x∘y = j
                if xy == Some(j) && differ(self.get(i, x).and_then(|ix| self.get(ix, y)), Some(v)) {
                    return false;
                }
            }
        }
        true
    }

    /// False when some relabeling is already known to give a smaller table
    /// for every completion of the current prefix.
    fn prefix_minimal(&self) -> bool {
        let n = self.n;
        'perms: for (perm, inv) in &self.perms {
            for pos in 0..n * n {
                let mine = self.cells[pos];
                if mine == UNSET {
                    continue 'perms;
                }
                let (p, q) = (pos / n, pos % n);
                let src = self.cells[inv[p] as usize * n + inv[q] as usize];
                if src == UNSET {
                    continue 'perms;
                }
                let theirs = perm[src as usize];
                match theirs.cmp(&mine) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => continue 'perms,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }

    fn current_table(&self) -> CayleyTable {
        let products: Vec<usize> = self.cells.iter().map(|&v| v as usize).collect();
        CayleyTable::from_checked(self.n, &products)
    }

    fn accept(&self) -> bool {
        if !(self.options.up_to_iso && self.options.include_anti_iso_dedup) {
            return true;
        }
        let table = self.current_table();
        let opposite = canonical_key(&table.transpose()).expect("order within canonical range");
        self.cells <= opposite.0
    }
}

impl Iterator for SemigroupEnumerator {
    type Item = CayleyTable;

    fn next(&mut self) -> Option<CayleyTable> {
        let n = self.n;
        let total = n * n;
        while !self.exhausted {
            let cur = self.cells[self.pos];
            let v = if cur == UNSET { 0 } else { cur as usize + 1 };
            if v >= n {
                self.cells[self.pos] = UNSET;
                if self.pos == 0 {
                    self.exhausted = true;
                    return None;
                }
                self.pos -= 1;
                continue;
            }
            self.cells[self.pos] = v as u8;
            if !self.consistent(self.pos) {
                continue;
            }
            let row_end = (self.pos + 1).is_multiple_of(n);
            if self.options.up_to_iso && row_end && !self.prefix_minimal() {
                continue;
            }
            if self.pos + 1 == total {
                if self.accept() {
                    return Some(self.current_table());
                }
                continue;
            }
            self.pos += 1;
            self.cells[self.pos] = UNSET;
        }
        None
    }
}

/// Restricted-growth string: `code[i]` is the cell of element `i`, with
/// labels appearing in increasing order starting from 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartitionCode(pub Vec<usize>);

impl PartitionCode {
    pub fn is_normal(&self) -> bool {
        let mut next = 0;
        for &c in &self.0 {
            if c > next {
                return false;
            }
            if c == next {
                next += 1;
            }
        }
        true
    }

    /// Relabels cells in order of first appearance.
    pub fn normalized(&self) -> PartitionCode {
        let mut seen: Vec<usize> = Vec::new();
        PartitionCode(
            self.0
                .iter()
                .map(|&c| match seen.iter().position(|&s| s == c) {
                    Some(i) => i,
                    None => {
                        seen.push(c);
                        seen.len() - 1
                    }
                })
                .collect(),
        )
    }

    pub fn blocks(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_labels(&self.0).expect("a label list always forms a partition")
    }

    pub fn from_partition(p: &Partition) -> PartitionCode {
        PartitionCode(p.labels())
    }
}

impl fmt::Display for PartitionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Restricted-growth strings with exactly `blocks` labels, in lexicographic
/// order.
pub struct PartitionCodes {
    order: usize,
    blocks: usize,
    current: Option<Vec<usize>>,
}

impl PartitionCodes {
    fn new(order: usize, blocks: usize) -> Self {
        let first = (blocks >= 1 && blocks <= order).then(|| {
            let mut code = vec![0; order];
            for (label, slot) in code[order - blocks + 1..].iter_mut().enumerate() {
                *slot = label + 1;
            }
            code
        });
        PartitionCodes {
            order,
            blocks,
            current: first,
        }
    }

    fn advance(code: &mut [usize], blocks: usize) -> bool {
        let len = code.len();
        for i in (1..len).rev() {
            let prefix_max = code[..i].iter().copied().max().unwrap_or(0);
            let v = code[i] + 1;
            if v > prefix_max + 1 || v >= blocks {
                continue;
            }
            let used = prefix_max.max(v) + 1;
            let remaining = len - i - 1;
            if blocks - used > remaining {
                continue;
            }
            code[i] = v;
            let zeros = remaining - (blocks - used);
            for (k, slot) in code[i + 1..].iter_mut().enumerate() {
                *slot = if k < zeros { 0 } else { used + (k - zeros) };
            }
            return true;
        }
        false
    }
}

impl Iterator for PartitionCodes {
    type Item = PartitionCode;

    fn next(&mut self) -> Option<PartitionCode> {
        let code = self.current.take()?;
        let mut following = code.clone();
        if Self::advance(&mut following, self.blocks) {
            self.current = Some(following);
        }
        debug_assert_eq!(code.len(), self.order);
        Some(PartitionCode(code))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellCount {
    Exact(usize),
    All,
}

/// Partition codes of `0..order`: exactly `n` cells, or every cell count
/// from 1 to `order` in turn.
pub fn partition_codes(
    order: usize,
    cells: CellCount,
) -> Result<Box<dyn Iterator<Item = PartitionCode> + Send>, EnumerationError> {
    match cells {
        CellCount::Exact(blocks) => {
            if blocks == 0 || blocks > order {
                return Err(EnumerationError::BlockCountOutOfRange { order, blocks });
            }
            Ok(Box::new(PartitionCodes::new(order, blocks)))
        }
        CellCount::All => Ok(Box::new((1..=order).flat_map(move |b| PartitionCodes::new(order, b)))),
    }
}

pub fn enumerate_partitions(
    order: usize,
    cells: CellCount,
) -> Result<impl Iterator<Item = Partition>, EnumerationError> {
    Ok(partition_codes(order, cells)?.map(|c| c.to_partition()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::fixtures::*;

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
        let mut ps: Vec<Vec<u8>> = permutations(5).into_iter().map(|p| p.0).collect();
        ps.sort();
        ps.dedup();
        assert_eq!(ps.len(), 120);
    }

    #[test]
    fn left_and_right_zero_keys_differ() {
        let lz = canonical_key(&left_zero(2)).unwrap();
        let rz = canonical_key(&right_zero(2)).unwrap();
        assert_ne!(lz, rz);
        assert_eq!(lz.0, vec![0, 0, 1, 1]);
        assert_eq!(rz.0, vec![0, 1, 0, 1]);
    }

    #[test]
    fn z3_has_one_key() {
        let z3 = cyclic(3);
        let key = canonical_key(&z3).unwrap();
        for (perm, _) in permutations(3) {
            let perm: Vec<usize> = perm.iter().map(|&v| v as usize).collect();
            assert_eq!(canonical_key(&z3.relabel(&perm)).unwrap(), key);
        }
        assert_eq!(key.to_string(), "012|120|201");
        assert_eq!("012|120|201".parse::<CanonicalKey>().unwrap(), key);
        assert!("01|1".parse::<CanonicalKey>().is_err());
        assert!("02|11".parse::<CanonicalKey>().is_err());
    }

    #[test]
    fn small_orders() {
        assert_eq!(
            enumerate_semigroups(1, EnumerationOptions::up_to_iso())
                .unwrap()
                .count(),
            1
        );
        assert_eq!(
            enumerate_semigroups(2, EnumerationOptions::up_to_iso())
                .unwrap()
                .count(),
            5
        );
        assert_eq!(
            enumerate_semigroups(2, EnumerationOptions::up_to_iso_and_anti_iso())
                .unwrap()
                .count(),
            4
        );
        // Labeled semigroups on two elements.
        assert_eq!(
            enumerate_semigroups(2, EnumerationOptions::default()).unwrap().count(),
            8
        );
        assert!(enumerate_semigroups(0, EnumerationOptions::default()).is_err());
        assert!(enumerate_semigroups(7, EnumerationOptions::default()).is_err());
    }

    #[test]
    fn emitted_tables_are_canonical() {
        for t in enumerate_semigroups(3, EnumerationOptions::up_to_iso()).unwrap() {
            assert_eq!(
                canonical_key(&t).unwrap().0,
                t.products().iter().map(|&v| v as u8).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partition_codes(4, CellCount::All).unwrap().count(), 15);
        assert_eq!(partition_codes(3, CellCount::Exact(3)).unwrap().count(), 1);
        let two: Vec<_> = partition_codes(3, CellCount::Exact(2)).unwrap().collect();
        assert_eq!(
            two,
            vec![
                PartitionCode(vec![0, 0, 1]),
                PartitionCode(vec![0, 1, 0]),
                PartitionCode(vec![0, 1, 1])
            ]
        );
        assert_eq!(partition_codes(6, CellCount::All).unwrap().count(), 203);
        assert!(partition_codes(3, CellCount::Exact(4)).is_err());
        assert!(partition_codes(3, CellCount::Exact(0)).is_err());
    }

    #[test]
    fn code_normalization() {
        let c = PartitionCode(vec![2, 0, 2, 1]);
        assert!(!c.is_normal());
        assert_eq!(c.normalized(), PartitionCode(vec![0, 1, 0, 2]));
        assert!(c.normalized().is_normal());
        assert_eq!(c.normalized().blocks(), 3);
    }
}
