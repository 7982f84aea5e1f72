//! Minimum set cover over bit-mask rows.
//!
//! Rows are candidate sets over a common universe. The solver finds a
//! minimum-size selection of rows whose union contains a target set, by
//! branch and bound: greedy incumbent, dominance reduction on rows, and
//! branching on the uncovered element with the fewest candidate rows.

use crate::mask::SubsetMask;

/// Greedy cover: repeatedly take the row covering the most uncovered target
/// elements, ties to the lowest row index. `None` if the rows cannot cover.
pub fn greedy_cover(rows: &[SubsetMask], target: &SubsetMask) -> Option<Vec<usize>> {
    let mut uncovered = target.clone();
    let mut picked = Vec::new();
    while !uncovered.is_empty() {
        let (best, gain) = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.intersection_count(&uncovered)))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if gain == 0 {
            return None;
        }
        uncovered.difference_with(&rows[best]);
        picked.push(best);
    }
    picked.sort_unstable();
    Some(picked)
}

/// Drops rows that are subsets of another row, keeping the lowest index of
/// equal rows. Returns surviving row indices in ascending order.
fn undominated(rows: &[SubsetMask], candidates: &[usize], target: &SubsetMask) -> Vec<usize> {
    let restricted: Vec<SubsetMask> = candidates.iter().map(|&i| rows[i].intersection(target)).collect();
    let mut keep = Vec::new();
    'outer: for (a, ra) in restricted.iter().enumerate() {
        if ra.is_empty() {
            continue;
        }
        for (b, rb) in restricted.iter().enumerate() {
            if a != b && ra.is_subset(rb) && (ra != rb || b < a) {
                continue 'outer;
            }
        }
        keep.push(candidates[a]);
    }
    keep
}

struct Search<'a> {
    rows: &'a [SubsetMask],
    candidates: Vec<usize>,
    max_row: usize,
    best: Option<Vec<usize>>,
    /// Exclusive size limit: only covers strictly smaller than this count.
    limit: usize,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, uncovered: &SubsetMask) {
        if uncovered.is_empty() {
            if self.chosen.len() < self.limit {
                self.limit = self.chosen.len();
                let mut found = self.chosen.clone();
                found.sort_unstable();
                self.best = Some(found);
            }
            return;
        }
        let lower = self.chosen.len() + uncovered.count().div_ceil(self.max_row.max(1));
        if lower >= self.limit {
            return;
        }
        // Branch on the uncovered element with the fewest covering rows.
        let mut pivot: Option<(usize, usize)> = None;
        for x in uncovered {
            let k = self.candidates.iter().filter(|&&r| self.rows[r].contains(x)).count();
            if k == 0 {
                return;
            }
            if pivot.is_none_or(|(_, best)| k < best) {
                pivot = Some((x, k));
            }
        }
        let Some((x, _)) = pivot else { return };
        let mut branches: Vec<usize> = self
            .candidates
            .iter()
            .copied()
            .filter(|&r| self.rows[r].contains(x))
            .collect();
        branches.sort_by_key(|&r| std::cmp::Reverse(self.rows[r].intersection_count(uncovered)));
        for r in branches {
            self.chosen.push(r);
            let rest = uncovered.difference(&self.rows[r]);
            self.run(&rest);
            self.chosen.pop();
        }
    }
}

/// A cover of `target` by at most `limit - 1` rows drawn from `candidates`,
/// of minimum size among such covers; `None` if none exists.
fn solve_below(rows: &[SubsetMask], candidates: &[usize], target: &SubsetMask, limit: usize) -> Option<Vec<usize>> {
    if target.is_empty() {
        return (limit > 0).then(Vec::new);
    }
    let candidates = undominated(rows, candidates, target);
    let max_row = candidates
        .iter()
        .map(|&r| rows[r].intersection_count(target))
        .max()
        .unwrap_or(0);
    let mut search = Search {
        rows,
        candidates,
        max_row,
        best: None,
        limit,
        chosen: Vec::new(),
    };
    search.run(target);
    search.best
}

/// Minimum number of rows covering `target`, or `None` if the rows cannot
/// cover it.
pub fn min_cover_size(rows: &[SubsetMask], target: &SubsetMask) -> Option<usize> {
    let greedy = greedy_cover(rows, target)?;
    let all: Vec<usize> = (0..rows.len()).collect();
    Some(match solve_below(rows, &all, target, greedy.len()) {
        Some(better) => better.len(),
        None => greedy.len(),
    })
}

/// The lexicographically smallest ascending index list among all
/// minimum-size covers of `target`.
pub fn lex_min_cover(rows: &[SubsetMask], target: &SubsetMask) -> Option<Vec<usize>> {
    let size = min_cover_size(rows, target)?;
    let mut picked = Vec::with_capacity(size);
    let mut uncovered = target.clone();
    let mut next = 0;
    while picked.len() < size {
        let remaining = size - picked.len();
        let chosen = (next..rows.len()).find(|&r| {
            let rest = uncovered.difference(&rows[r]);
            let later: Vec<usize> = (r + 1..rows.len()).collect();
            solve_below(rows, &later, &rest, remaining).is_some()
        });
        let r = chosen.expect("a cover of the minimum size exists");
        uncovered.difference_with(&rows[r]);
        picked.push(r);
        next = r + 1;
    }
    debug_assert!(uncovered.is_empty());
    Some(picked)
}
