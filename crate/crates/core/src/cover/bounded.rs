use std::collections::BTreeSet;

use super::{Budget, Cover};
use crate::bits::DenseBits;
use crate::error::{Error, Result};

/// Node limit for the exact subfamily search on lazy covers.
pub const DEFAULT_NODE_LIMIT: usize = 2_000_000;

/// Finds at most `budget` members of `cover` whose union contains `points`.
///
/// Finite covers are searched exhaustively and the returned subfamily has
/// minimum size. Lazy covers run greedy first; if greedy exceeds the budget an
/// exact search follows, and hitting its node limit is reported as
/// [`Error::SearchLimit`] rather than a wrong "absent".
pub fn bounded_by<C: Cover>(
    cover: &C,
    points: &[C::Point],
    budget: Budget,
) -> Result<Option<Vec<C::Member>>> {
    bounded_by_with_limit(cover, points, budget, DEFAULT_NODE_LIMIT)
}

pub fn bounded_by_with_limit<C: Cover>(
    cover: &C,
    points: &[C::Point],
    budget: Budget,
    node_limit: usize,
) -> Result<Option<Vec<C::Member>>> {
    let points: Vec<C::Point> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if points.is_empty() {
        return Ok(Some(Vec::new()));
    }
    if budget == Budget::Finite(0) {
        return Ok(None);
    }

    let mut candidates: BTreeSet<C::Member> = BTreeSet::new();
    for p in &points {
        let ms = cover.members_containing(p);
        if ms.is_empty() {
            return Ok(None);
        }
        candidates.extend(ms);
    }
    let candidates: Vec<C::Member> = candidates.into_iter().collect();
    let n = points.len();
    let rows: Vec<DenseBits> = candidates
        .iter()
        .map(|m| {
            let mut b = DenseBits::zeros(n);
            for (i, p) in points.iter().enumerate() {
                if cover.contains(m, p) {
                    b.set(i);
                }
            }
            b
        })
        .collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, row) in rows.iter().enumerate() {
        for i in row.iter_ones() {
            containing[i].push(c);
        }
    }

    let greedy = greedy_cover(&rows, n);
    let exact = cover.is_exact();
    let target = match budget {
        Budget::Finite(b) => b,
        Budget::Unbounded => greedy.len(),
    };

    let chosen = if !exact && greedy.len() <= target {
        Some(greedy)
    } else {
        let max_k = target.min(greedy.len());
        let mut search = ExactSearch {
            rows: &rows,
            containing: &containing,
            max_row: rows.iter().map(DenseBits::count).max().unwrap_or(0),
            nodes: 0,
            limit: if exact { usize::MAX } else { node_limit },
        };
        let mut found = None;
        for k in 1..=max_k {
            let mut stack = Vec::with_capacity(k);
            if search.run(&DenseBits::ones(n), k, &mut stack)? {
                found = Some(stack);
                break;
            }
        }
        found
    };

    Ok(chosen.map(|idx| {
        let mut ms: Vec<C::Member> = idx.into_iter().map(|i| candidates[i].clone()).collect();
        ms.sort();
        ms
    }))
}

fn greedy_cover(rows: &[DenseBits], n: usize) -> Vec<usize> {
    let mut uncovered = DenseBits::ones(n);
    let mut out = Vec::new();
    while !uncovered.none() {
        let (best, gain) = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.and_count(&uncovered)))
            .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        debug_assert!(gain > 0, "every point has a candidate");
        out.push(best);
        uncovered.and_not_assign(&rows[best]);
    }
    out
}

struct ExactSearch<'a> {
    rows: &'a [DenseBits],
    containing: &'a [Vec<usize>],
    max_row: usize,
    nodes: usize,
    limit: usize,
}

impl ExactSearch<'_> {
    fn run(&mut self, uncovered: &DenseBits, k: usize, stack: &mut Vec<usize>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::SearchLimit(self.limit));
        }
        let Some(p) = uncovered.first_one() else {
            return Ok(true);
        };
        if k == 0 || uncovered.count() > k * self.max_row {
            return Ok(false);
        }
        for &c in &self.containing[p] {
            let mut next = uncovered.clone();
            next.and_not_assign(&self.rows[c]);
            stack.push(c);
            if self.run(&next, k - 1, stack)? {
                return Ok(true);
            }
            stack.pop();
        }
        Ok(false)
    }
}
