//! Exhaustive small-instance corpus: finite multicovered spaces with
//! antichain covers, deduplicated up to relabeling the points, paired with
//! cover games of every horizon.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::PointSet;
use crate::cover::{Budget, FiniteCover, FiniteSpace};
use crate::error::{Error, Result};
use crate::format::{explicit, Document};
use crate::game::{GameConfig, WinKind};

pub const MAX_POINTS: usize = 6;
pub const MAX_COVERS: usize = 3;
pub const MAX_MEMBERS: usize = 6;
pub const MAX_HORIZON: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CorpusParams {
    pub max_points: usize,
    pub max_covers: usize,
    pub max_members: usize,
    /// Spaces with more points than this get a single cover.
    pub multi_cover_points: usize,
    pub max_horizon: usize,
    pub budget: usize,
}

impl Default for CorpusParams {
    /// The acceptance corpus.
    fn default() -> Self {
        CorpusParams {
            max_points: 5,
            max_covers: 2,
            max_members: 5,
            multi_cover_points: 4,
            max_horizon: 4,
            budget: 1,
        }
    }
}

impl CorpusParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.max_points, MAX_POINTS, "points"),
            (self.max_covers, MAX_COVERS, "covers"),
            (self.max_members, MAX_MEMBERS, "members per cover"),
            (self.max_horizon, MAX_HORIZON, "horizon"),
        ];
        for (v, max, what) in checks {
            if v == 0 || v > max {
                return Err(Error::CorpusLimit(format!("{what} {v} outside 1..={max}")));
            }
        }
        Ok(())
    }
}

/// One corpus entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    pub space: FiniteSpace,
    pub config: GameConfig,
}

impl Instance {
    pub fn document(&self) -> Document {
        Document {
            version: crate::format::FORMAT_VERSION,
            space: explicit(&self.space),
            probe: None,
            game: Some(self.config.clone()),
        }
    }

    pub fn fingerprint(&self) -> String {
        crate::format::fingerprint_bytes(self.document().to_json().as_bytes())
    }
}

type Canon = Vec<Vec<u128>>;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Per permutation, the image of every subset mask.
fn mask_tables(n: usize) -> Vec<Vec<u128>> {
    permutations(n)
        .into_iter()
        .map(|p| {
            (0..1u128 << n)
                .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << p[i]))
                .collect()
        })
        .collect()
}

/// All antichain covers of `n` points with at most `max_members` members, as sorted masks.
pub fn antichain_covers(n: usize, max_members: usize) -> Vec<Vec<u128>> {
    fn go(n: usize, next: u128, max: usize, cur: &mut Vec<u128>, out: &mut Vec<Vec<u128>>) {
        let full = (1u128 << n) - 1;
        if cur.iter().fold(0, |a, &m| a | m) == full {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for m in next..=full {
            if cur.iter().all(|&c| c & m != c && c & m != m) {
                cur.push(m);
                go(n, m + 1, max, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, 1, max_members, &mut Vec::new(), &mut out);
    out
}

fn canonical(covers: &[Vec<u128>], tables: &[Vec<u128>]) -> Canon {
    tables
        .iter()
        .map(|t| {
            let mut c: Canon = covers
                .iter()
                .map(|cov| {
                    let mut m: Vec<u128> = cov.iter().map(|&x| t[x as usize]).collect();
                    m.sort_unstable();
                    m
                })
                .collect();
            c.sort();
            c
        })
        .min()
        .expect("at least one permutation")
}

/// Canonical multicovers on `n` points with exactly `k` distinct covers, in canonical order.
pub fn multicovers(n: usize, k: usize, max_members: usize) -> Vec<Canon> {
    let tables = mask_tables(n);
    let raw = antichain_covers(n, max_members);
    let mut level: BTreeSet<Canon> = raw.iter().map(|c| canonical(std::slice::from_ref(c), &tables)).collect();
    for _ in 1..k {
        let mut next = BTreeSet::new();
        for rep in &level {
            for c in &raw {
                if rep.contains(c) {
                    continue;
                }
                let mut covers = rep.clone();
                covers.push(c.clone());
                next.insert(canonical(&covers, &tables));
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

fn to_space(n: usize, canon: &Canon) -> Result<FiniteSpace> {
    let covers = canon
        .iter()
        .enumerate()
        .map(|(i, c)| FiniteCover::new(format!("u{i}"), n, c.iter().map(|&m| PointSet::from_bits(m)).collect()))
        .collect::<Result<Vec<_>>>()?;
    FiniteSpace::new(n, covers)
}

/// Every canonical space, in order of point count, cover count, then canonical form.
pub fn spaces(params: &CorpusParams) -> Result<Vec<FiniteSpace>> {
    params.validate()?;
    let mut out = Vec::new();
    for n in 1..=params.max_points {
        let kmax = if n <= params.multi_cover_points { params.max_covers } else { 1 };
        for k in 1..=kmax {
            for canon in multicovers(n, k, params.max_members) {
                out.push(to_space(n, &canon)?);
            }
        }
    }
    Ok(out)
}

/// Every space paired with the cover game of each horizon `1..=max_horizon`.
pub fn generate(params: &CorpusParams) -> Result<Vec<Instance>> {
    let spaces = spaces(params)?;
    let mut out = Vec::with_capacity(spaces.len() * params.max_horizon);
    for space in spaces {
        for l in 1..=params.max_horizon {
            out.push(Instance {
                space: space.clone(),
                config: GameConfig::new(l, Budget::Finite(params.budget), WinKind::Cover),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(points: usize, covers: usize) -> CorpusParams {
        CorpusParams {
            max_points: points,
            max_covers: covers,
            max_members: 6,
            multi_cover_points: 6,
            max_horizon: 1,
            budget: 1,
        }
    }

    #[test]
    fn one_point_is_trivial() {
        let s = spaces(&params(1, 3)).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn two_points_one_cover() {
        // {{0,1}} and {{0},{1}}.
        let s = multicovers(2, 1, 6);
        assert_eq!(s, vec![vec![vec![1, 2]], vec![vec![3]]]);
        // The pair of both.
        assert_eq!(multicovers(2, 2, 6).len(), 1);
    }

    #[test]
    fn three_point_antichain_covers() {
        // Antichain covers of 3 labeled points: 1 + 3·... counted by brute force below.
        let brute = (1u32..1 << 7)
            .filter(|fam| {
                let ms: Vec<u32> = (0..7).filter(|i| fam >> i & 1 == 1).map(|i| i + 1).collect();
                ms.iter().fold(0, |a, &m| a | m) == 7
                    && ms.iter().all(|&a| ms.iter().all(|&b| a == b || a & b != a))
            })
            .count();
        assert_eq!(antichain_covers(3, 7).len(), brute);
    }

    #[test]
    fn default_corpus_size() {
        // Frozen after the first enumeration: 477 spaces on at most four points, 118 one-cover spaces on five.
        assert_eq!(spaces(&CorpusParams::default()).unwrap().len(), 595);
        assert_eq!(generate(&CorpusParams::default()).unwrap().len(), 2380);
    }

    #[test]
    fn limits_are_refused() {
        assert!(spaces(&params(7, 1)).is_err());
        assert!(spaces(&params(2, 4)).is_err());
    }

    #[test]
    fn fingerprints_are_stable() {
        let a = generate(&params(2, 1)).unwrap();
        let b = generate(&params(2, 1)).unwrap();
        let fa: Vec<_> = a.iter().map(Instance::fingerprint).collect();
        assert_eq!(fa, b.iter().map(Instance::fingerprint).collect::<Vec<_>>());
        assert_eq!(fa.iter().collect::<BTreeSet<_>>().len(), fa.len());
    }
}
