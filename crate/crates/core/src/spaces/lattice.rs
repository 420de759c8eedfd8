//! Ball covers of the integer lattice `Zᵈ`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::cover::Cover;
use crate::error::{Error, Result};

/// Largest ball whose points are listed explicitly.
pub const LIST_LIMIT: usize = 1 << 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    Max,
    L1,
}

impl Norm {
    pub fn of(self, v: &[i64]) -> u64 {
        match self {
            Norm::Max => v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0),
            Norm::L1 => v.iter().map(|x| x.unsigned_abs()).sum(),
        }
    }
}

/// A block of coordinates with its own closed radius and norm.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Block {
    pub dim: usize,
    pub radius: u64,
    pub norm: Norm,
}

/// Closed balls of `Zᵈ`, one member per center. A point lies in the member
/// centered at `c` when, block by block, its offset from `c` is within radius.
/// Products of lattice covers concatenate blocks.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct LatticeCover {
    label: String,
    blocks: Vec<Block>,
}

impl LatticeCover {
    pub fn new(dim: usize, radius: u64, norm: Norm) -> Self {
        LatticeCover {
            label: format!("Z{dim}:{radius}"),
            blocks: vec![Block { dim, radius, norm }],
        }
    }

    /// Open balls of radius `eps` for the integer-valued metric: `ρ < ε` iff `ρ ≤ ⌈ε⌉ - 1`.
    pub fn open(dim: usize, eps: Rational64, norm: Norm) -> Result<Self> {
        if eps <= Rational64::from_integer(0) {
            return Err(Error::InvalidMulticover("radii must be positive".into()));
        }
        let closed = eps.ceil().to_integer() - 1;
        Ok(Self::new(dim, closed as u64, norm).relabel(format!("Z{dim}:B({eps})")))
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    pub fn product(&self, other: &LatticeCover) -> LatticeCover {
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        LatticeCover {
            label: format!("{}·{}", self.label, other.label),
            blocks,
        }
    }

    /// Number of points in one member.
    pub fn ball_size(&self) -> u128 {
        self.blocks
            .iter()
            .map(|b| offsets_count(b.dim, b.radius, b.norm))
            .product()
    }

    fn offsets(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for b in &self.blocks {
            let block = block_offsets(b.dim, b.radius, b.norm);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    block.iter().map(move |o| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(o);
                        v
                    })
                })
                .collect();
        }
        out
    }
}

pub(crate) fn offsets_count(dim: usize, r: u64, norm: Norm) -> u128 {
    match norm {
        Norm::Max => (2 * r as u128 + 1).saturating_pow(dim as u32),
        Norm::L1 => {
            // Points of the L1 ball, by dynamic programming over coordinates.
            if r > 1 << 16 {
                return u128::MAX;
            }
            let r = r as usize;
            let mut ways = vec![0u128; r + 1];
            ways[0] = 1;
            for _ in 0..dim {
                let mut next = vec![0u128; r + 1];
                for (used, &w) in ways.iter().enumerate() {
                    if w == 0 {
                        continue;
                    }
                    for step in 0..=r - used {
                        next[used + step] = next[used + step].saturating_add(w.saturating_mul(if step == 0 { 1 } else { 2 }));
                    }
                }
                ways = next;
            }
            ways.iter().fold(0u128, |a, &b| a.saturating_add(b))
        }
    }
}

/// Offsets of a closed ball in lexicographic order.
pub fn block_offsets(dim: usize, r: u64, norm: Norm) -> Vec<Vec<i64>> {
    let r = r as i64;
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-r..=r).filter_map(move |x| {
                    let mut v = p.clone();
                    v.push(x);
                    (norm == Norm::Max || Norm::L1.of(&v) <= r as u64).then_some(v)
                })
            })
            .collect();
    }
    out
}

impl Cover for LatticeCover {
    type Point = Vec<i64>;
    type Member = Vec<i64>;

    fn label(&self) -> &str {
        &self.label
    }

    fn contains(&self, center: &Vec<i64>, point: &Vec<i64>) -> bool {
        let mut at = 0;
        for b in &self.blocks {
            let diff: Vec<i64> = (at..at + b.dim).map(|i| point[i] - center[i]).collect();
            if b.norm.of(&diff) > b.radius {
                return false;
            }
            at += b.dim;
        }
        true
    }

    fn members_containing(&self, point: &Vec<i64>) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self
            .offsets()
            .into_iter()
            .map(|o| point.iter().zip(&o).map(|(p, d)| p - d).collect())
            .collect();
        out.sort();
        out
    }

    fn member_points(&self, center: &Vec<i64>) -> Option<Vec<Vec<i64>>> {
        if self.ball_size() > LIST_LIMIT as u128 {
            return None;
        }
        let mut out: Vec<Vec<i64>> = self
            .offsets()
            .into_iter()
            .map(|o| center.iter().zip(&o).map(|(c, d)| c + d).collect())
            .collect();
        out.sort();
        Some(out)
    }
}

/// Points of the box `[-m, m]ᵈ`, lexicographically.
pub fn probe_box(dim: usize, m: u64) -> Vec<Vec<i64>> {
    block_offsets(dim, m, Norm::Max)
}

/// Default half-width of lattice probe boxes.
pub const DEFAULT_PROBE_BOX: u64 = 20;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{bounded_by, coarser_than, Budget, Verdict};

    #[test]
    fn open_radius_conversion() {
        let u = LatticeCover::open(1, Rational64::new(3, 2), Norm::Max).unwrap();
        assert_eq!(u.blocks()[0].radius, 1);
        let u = LatticeCover::open(1, Rational64::from_integer(1), Norm::Max).unwrap();
        assert_eq!(u.blocks()[0].radius, 0);
    }

    #[test]
    fn l1_ball_sizes() {
        assert_eq!(offsets_count(2, 1, Norm::L1), 5);
        assert_eq!(block_offsets(2, 2, Norm::L1).len() as u128, offsets_count(2, 2, Norm::L1));
        assert_eq!(offsets_count(2, 1, Norm::Max), 9);
    }

    #[test]
    fn radius_one_coarser_than_radius_five() {
        let small = LatticeCover::new(1, 1, Norm::Max);
        let big = LatticeCover::new(1, 5, Norm::Max);
        let probe = vec![vec![0]];
        match coarser_than(&small, &big, &probe, 32) {
            Verdict::Yes(ev) => assert!(ev.max_certificate() <= 11),
            other => panic!("{other:?}"),
        }
        // An 11-point interval needs four radius-1 balls.
        let pts: Vec<Vec<i64>> = (-5..=5).map(|x| vec![x]).collect();
        assert_eq!(bounded_by(&small, &pts, Budget::Unbounded).unwrap().unwrap().len(), 4);
    }

    #[test]
    fn product_of_intervals_is_a_square() {
        let u = LatticeCover::new(1, 2, Norm::Max);
        let p = u.product(&u);
        let sq = LatticeCover::new(2, 2, Norm::Max);
        let probe = probe_box(2, 3);
        assert!(coarser_than(&p, &sq, &probe, 1).is_yes());
        assert!(coarser_than(&sq, &p, &probe, 1).is_yes());
    }
}
