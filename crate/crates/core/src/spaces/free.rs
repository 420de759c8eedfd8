use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::group::Group;
use crate::error::{Error, Result};

/// A reduced word. Letter `i > 0` is the `i`-th generator and `-i` its inverse.
/// Words print with `a, b, …` for generators and `A, B, …` for their
/// inverses; the empty word prints as `1`. Ordered shortlex.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<i8>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Reduces `letters` by cancelling adjacent inverse pairs.
    pub fn new(letters: &[i8]) -> Self {
        let mut out: Vec<i8> = Vec::with_capacity(letters.len());
        for &l in letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn generator(i: usize) -> Self {
        Word(vec![i as i8 + 1])
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let a = &self.0;
        let b = &other.0;
        let mut cancel = 0;
        while cancel < a.len().min(b.len()) && a[a.len() - 1 - cancel] == -b[cancel] {
            cancel += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
        out.extend_from_slice(&a[..a.len() - cancel]);
        out.extend_from_slice(&b[cancel..]);
        Word(out)
    }

    pub fn inv(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    /// Largest generator index used, plus one.
    pub fn rank_used(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.0 {
            let c = if l > 0 {
                (b'a' + (l - 1) as u8) as char
            } else {
                (b'A' + (-l - 1) as u8) as char
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'a'..='z' => Ok((c as u8 - b'a' + 1) as i8),
                'A'..='Z' => Ok(-((c as u8 - b'A' + 1) as i8)),
                _ => Err(Error::InvalidGroup(format!("bad letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Ok(Word::new(&letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The free group on `rank` generators with word-length norm.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::InvalidGroup(format!("free group rank {rank} outside 1..=26")));
        }
        Ok(FreeGroup { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn word(&self, s: &str) -> Result<Word> {
        let w: Word = s.parse()?;
        if w.rank_used() > self.rank {
            return Err(Error::InvalidGroup(format!("word {w} uses a letter beyond rank {}", self.rank)));
        }
        Ok(w)
    }

    pub fn generators(&self) -> Vec<Word> {
        (0..self.rank).map(Word::generator).collect()
    }

    fn ball_size(&self, r: u64) -> u128 {
        let k = 2 * self.rank as u128;
        let mut total: u128 = 1;
        let mut sphere: u128 = k;
        for _ in 0..r {
            total = total.saturating_add(sphere);
            sphere = sphere.saturating_mul(k - 1);
        }
        total
    }
}

impl Group for FreeGroup {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::identity()
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        a.mul(b)
    }

    fn inv(&self, a: &Word) -> Word {
        a.inv()
    }

    fn norm(&self, a: &Word) -> u64 {
        a.len() as u64
    }

    fn ball(&self, r: u64, limit: usize) -> Option<Vec<Word>> {
        if self.ball_size(r) > limit as u128 {
            return None;
        }
        let letters: Vec<i8> = (1..=self.rank as i8).flat_map(|i| [i, -i]).collect();
        let mut out = vec![Word::identity()];
        let mut frontier = vec![Word::identity()];
        for _ in 0..r {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    if w.0.last() != Some(&-l) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(Word(v));
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort();
        Some(out)
    }

    fn is_abelian(&self) -> bool {
        self.rank == 1
    }
}
