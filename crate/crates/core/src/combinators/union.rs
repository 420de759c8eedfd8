use std::sync::Arc;

use super::WitnessSequence;
use crate::cover::{Budget, Certificate};
use crate::error::{Error, Result};
use crate::game::Strategy;

/// Piece `k` starts playing at round `k`: `Θ(u_0, …, u_n) = ⋃_{k ≤ n} Θ_k(u_k, …, u_n)`.
pub struct UnionStrategy<M = usize> {
    pieces: Vec<Arc<dyn Strategy<M>>>,
}

impl<M> UnionStrategy<M> {
    pub fn new(pieces: Vec<Arc<dyn Strategy<M>>>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Precondition("no pieces".into()));
        }
        Ok(UnionStrategy { pieces })
    }

    pub fn pieces(&self) -> usize {
        self.pieces.len()
    }
}

impl<M: Ord + Clone + Send + Sync> Strategy<M> for UnionStrategy<M> {
    fn respond(&self, history: &[usize]) -> Result<Certificate<M>> {
        let n = history
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Strategy("empty history".into()))?;
        let mut out = Certificate::empty(history[n]);
        for (k, piece) in self.pieces.iter().enumerate().take(n + 1) {
            let c = piece
                .respond(&history[k..])
                .map_err(|e| Error::Strategy(format!("piece {k} on history {:?}: {e}", &history[k..])))?;
            if c.cover != history[n] {
                return Err(Error::Strategy(format!("piece {k} answered in cover {}", c.cover)));
            }
            out = out.merge(&c);
        }
        Ok(out)
    }

    /// `Σ_{k ≤ n} b^k_{n-k}`.
    fn budget(&self, round: usize) -> Budget {
        self.pieces
            .iter()
            .enumerate()
            .take(round + 1)
            .fold(Budget::Finite(0), |acc, (k, p)| acc.plus(p.budget(round - k)))
    }
}

/// `B_n = ⋃_{k ≤ n} B_n^k` for per-piece witnesses against the same sequence of covers.
pub fn union_witness<M: Ord + Clone>(pieces: &[WitnessSequence<M>]) -> Result<WitnessSequence<M>> {
    let first = pieces.first().ok_or_else(|| Error::Precondition("no pieces".into()))?;
    if let Some(k) = pieces.iter().position(|p| p.class != first.class) {
        return Err(Error::Precondition(format!("piece {k} claims a different class")));
    }
    let len = pieces.iter().map(|p| p.len()).max().unwrap_or(0);
    let mut items = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc: Option<Certificate<M>> = None;
        for (k, p) in pieces.iter().enumerate().take(n + 1) {
            let Some(c) = p.items.get(n) else { continue };
            acc = Some(match acc {
                None => c.clone(),
                Some(a) if a.cover == c.cover => a.merge(c),
                Some(a) => {
                    return Err(Error::Precondition(format!(
                        "round {n}: piece {k} is in cover {} but an earlier piece is in cover {}",
                        c.cover, a.cover
                    )))
                }
            });
        }
        let cover = match acc {
            Some(c) => c,
            None => Certificate::empty(pieces.iter().find_map(|p| p.items.get(n)).map_or(0, |c| c.cover)),
        };
        items.push(cover);
    }
    Ok(WitnessSequence::new(items, first.class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::WitnessClass;
    use crate::game::{FnStrategy, TableStrategy};

    #[test]
    fn single_piece_is_the_piece() {
        let p: Arc<dyn Strategy> = Arc::new(FnStrategy::new(Budget::Finite(1), |h: &[usize]| {
            Ok(Certificate::new(*h.last().unwrap(), vec![h.len()]))
        }));
        let u = UnionStrategy::new(vec![p.clone()]).unwrap();
        for h in [vec![0], vec![1, 0], vec![0, 0, 1]] {
            assert_eq!(u.respond(&h).unwrap(), p.respond(&h).unwrap());
        }
    }

    #[test]
    fn missing_shifted_history_is_an_error() {
        let mut t = TableStrategy::new(vec![Budget::Finite(1)]);
        t.insert(vec![0], vec![0]);
        let u = UnionStrategy::new(vec![Arc::new(t.clone()) as Arc<dyn Strategy>, Arc::new(t)]).unwrap();
        assert!(u.respond(&[0]).is_ok());
        assert!(u.respond(&[0, 0]).is_err());
        assert_eq!(u.budget(0), Budget::Finite(1));
    }

    #[test]
    fn witnesses_merge_from_their_start() {
        let w = |m: usize| WitnessSequence::new(vec![Certificate::new(0, vec![m]); 3], WitnessClass::Cover);
        let u = union_witness(&[w(0), w(1), w(2)]).unwrap();
        assert_eq!(u.items[0].members, vec![0]);
        assert_eq!(u.items[2].members, vec![0, 1, 2]);
    }
}
