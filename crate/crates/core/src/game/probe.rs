use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::GameConfig;
use crate::cover::{Certificate, Contains, Cover, Multicover, Verdict};
use crate::error::Result;

/// II's move on a lazy space: a certificate and, optionally, the explicit set
/// it bounds. Without a set the certificate union itself is played.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Move<P, M> {
    pub certificate: Certificate<M>,
    /// Sorted and duplicate-free when present.
    pub set: Option<Vec<P>>,
}

impl<P: Ord, M> Move<P, M> {
    pub fn plain(certificate: Certificate<M>) -> Self {
        Move { certificate, set: None }
    }

    pub fn with_set(certificate: Certificate<M>, mut set: Vec<P>) -> Self {
        set.sort();
        set.dedup();
        Move {
            certificate,
            set: Some(set),
        }
    }
}

/// A sequence of I's covers on which the strategy fails on the probe.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ProbeFailure<P> {
    pub sequence: Vec<usize>,
    pub reason: String,
    /// Probe points lying in none of the played sets.
    pub uncovered: Vec<P>,
}

struct Played<'a, C: Cover> {
    cover: &'a C,
    mv: &'a Move<C::Point, C::Member>,
}

impl<C: Cover> Contains<C::Point> for Played<'_, C> {
    fn contains_point(&self, p: &C::Point) -> bool {
        match &self.mv.set {
            Some(set) => set.binary_search(p).is_ok(),
            None => self
                .mv
                .certificate
                .members
                .iter()
                .any(|m| self.cover.contains(m, p)),
        }
    }
}

enum Outcome<P> {
    Pass,
    Fail(ProbeFailure<P>),
    Unknown(String),
}

/// Replays `strategy` against each supplied sequence of I's covers and checks
/// the win condition on `probe`. Yes carries the number of sequences checked;
/// strategy errors give Unknown. `config.probe` is ignored.
pub fn verify_on_probe<C, F>(
    mc: &Multicover<C>,
    config: &GameConfig,
    probe: &[C::Point],
    sequences: &[Vec<usize>],
    strategy: F,
) -> Verdict<usize, ProbeFailure<C::Point>>
where
    C: Cover,
    F: Fn(&[usize]) -> Result<Move<C::Point, C::Member>> + Sync,
{
    if let Err(e) = config.validate_shape() {
        return Verdict::Unknown(e.to_string());
    }
    // Group by first cover; within a group, sorted order lets consecutive
    // sequences reuse the moves of their common prefix.
    let mut groups: BTreeMap<usize, Vec<(usize, &Vec<usize>)>> = BTreeMap::new();
    for (i, s) in sequences.iter().enumerate() {
        if s.is_empty() || s.len() > config.horizon {
            return Verdict::Unknown(format!("sequence {i} has length {} for horizon {}", s.len(), config.horizon));
        }
        if let Some(&c) = s.iter().find(|&&c| c >= mc.len()) {
            return Verdict::Unknown(format!("sequence {i} names missing cover {c}"));
        }
        groups.entry(s[0]).or_default().push((i, s));
    }
    let results: Vec<Vec<(usize, Outcome<C::Point>)>> = groups
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|mut group| {
            group.sort_by(|a, b| a.1.cmp(b.1));
            let mut path: Vec<usize> = Vec::new();
            let mut moves: Vec<Move<C::Point, C::Member>> = Vec::new();
            let mut out = Vec::with_capacity(group.len());
            for (idx, seq) in group {
                let common = path.iter().zip(seq.iter()).take_while(|(a, b)| a == b).count();
                path.truncate(common);
                moves.truncate(common);
                let outcome = replay(mc, config, probe, seq, &strategy, &mut path, &mut moves);
                out.push((idx, outcome));
            }
            out
        })
        .collect();
    let mut flat: Vec<(usize, Outcome<C::Point>)> = results.into_iter().flatten().collect();
    flat.sort_by_key(|r| r.0);
    for (_, o) in flat {
        match o {
            Outcome::Pass => {}
            Outcome::Fail(f) => return Verdict::No(f),
            Outcome::Unknown(w) => return Verdict::Unknown(w),
        }
    }
    Verdict::Yes(sequences.len())
}

fn replay<C, F>(
    mc: &Multicover<C>,
    config: &GameConfig,
    probe: &[C::Point],
    seq: &[usize],
    strategy: &F,
    path: &mut Vec<usize>,
    moves: &mut Vec<Move<C::Point, C::Member>>,
) -> Outcome<C::Point>
where
    C: Cover,
    F: Fn(&[usize]) -> Result<Move<C::Point, C::Member>>,
{
    let fail = |reason: String, uncovered: Vec<C::Point>| {
        Outcome::Fail(ProbeFailure {
            sequence: seq.to_vec(),
            reason,
            uncovered,
        })
    };
    for n in path.len()..seq.len() {
        path.push(seq[n]);
        let mv = match strategy(path) {
            Ok(mv) => mv,
            Err(e) => return Outcome::Unknown(format!("round {n}: {e}")),
        };
        let cover = &mc.covers()[seq[n]];
        if mv.certificate.cover != seq[n] {
            return fail(
                format!("round {n}: certificate names cover {} but I chose {}", mv.certificate.cover, seq[n]),
                Vec::new(),
            );
        }
        if !config.budgets[n].allows(mv.certificate.size()) {
            return fail(
                format!("round {n}: {} members exceed the budget", mv.certificate.size()),
                Vec::new(),
            );
        }
        if let Some(set) = &mv.set {
            if let Some(p) = set
                .iter()
                .find(|p| !mv.certificate.members.iter().any(|m| cover.contains(m, p)))
            {
                return fail(format!("round {n}: played point {p:?} escapes the certificate"), Vec::new());
            }
        }
        moves.push(mv);
    }
    let played: Vec<Played<'_, C>> = moves
        .iter()
        .zip(seq)
        .map(|(mv, &c)| Played {
            cover: &mc.covers()[c],
            mv,
        })
        .collect();
    if config.win.holds(&played, probe) {
        Outcome::Pass
    } else {
        let uncovered = probe
            .iter()
            .filter(|p| !played.iter().any(|s| s.contains_point(p)))
            .cloned()
            .collect();
        fail(format!("{} fails on the probe", config.win.name()), uncovered)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{Budget, FiniteCover};
    use crate::game::WinKind;

    #[test]
    fn finite_cover_through_probe_interface() {
        let mc = Multicover::new(vec![FiniteCover::singletons(3)]);
        let cfg = GameConfig::new(3, Budget::Finite(1), WinKind::Cover);
        let seqs = vec![vec![0, 0, 0]];
        let by_round = |h: &[usize]| Ok(Move::plain(Certificate::new(0, vec![h.len() - 1])));
        assert!(verify_on_probe(&mc, &cfg, &[0, 1, 2], &seqs, by_round).is_yes());
        let stuck = |_: &[usize]| Ok(Move::plain(Certificate::new(0, vec![0])));
        match verify_on_probe(&mc, &cfg, &[0, 1, 2], &seqs, stuck) {
            Verdict::No(f) => assert_eq!(f.uncovered, vec![1, 2]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn explicit_sets_must_sit_inside_the_certificate() {
        let mc = Multicover::new(vec![FiniteCover::singletons(3)]);
        let cfg = GameConfig::new(1, Budget::Finite(1), WinKind::Cover);
        let cheat = |_: &[usize]| Ok(Move::with_set(Certificate::new(0, vec![0]), vec![0, 1, 2]));
        assert!(verify_on_probe(&mc, &cfg, &[0, 1, 2], &[vec![0]], cheat).is_no());
    }
}
