use rayon::prelude::*;
use serde::Serialize;

use super::play::illegal;
use super::{play_game, Chooser, GameConfig, Player, Round, Strategy, Transcript};
use crate::bits::PointSet;
use crate::cover::{Certificate, FiniteSpace};
use crate::error::{Error, Result};

/// Outcome of playing a strategy against every sequence of I's covers.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct WorstCase {
    pub winner: Player,
    /// The lexicographically first I-sequence that beats the strategy.
    pub refutation: Option<Refuted>,
    pub plays: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Refuted {
    pub covers: Vec<usize>,
    pub transcript: Transcript,
}

/// Every sequence of `len` cover indices below `n_covers`, lexicographically.
pub fn all_sequences(n_covers: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..n_covers).map(move |i| {
                    let mut t = s.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Plays `strategy` against all `|λ|^L` sequences of I. Shared prefixes are
/// answered once; subtrees under different first covers run in parallel.
pub fn evaluate_strategy(space: &FiniteSpace, config: &GameConfig, strategy: &dyn Strategy) -> Result<WorstCase> {
    config.validate(space)?;
    let probe = config.probe_in(space).to_vec();
    let ctx = Ctx {
        space,
        config,
        strategy,
        probe: &probe,
    };
    let results: Vec<(Option<Vec<usize>>, usize)> = (0..space.n_covers())
        .into_par_iter()
        .map(|first| {
            let mut history = vec![first];
            let mut sets = Vec::with_capacity(config.horizon);
            let mut plays = 0;
            let failed = ctx.dfs(&mut history, &mut sets, &mut plays);
            (failed.then(|| pad(history, config.horizon)), plays)
        })
        .collect();
    let plays = results.iter().map(|r| r.1).sum();
    match results.into_iter().find_map(|r| r.0) {
        None => Ok(WorstCase {
            winner: Player::II,
            refutation: None,
            plays,
        }),
        Some(covers) => {
            let transcript = play_game(space, config, &covers, strategy)?;
            debug_assert_eq!(transcript.winner, Player::I);
            Ok(WorstCase {
                winner: Player::I,
                refutation: Some(Refuted { covers, transcript }),
                plays,
            })
        }
    }
}

fn pad(mut h: Vec<usize>, len: usize) -> Vec<usize> {
    h.resize(len, 0);
    h
}

struct Ctx<'a> {
    space: &'a FiniteSpace,
    config: &'a GameConfig,
    strategy: &'a dyn Strategy,
    probe: &'a [usize],
}

impl Ctx<'_> {
    /// True when some extension of `history` beats the strategy; `history` is
    /// then left holding the failing prefix.
    fn dfs(&self, history: &mut Vec<usize>, sets: &mut Vec<PointSet>, plays: &mut usize) -> bool {
        let n = history.len() - 1;
        let cover = history[n];
        let set = match self.strategy.respond(history) {
            Ok(cert) if illegal(self.space, cover, &cert, self.config.budgets[n]).is_none() => {
                cert.union_in(self.space.cover(cover))
            }
            _ => {
                *plays += 1;
                return true;
            }
        };
        sets.push(set);
        let failed = if history.len() == self.config.horizon {
            *plays += 1;
            !self.config.win.holds(sets, self.probe)
        } else {
            let mut failed = false;
            for next in 0..self.space.n_covers() {
                history.push(next);
                if self.dfs(history, sets, plays) {
                    failed = true;
                    break;
                }
                history.pop();
            }
            failed
        };
        sets.pop();
        failed
    }
}

/// Plays an I-policy against every legal sequence of II's answers. Returns a
/// transcript II wins, or `None` when the policy beats all of them.
pub fn evaluate_i_policy(space: &FiniteSpace, config: &GameConfig, policy: &dyn Chooser) -> Result<Option<Transcript>> {
    config.validate(space)?;
    let probe = config.probe_in(space).to_vec();
    let mut rounds = Vec::with_capacity(config.horizon);
    i_dfs(space, config, policy, &probe, &mut rounds)
}

fn i_dfs(
    space: &FiniteSpace,
    config: &GameConfig,
    policy: &dyn Chooser,
    probe: &[usize],
    rounds: &mut Vec<Round>,
) -> Result<Option<Transcript>> {
    if rounds.len() == config.horizon {
        let sets: Vec<PointSet> = rounds
            .iter()
            .map(|r| r.certificate.union_in(space.cover(r.cover)))
            .collect();
        return Ok(config.win.holds(&sets, probe).then(|| Transcript {
            rounds: rounds.clone(),
            winner: Player::II,
            forfeit: None,
        }));
    }
    let n = rounds.len();
    let cover = policy.choose(rounds)?;
    if cover >= space.n_covers() {
        return Err(Error::Strategy(format!("I-policy chose missing cover {cover}")));
    }
    let len = space.cover(cover).len();
    let size = config.budgets[n].limit().map_or(len, |b| b.min(len));
    for members in combinations_up_to(len, size) {
        rounds.push(Round {
            cover,
            certificate: Certificate::new(cover, members),
        });
        if let Some(t) = i_dfs(space, config, policy, probe, rounds)? {
            return Ok(Some(t));
        }
        rounds.pop();
    }
    Ok(None)
}

/// Sorted index lists of size at most `size` over `0..n`, in lexicographic order.
pub(crate) fn combinations_up_to(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == size {
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::FiniteCover;
    use crate::game::EmptyStrategy;

    #[test]
    fn sequences_are_lexicographic() {
        assert_eq!(all_sequences(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(all_sequences(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn combinations_in_lex_order() {
        assert_eq!(
            combinations_up_to(3, 2),
            vec![vec![], vec![0], vec![0, 1], vec![0, 2], vec![1], vec![1, 2], vec![2]]
        );
    }

    #[test]
    fn empty_strategy_is_refuted_by_the_first_sequence() {
        let s = FiniteSpace::new(2, vec![FiniteCover::singletons(2), FiniteCover::whole(2)]).unwrap();
        let w = evaluate_strategy(&s, &GameConfig::cover(2, 1), &EmptyStrategy).unwrap();
        assert_eq!(w.winner, Player::I);
        let r = w.refutation.unwrap();
        assert_eq!(r.covers, vec![0, 0]);
        assert_eq!(r.transcript.winner, Player::I);
    }
}
