use serde::{Deserialize, Serialize};

use super::{GameConfig, Player, Strategy};
use crate::bits::PointSet;
use crate::cover::{Budget, Certificate, FiniteSpace};
use crate::error::{Error, Result};

/// One round of play: I's cover and II's certificate.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Round {
    pub cover: usize,
    pub certificate: Certificate,
}

/// II broke the rules in `round`; I wins.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Forfeit {
    pub round: usize,
    pub reason: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Transcript {
    pub rounds: Vec<Round>,
    pub winner: Player,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forfeit: Option<Forfeit>,
}

impl Transcript {
    pub fn covers(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.cover).collect()
    }
}

/// Player I: picks the next cover from the rounds so far.
pub trait Chooser: Sync {
    fn choose(&self, rounds: &[Round]) -> Result<usize>;
}

impl Chooser for [usize] {
    fn choose(&self, rounds: &[Round]) -> Result<usize> {
        self.get(rounds.len())
            .copied()
            .ok_or_else(|| Error::InvalidConfig(format!("I's sequence has only {} covers", self.len())))
    }
}

impl Chooser for Vec<usize> {
    fn choose(&self, rounds: &[Round]) -> Result<usize> {
        self.as_slice().choose(rounds)
    }
}

/// Why a certificate is illegal for `cover` under `budget`, if it is.
pub(crate) fn illegal(space: &FiniteSpace, cover: usize, cert: &Certificate, budget: Budget) -> Option<String> {
    if cert.cover != cover {
        return Some(format!("certificate names cover {} but I chose {cover}", cert.cover));
    }
    let len = space.cover(cover).len();
    if let Some(&m) = cert.members.iter().find(|&&m| m >= len) {
        return Some(format!("member {m} does not exist in cover {cover} of {len} members"));
    }
    if !budget.allows(cert.size()) {
        return Some(format!("{} members exceed the budget {budget:?}", cert.size()));
    }
    None
}

/// Plays one game. Illegal certificates and strategy errors forfeit the game for II.
pub fn play_game(
    space: &FiniteSpace,
    config: &GameConfig,
    player_i: &dyn Chooser,
    player_ii: &dyn Strategy,
) -> Result<Transcript> {
    config.validate(space)?;
    let mut rounds: Vec<Round> = Vec::with_capacity(config.horizon);
    let mut history = Vec::with_capacity(config.horizon);
    for n in 0..config.horizon {
        let cover = player_i.choose(&rounds)?;
        if cover >= space.n_covers() {
            return Err(Error::InvalidConfig(format!("I chose cover {cover} of {}", space.n_covers())));
        }
        history.push(cover);
        let reason = match player_ii.respond(&history) {
            Ok(cert) => match illegal(space, cover, &cert, config.budgets[n]) {
                None => {
                    rounds.push(Round { cover, certificate: cert });
                    continue;
                }
                Some(r) => r,
            },
            Err(e) => e.to_string(),
        };
        rounds.push(Round {
            cover,
            certificate: Certificate::empty(cover),
        });
        return Ok(Transcript {
            rounds,
            winner: Player::I,
            forfeit: Some(Forfeit { round: n, reason }),
        });
    }
    let sets: Vec<PointSet> = rounds
        .iter()
        .map(|r| r.certificate.union_in(space.cover(r.cover)))
        .collect();
    let probe = config.probe_in(space).to_vec();
    let winner = if config.win.holds(&sets, &probe) {
        Player::II
    } else {
        Player::I
    };
    Ok(Transcript {
        rounds,
        winner,
        forfeit: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::FiniteCover;
    use crate::game::{FnStrategy, GreedyStrategy};

    fn two_points() -> FiniteSpace {
        FiniteSpace::new(2, vec![FiniteCover::singletons(2)]).unwrap()
    }

    fn by_round() -> impl Strategy {
        FnStrategy::new(Budget::Finite(1), |h: &[usize]| {
            Ok(Certificate::new(0, vec![(h.len() - 1) % 2]))
        })
    }

    #[test]
    fn two_rounds_cover_two_points() {
        let t = play_game(&two_points(), &GameConfig::cover(2, 1), &vec![0, 0], &by_round()).unwrap();
        assert_eq!(t.winner, Player::II);
        assert_eq!(t.rounds.len(), 2);
    }

    #[test]
    fn one_round_is_not_enough() {
        let t = play_game(&two_points(), &GameConfig::cover(1, 1), &vec![0], &by_round()).unwrap();
        assert_eq!(t.winner, Player::I);
    }

    #[test]
    fn greedy_covers_pairs() {
        let s = FiniteSpace::new(
            6,
            vec![FiniteCover::from_lists("pairs", 6, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap()],
        )
        .unwrap();
        let g = GreedyStrategy {
            space: s.clone(),
            budget: 1,
            probe: s.ground(),
        };
        let t = play_game(&s, &GameConfig::cover(3, 1), &vec![0, 0, 0], &g).unwrap();
        assert_eq!(t.winner, Player::II);
    }

    #[test]
    fn over_budget_forfeits() {
        let greedy = FnStrategy::new(Budget::Finite(2), |h: &[usize]| {
            Ok(Certificate::new(*h.last().unwrap(), vec![0, 1]))
        });
        let t = play_game(&two_points(), &GameConfig::cover(1, 1), &vec![0], &greedy).unwrap();
        assert_eq!(t.winner, Player::I);
        assert_eq!(t.forfeit.unwrap().round, 0);
    }

    #[test]
    fn replay_is_deterministic() {
        let cfg = GameConfig::cover(2, 1);
        let a = play_game(&two_points(), &cfg, &vec![0, 0], &by_round()).unwrap();
        let b = play_game(&two_points(), &cfg, &vec![0, 0], &by_round()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
