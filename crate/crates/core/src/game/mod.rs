//! Finite-horizon budgeted cover-boundedness games.
//!
//! In round `n` player I names a cover `u_n` of the multicover and player II
//! answers with a certificate: at most `budgets[n]` members of `u_n`. After
//! `horizon` rounds the win condition is evaluated on the certificate unions.

mod evaluate;
mod play;
mod probe;
mod solve;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use evaluate::{all_sequences, evaluate_i_policy, evaluate_strategy, Refuted, WorstCase};
pub use play::{play_game, Chooser, Forfeit, Round, Transcript};
pub use probe::{verify_on_probe, Move, ProbeFailure};
pub use solve::{
    selection_property, solve, solve_with, IPolicy, Policy, SolveOptions, SolveResult,
    DEFAULT_STATE_LIMIT,
};

use crate::bits::PointSet;
use crate::cover::{is_cover, is_gamma_cover, is_omega_cover, Budget, Certificate, Contains, FiniteSpace};
use crate::error::{Error, Result};

/// Largest `k` the exact solver tracks for the ω condition.
pub const MAX_OMEGA_K: usize = 3;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Player {
    I,
    II,
}

/// What the certificate unions `B_0, …, B_{L-1}` must achieve on the probe.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WinKind {
    /// Every probe point lies in some `B_n`.
    Cover,
    /// Every set of at most `k` probe points lies in a single `B_n`.
    Omega { k: usize },
    /// Every probe point lies in `B_n` for all `n ≥ m` except at most `f` rounds.
    Gamma { m: usize, f: usize },
}

impl WinKind {
    pub fn holds<P, S: Contains<P>>(&self, sets: &[S], probe: &[P]) -> bool {
        match *self {
            WinKind::Cover => is_cover(sets, probe),
            WinKind::Omega { k } => is_omega_cover(sets, probe, k),
            WinKind::Gamma { m, f } => is_gamma_cover(sets, probe, m, f),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            WinKind::Cover => "cover".into(),
            WinKind::Omega { k } => format!("omega(k={k})"),
            WinKind::Gamma { m, f } => format!("gamma(m={m}, f={f})"),
        }
    }
}

/// Horizon, per-round budgets and win condition of a finite game.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GameConfig {
    pub horizon: usize,
    pub budgets: Vec<Budget>,
    pub win: WinKind,
    /// Points the win condition is evaluated on; the whole ground set when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<PointSet>,
}

impl GameConfig {
    pub fn new(horizon: usize, budget: Budget, win: WinKind) -> Self {
        GameConfig {
            horizon,
            budgets: vec![budget; horizon],
            win,
            probe: None,
        }
    }

    pub fn cover(horizon: usize, budget: usize) -> Self {
        Self::new(horizon, Budget::Finite(budget), WinKind::Cover)
    }

    pub fn with_probe(mut self, probe: PointSet) -> Self {
        self.probe = Some(probe);
        self
    }

    pub fn with_budgets(mut self, budgets: Vec<Budget>) -> Self {
        self.budgets = budgets;
        self
    }

    /// Uses a strategy's declared budget schedule.
    pub fn with_schedule_of<M>(mut self, strategy: &dyn Strategy<M>) -> Self {
        self.budgets = (0..self.horizon).map(|n| strategy.budget(n)).collect();
        self
    }

    pub fn probe_in(&self, space: &FiniteSpace) -> PointSet {
        self.probe.unwrap_or_else(|| space.ground())
    }

    pub fn validate(&self, space: &FiniteSpace) -> Result<()> {
        self.validate_shape()?;
        let probe = self.probe_in(space);
        if probe.is_empty() {
            return Err(Error::InvalidConfig("probe is empty".into()));
        }
        if !probe.is_subset(space.ground()) {
            return Err(Error::InvalidConfig(format!(
                "probe points {:?} are outside the ground set",
                probe.difference(space.ground())
            )));
        }
        Ok(())
    }

    /// Checks that do not depend on the space.
    pub fn validate_shape(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be positive".into()));
        }
        if self.budgets.len() != self.horizon {
            return Err(Error::InvalidConfig(format!(
                "{} budgets for horizon {}",
                self.budgets.len(),
                self.horizon
            )));
        }
        match self.win {
            WinKind::Omega { k } if k == 0 => Err(Error::InvalidConfig("omega needs k ≥ 1".into())),
            WinKind::Gamma { m, .. } if m >= self.horizon => Err(Error::InvalidConfig(format!(
                "gamma start round {m} is not below the horizon {}",
                self.horizon
            ))),
            _ => Ok(()),
        }
    }
}

/// A strategy of player II: a certificate for every history of I's cover choices.
pub trait Strategy<M = usize>: Send + Sync {
    /// The certificate answering the last cover of `history` (which is nonempty).
    fn respond(&self, history: &[usize]) -> Result<Certificate<M>>;

    /// Declared budget of round `round`.
    fn budget(&self, round: usize) -> Budget;
}

impl<M, S: Strategy<M> + ?Sized> Strategy<M> for &S {
    fn respond(&self, history: &[usize]) -> Result<Certificate<M>> {
        (**self).respond(history)
    }
    fn budget(&self, round: usize) -> Budget {
        (**self).budget(round)
    }
}

impl<M, S: Strategy<M> + ?Sized> Strategy<M> for Box<S> {
    fn respond(&self, history: &[usize]) -> Result<Certificate<M>> {
        (**self).respond(history)
    }
    fn budget(&self, round: usize) -> Budget {
        (**self).budget(round)
    }
}

impl<M, S: Strategy<M> + ?Sized> Strategy<M> for Arc<S> {
    fn respond(&self, history: &[usize]) -> Result<Certificate<M>> {
        (**self).respond(history)
    }
    fn budget(&self, round: usize) -> Budget {
        (**self).budget(round)
    }
}

pub(crate) fn last_cover(history: &[usize]) -> Result<usize> {
    history
        .last()
        .copied()
        .ok_or_else(|| Error::Strategy("empty history".into()))
}

/// A strategy given by an explicit table, as produced by the solver.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TableStrategy {
    pub budgets: Vec<Budget>,
    #[serde(with = "table_entries")]
    pub table: BTreeMap<Vec<usize>, Vec<usize>>,
}

impl TableStrategy {
    pub fn new(budgets: Vec<Budget>) -> Self {
        TableStrategy {
            budgets,
            table: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, history: Vec<usize>, members: Vec<usize>) {
        self.table.insert(history, members);
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn horizon(&self) -> usize {
        self.budgets.len()
    }
}

impl Strategy for TableStrategy {
    fn respond(&self, history: &[usize]) -> Result<Certificate> {
        let cover = last_cover(history)?;
        self.table
            .get(history)
            .map(|m| Certificate::new(cover, m.clone()))
            .ok_or_else(|| Error::Strategy(format!("table strategy undefined on history {history:?}")))
    }

    fn budget(&self, round: usize) -> Budget {
        self.budgets.get(round).copied().unwrap_or(Budget::Finite(0))
    }
}

mod table_entries {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        history: Vec<usize>,
        members: Vec<usize>,
    }

    pub fn serialize<S: Serializer>(t: &BTreeMap<Vec<usize>, Vec<usize>>, s: S) -> Result<S::Ok, S::Error> {
        t.iter()
            .map(|(h, m)| Entry {
                history: h.clone(),
                members: m.clone(),
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Vec<usize>, Vec<usize>>, D::Error> {
        Ok(Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| (e.history, e.members))
            .collect())
    }
}

/// A strategy given by a closure and a uniform budget.
pub struct FnStrategy<F> {
    f: F,
    budget: Budget,
}

impl<F> FnStrategy<F> {
    pub fn new(budget: Budget, f: F) -> Self {
        FnStrategy { f, budget }
    }
}

impl<M, F> Strategy<M> for FnStrategy<F>
where
    F: Fn(&[usize]) -> Result<Certificate<M>> + Send + Sync,
{
    fn respond(&self, history: &[usize]) -> Result<Certificate<M>> {
        (self.f)(history)
    }

    fn budget(&self, _round: usize) -> Budget {
        self.budget
    }
}

/// Always answers with the empty certificate.
#[derive(Clone, Copy, Debug, Default)]
pub struct EmptyStrategy;

impl<M: Ord + Clone> Strategy<M> for EmptyStrategy {
    fn respond(&self, history: &[usize]) -> Result<Certificate<M>> {
        Ok(Certificate::empty(last_cover(history)?))
    }

    fn budget(&self, _round: usize) -> Budget {
        Budget::Finite(0)
    }
}

/// Answers every cover with its first `budget` members.
#[derive(Clone, Debug)]
pub struct PrefixStrategy {
    pub space: FiniteSpace,
    pub budget: usize,
}

impl Strategy for PrefixStrategy {
    fn respond(&self, history: &[usize]) -> Result<Certificate> {
        let cover = last_cover(history)?;
        let n = self
            .space
            .covers()
            .get(cover)
            .ok_or_else(|| Error::Strategy(format!("no cover {cover}")))?
            .len();
        Ok(Certificate::new(cover, (0..self.budget.min(n)).collect()))
    }

    fn budget(&self, _round: usize) -> Budget {
        Budget::Finite(self.budget)
    }
}

/// Greedy: each round take the members that cover the most still-uncovered probe points.
#[derive(Clone, Debug)]
pub struct GreedyStrategy {
    pub space: FiniteSpace,
    pub budget: usize,
    pub probe: PointSet,
}

impl Strategy for GreedyStrategy {
    fn respond(&self, history: &[usize]) -> Result<Certificate> {
        let mut uncovered = self.probe;
        let mut last = Certificate::empty(0);
        for n in 0..history.len() {
            let cover = self
                .space
                .covers()
                .get(history[n])
                .ok_or_else(|| Error::Strategy(format!("no cover {}", history[n])))?;
            let mut chosen = Vec::new();
            let mut left = uncovered;
            for _ in 0..self.budget {
                let best = (0..cover.len())
                    .filter(|m| !chosen.contains(m))
                    .max_by_key(|&m| (cover.member(m).intersection(left).len(), std::cmp::Reverse(m)));
                match best {
                    Some(m) if !cover.member(m).intersection(left).is_empty() => {
                        left = left.difference(cover.member(m));
                        chosen.push(m);
                    }
                    _ => break,
                }
            }
            last = Certificate::new(history[n], chosen);
            uncovered = left;
        }
        Ok(last)
    }

    fn budget(&self, _round: usize) -> Budget {
        Budget::Finite(self.budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let s = FiniteSpace::new(2, vec![crate::cover::FiniteCover::singletons(2)]).unwrap();
        assert!(GameConfig::cover(2, 1).validate(&s).is_ok());
        assert!(GameConfig::cover(0, 1).validate(&s).is_err());
        assert!(GameConfig::cover(2, 1).with_probe(PointSet::singleton(5)).validate(&s).is_err());
        assert!(GameConfig::new(2, Budget::Finite(1), WinKind::Gamma { m: 2, f: 0 })
            .validate(&s)
            .is_err());
    }

    #[test]
    fn table_strategy_json_round_trip() {
        let mut t = TableStrategy::new(vec![Budget::Finite(1); 2]);
        t.insert(vec![0], vec![1]);
        t.insert(vec![0, 0], vec![0]);
        let s = serde_json::to_string(&t).unwrap();
        let back: TableStrategy = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(t.respond(&[1]).is_err());
    }
}
