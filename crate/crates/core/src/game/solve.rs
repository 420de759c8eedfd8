//! Exact backward induction with memoization.
//!
//! States are `(round, progress)` where progress is a `u128` encoding of what
//! is still owed on the probe: uncovered points (cover), unengulfed `k`-subsets
//! (ω), or per-point miss counters (γ). II's answers are explored only through
//! their maximal unions, which is sound because every win condition is
//! monotone in the sets II plays.

use std::collections::HashMap;
use std::sync::Mutex;

use super::{GameConfig, Player, Round, TableStrategy, WinKind, MAX_OMEGA_K};
use crate::bits::PointSet;
use crate::cover::{Budget, FiniteSpace, Verdict};
use crate::error::{Error, Result};

pub const DEFAULT_STATE_LIMIT: usize = 1 << 22;

/// Largest number of candidate answers enumerated for one cover and budget.
const MOVE_LIMIT: usize = 1 << 20;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SolveOptions {
    pub state_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            state_limit: DEFAULT_STATE_LIMIT,
        }
    }
}

/// The winner and an optimal policy for it.
#[derive(Debug)]
pub struct SolveResult {
    pub winner: Player,
    pub policy: Policy,
    pub states_explored: usize,
}

#[derive(Debug)]
pub enum Policy {
    II(TableStrategy),
    I(IPolicy),
}

impl SolveResult {
    pub fn ii_policy(&self) -> Option<&TableStrategy> {
        match &self.policy {
            Policy::II(t) => Some(t),
            Policy::I(_) => None,
        }
    }

    pub fn i_policy(&self) -> Option<&IPolicy> {
        match &self.policy {
            Policy::I(p) => Some(p),
            Policy::II(_) => None,
        }
    }
}

pub fn solve(space: &FiniteSpace, config: &GameConfig) -> Result<SolveResult> {
    solve_with(space, config, SolveOptions::default())
}

pub fn solve_with(space: &FiniteSpace, config: &GameConfig, options: SolveOptions) -> Result<SolveResult> {
    let mut core = Core::new(space, config, options.state_limit, None)?;
    let init = core.tracker.init();
    let ii = core.ii_wins(0, init)?;
    if ii {
        let mut table = TableStrategy::new(config.budgets.clone());
        core.extract(0, init, &mut Vec::new(), &mut table)?;
        Ok(SolveResult {
            winner: Player::II,
            policy: Policy::II(table),
            states_explored: core.explored,
        })
    } else {
        let explored = core.explored;
        Ok(SolveResult {
            winner: Player::I,
            policy: Policy::I(IPolicy { core: Mutex::new(core) }),
            states_explored: explored,
        })
    }
}

/// Checks the selection property for every sequence of I's covers: II, told the
/// whole sequence in advance, can meet the win condition. No carries the first
/// sequence (lexicographically) where it cannot.
pub fn selection_property(space: &FiniteSpace, config: &GameConfig) -> Result<Verdict<usize, Vec<usize>>> {
    let mut checked = 0;
    for seq in super::all_sequences(space.n_covers(), config.horizon) {
        let mut core = Core::new(space, config, DEFAULT_STATE_LIMIT, Some(seq.clone()))?;
        let init = core.tracker.init();
        if !core.ii_wins(0, init)? {
            return Ok(Verdict::No(seq));
        }
        checked += 1;
    }
    Ok(Verdict::Yes(checked))
}

/// Player I's optimal policy: the smallest cover that defeats every answer.
#[derive(Debug)]
pub struct IPolicy {
    core: Mutex<Core>,
}

impl IPolicy {
    fn state_after(core: &Core, rounds: &[Round]) -> Option<u128> {
        let mut s = core.tracker.init();
        for (n, r) in rounds.iter().enumerate() {
            let b = core.local_union(r.cover, &r.certificate.members);
            s = core.tracker.apply(s, b, n)?;
        }
        Some(s)
    }
}

impl super::Chooser for IPolicy {
    fn choose(&self, rounds: &[Round]) -> Result<usize> {
        let mut core = self.core.lock().expect("solver lock");
        let round = rounds.len();
        let Some(state) = Self::state_after(&core, rounds) else {
            return Ok(0);
        };
        let budget = core.budgets[round];
        for i in 0..core.n_covers {
            let moves = core.moves(i, budget)?;
            let mut ii_escapes = false;
            for b in moves.iter() {
                if let Some(next) = core.tracker.apply(state, *b, round) {
                    if core.ii_wins(round + 1, next)? {
                        ii_escapes = true;
                        break;
                    }
                }
            }
            if !ii_escapes {
                return Ok(i);
            }
        }
        Ok(0)
    }
}

#[derive(Debug)]
enum Tracker {
    Cover { q: usize },
    Omega { subsets: Vec<PointSet> },
    Gamma { m: usize, f: usize, q: usize, width: usize, horizon: usize },
}

impl Tracker {
    fn new(win: WinKind, q: usize, horizon: usize) -> Result<Self> {
        match win {
            WinKind::Cover => Ok(Tracker::Cover { q }),
            WinKind::Omega { k } => {
                if k > MAX_OMEGA_K {
                    return Err(Error::InvalidConfig(format!(
                        "the solver tracks omega only for k ≤ {MAX_OMEGA_K}"
                    )));
                }
                let k = k.min(q);
                let subsets = k_subsets(q, k);
                if subsets.len() > 128 {
                    return Err(Error::InvalidConfig(format!(
                        "omega(k={k}) over {q} probe points needs {} subsets, at most 128 are tracked",
                        subsets.len()
                    )));
                }
                Ok(Tracker::Omega { subsets })
            }
            WinKind::Gamma { m, f } => {
                let width = (usize::BITS - f.leading_zeros()) as usize;
                if width * q > 128 {
                    return Err(Error::InvalidConfig(format!(
                        "gamma(f={f}) over {q} probe points needs {} state bits, at most 128 are tracked",
                        width * q
                    )));
                }
                Ok(Tracker::Gamma { m, f, q, width, horizon })
            }
        }
    }

    fn init(&self) -> u128 {
        match self {
            Tracker::Cover { q } => PointSet::full(*q).bits(),
            Tracker::Omega { subsets } => PointSet::full(subsets.len()).bits(),
            Tracker::Gamma { .. } => 0,
        }
    }

    /// Progress after II plays `b` (probe-local) in `round`; `None` once I has won.
    fn apply(&self, s: u128, b: PointSet, round: usize) -> Option<u128> {
        match self {
            Tracker::Cover { .. } => Some(s & !b.bits()),
            Tracker::Omega { subsets } => {
                let mut out = s;
                for i in PointSet::from_bits(s) {
                    if subsets[i].is_subset(b) {
                        out &= !(1u128 << i);
                    }
                }
                Some(out)
            }
            Tracker::Gamma { m, f, q, width, .. } => {
                if round < *m {
                    return Some(s);
                }
                let mut out = s;
                for p in 0..*q {
                    if b.contains(p) {
                        continue;
                    }
                    let c = gamma_count(s, p, *width) + 1;
                    if c > *f {
                        return None;
                    }
                    out = gamma_set(out, p, *width, c);
                }
                Some(out)
            }
        }
    }

    /// II has won no matter what happens from `round` on.
    fn settled(&self, s: u128, round: usize) -> bool {
        match self {
            Tracker::Cover { .. } | Tracker::Omega { .. } => s == 0,
            Tracker::Gamma { m, f, q, width, horizon } => {
                let left = horizon.saturating_sub(round.max(*m));
                (0..*q).all(|p| gamma_count(s, p, *width) + left <= *f)
            }
        }
    }

    fn terminal(&self, s: u128) -> bool {
        match self {
            Tracker::Cover { .. } | Tracker::Omega { .. } => s == 0,
            Tracker::Gamma { .. } => true,
        }
    }
}

fn gamma_count(s: u128, p: usize, width: usize) -> usize {
    if width == 0 {
        return 0;
    }
    ((s >> (p * width)) & ((1u128 << width) - 1)) as usize
}

fn gamma_set(s: u128, p: usize, width: usize, c: usize) -> u128 {
    let mask = ((1u128 << width) - 1) << (p * width);
    (s & !mask) | ((c as u128) << (p * width))
}

/// All `k`-subsets of `{0, …, q-1}` in lexicographic order.
pub(crate) fn k_subsets(q: usize, k: usize) -> Vec<PointSet> {
    fn go(start: usize, q: usize, k: usize, cur: PointSet, out: &mut Vec<PointSet>) {
        if k == 0 {
            out.push(cur);
            return;
        }
        for i in start..q {
            let mut next = cur;
            next.insert(i);
            go(i + 1, q, k - 1, next, out);
        }
    }
    let mut out = Vec::new();
    go(0, q, k, PointSet::EMPTY, &mut out);
    out
}

#[derive(Debug)]
struct Core {
    n_covers: usize,
    horizon: usize,
    budgets: Vec<Budget>,
    /// Members of each cover restricted to the probe, in probe-local coordinates.
    local: Vec<Vec<PointSet>>,
    tracker: Tracker,
    fixed: Option<Vec<usize>>,
    moves: HashMap<(usize, Budget), std::sync::Arc<Vec<PointSet>>>,
    memo: HashMap<(usize, u128), bool>,
    limit: usize,
    explored: usize,
}

impl Core {
    fn new(space: &FiniteSpace, config: &GameConfig, limit: usize, fixed: Option<Vec<usize>>) -> Result<Self> {
        config.validate(space)?;
        let probe = config.probe_in(space).to_vec();
        let local = space
            .covers()
            .iter()
            .map(|c| {
                c.members()
                    .iter()
                    .map(|m| {
                        probe
                            .iter()
                            .enumerate()
                            .filter(|(_, &p)| m.contains(p))
                            .map(|(i, _)| i)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Core {
            n_covers: space.n_covers(),
            horizon: config.horizon,
            budgets: config.budgets.clone(),
            local,
            tracker: Tracker::new(config.win, probe.len(), config.horizon)?,
            fixed,
            moves: HashMap::new(),
            memo: HashMap::new(),
            limit,
            explored: 0,
        })
    }

    fn local_union(&self, cover: usize, members: &[usize]) -> PointSet {
        members
            .iter()
            .filter_map(|&m| self.local[cover].get(m))
            .fold(PointSet::EMPTY, |a, &b| a.union(b))
    }

    fn covers_at(&self, round: usize) -> std::ops::Range<usize> {
        match &self.fixed {
            Some(seq) => seq[round]..seq[round] + 1,
            None => 0..self.n_covers,
        }
    }

    /// Distinct maximal unions II can play in `cover` under `budget`, largest first.
    fn moves(&mut self, cover: usize, budget: Budget) -> Result<std::sync::Arc<Vec<PointSet>>> {
        if let Some(m) = self.moves.get(&(cover, budget)) {
            return Ok(m.clone());
        }
        let members = &self.local[cover];
        let n = members.len();
        let size = budget.limit().map_or(n, |b| b.min(n));
        let mut unions: Vec<PointSet> = Vec::new();
        let mut count = 0usize;
        let mut stack: Vec<usize> = Vec::with_capacity(size);
        fn combos(
            members: &[PointSet],
            start: usize,
            size: usize,
            stack: &mut Vec<usize>,
            acc: PointSet,
            out: &mut Vec<PointSet>,
            count: &mut usize,
        ) -> bool {
            if stack.len() == size {
                *count += 1;
                out.push(acc);
                return *count <= MOVE_LIMIT;
            }
            let need = size - stack.len();
            for i in start..=members.len() - need {
                stack.push(i);
                let ok = combos(members, i + 1, size, stack, acc.union(members[i]), out, count);
                stack.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
        if !combos(members, 0, size, &mut stack, PointSet::EMPTY, &mut unions, &mut count) {
            return Err(Error::StateLimit(MOVE_LIMIT));
        }
        unions.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        unions.dedup();
        let mut maximal: Vec<PointSet> = Vec::new();
        for u in unions {
            if !maximal.iter().any(|m| u.is_subset(*m)) {
                maximal.push(u);
            }
        }
        let arc = std::sync::Arc::new(maximal);
        self.moves.insert((cover, budget), arc.clone());
        Ok(arc)
    }

    fn ii_wins(&mut self, round: usize, state: u128) -> Result<bool> {
        if round == self.horizon {
            return Ok(self.tracker.terminal(state));
        }
        if self.tracker.settled(state, round) {
            return Ok(true);
        }
        if let Some(&v) = self.memo.get(&(round, state)) {
            return Ok(v);
        }
        self.explored += 1;
        let mut result = true;
        for i in self.covers_at(round) {
            let moves = self.moves(i, self.budgets[round])?;
            let mut found = false;
            for b in moves.iter() {
                if let Some(next) = self.tracker.apply(state, *b, round) {
                    if self.ii_wins(round + 1, next)? {
                        found = true;
                        break;
                    }
                }
            }
            if !found {
                result = false;
                break;
            }
        }
        if self.memo.len() >= self.limit {
            return Err(Error::StateLimit(self.limit));
        }
        self.memo.insert((round, state), result);
        Ok(result)
    }

    /// Lexicographically smallest winning member list for `cover`, by preorder
    /// enumeration of sorted index lists of size at most the budget.
    fn best_answer(&mut self, round: usize, state: u128, cover: usize) -> Result<Option<(Vec<usize>, u128)>> {
        let n = self.local[cover].len();
        let size = self.budgets[round].limit().map_or(n, |b| b.min(n));
        let mut stack = Vec::with_capacity(size);
        self.lex_search(round, state, cover, 0, size, PointSet::EMPTY, &mut stack)
    }

    #[allow(clippy::too_many_arguments)]
    fn lex_search(
        &mut self,
        round: usize,
        state: u128,
        cover: usize,
        start: usize,
        size: usize,
        acc: PointSet,
        stack: &mut Vec<usize>,
    ) -> Result<Option<(Vec<usize>, u128)>> {
        if let Some(next) = self.tracker.apply(state, acc, round) {
            if self.ii_wins(round + 1, next)? {
                return Ok(Some((stack.clone(), next)));
            }
        }
        if stack.len() == size {
            return Ok(None);
        }
        for i in start..self.local[cover].len() {
            let m = self.local[cover][i];
            stack.push(i);
            let r = self.lex_search(round, state, cover, i + 1, size, acc.union(m), stack)?;
            stack.pop();
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }

    fn extract(&mut self, round: usize, state: u128, history: &mut Vec<usize>, table: &mut TableStrategy) -> Result<()> {
        if round == self.horizon {
            return Ok(());
        }
        for i in 0..self.n_covers {
            let (members, next) = self
                .best_answer(round, state, i)?
                .expect("II-winning state has a winning answer for every cover");
            history.push(i);
            table.insert(history.clone(), members);
            self.extract(round + 1, next, history, table)?;
            history.pop();
        }
        Ok(())
    }
}
