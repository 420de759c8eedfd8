//! Lifting a γ-output strategy on the symmetrized generators `X ∪ X⁻¹` to a
//! winning strategy on the whole group with right translates.
//!
//! I's covers and the auxiliary covers `w(s)_k` are right-translate ball
//! covers, so a cover is named by its radius. The strategy `Θ` being lifted
//! receives histories of radii and answers with translates `z`, standing for
//! `U_r z` restricted to the letters.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::group::Group;
use crate::cover::{Budget, Certificate};
use crate::error::{Error, Result};
use crate::game::{last_cover, Move, Strategy};

/// How the radii of the auxiliary covers are chosen.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum LiftSchedule {
    /// `r_0 = ⌊R/2⌋` and `r_{n+1} = min(⌊r_n/2⌋, r_n - 2κ_n)` clamped at 0,
    /// where `κ_n` is the longest translate in `K_n`.
    Derived,
    /// The same radii for every history; each is checked as the chain is built.
    Fixed(Vec<u64>),
}

/// One auxiliary round: its radius, the set `A_k` and the translates `K` with `A_k ⊆ U_k K`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ChainStep<E> {
    pub radius: u64,
    pub set: Vec<E>,
    pub translates: Vec<E>,
}

/// `2^{2L}·(1 + 2κ)`: with I's radii at least this, halving `2L` times keeps
/// every auxiliary radius at least `κ`, so a letter set is always covered by
/// the identity translate.
pub fn radius_budget(kappa: u64, horizon: usize) -> u128 {
    (1u128 << (2 * horizon).min(120)).saturating_mul(1 + 2 * kappa as u128)
}

pub struct LiftedStrategy<G: Group> {
    group: Arc<G>,
    letters: Vec<G::Elem>,
    theta: Arc<dyn Strategy<G::Elem>>,
    radii: Vec<u64>,
    horizon: usize,
    schedule: LiftSchedule,
    products: Mutex<HashMap<Vec<Vec<G::Elem>>, Arc<Vec<G::Elem>>>>,
}

impl<G: Group> std::fmt::Debug for LiftedStrategy<G> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LiftedStrategy")
            .field("letters", &self.letters)
            .field("radii", &self.radii)
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl<G: Group> LiftedStrategy<G> {
    /// `radii[i]` is the radius of I's cover `i`. The radius budget and, for
    /// fixed schedules, the halving conditions are checked here; conditions
    /// depending on `Θ`'s answers are checked as chains are built.
    pub fn new(
        group: Arc<G>,
        generators: &[G::Elem],
        theta: Arc<dyn Strategy<G::Elem>>,
        radii: Vec<u64>,
        horizon: usize,
        schedule: LiftSchedule,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidGroup("empty generating set".into()));
        }
        if radii.is_empty() || horizon == 0 {
            return Err(Error::InvalidConfig("need at least one cover and one round".into()));
        }
        let letters: Vec<G::Elem> = generators
            .iter()
            .flat_map(|x| [x.clone(), group.inv(x)])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let kappa = letters.iter().map(|x| group.norm(x)).max().unwrap_or(0);
        match &schedule {
            LiftSchedule::Derived => {
                let need = radius_budget(kappa, horizon);
                if let Some(&r) = radii.iter().find(|&&r| (r as u128) < need) {
                    return Err(Error::Schedule {
                        condition: "radius budget".into(),
                        detail: format!("radius {r} is below 2^(2L)·(1+2κ) = {need}"),
                    });
                }
            }
            LiftSchedule::Fixed(f) => {
                if f.len() < 2 * horizon - 1 {
                    return Err(Error::Range(format!(
                        "{} auxiliary radii for {} needed",
                        f.len(),
                        2 * horizon - 1
                    )));
                }
                if let Some(&r) = radii.iter().find(|&&r| 2 * f[0] > r) {
                    return Err(Error::Schedule {
                        condition: "(ii)".into(),
                        detail: format!("U_0² ⊄ U: 2·{} > {r}", f[0]),
                    });
                }
                if let Some(n) = f.windows(2).position(|w| 2 * w[1] > w[0]) {
                    return Err(Error::Schedule {
                        condition: "(ii)".into(),
                        detail: format!("U_{}² ⊄ U_{n}: 2·{} > {}", n + 1, f[n + 1], f[n]),
                    });
                }
            }
        }
        Ok(LiftedStrategy {
            group,
            letters,
            theta,
            radii,
            horizon,
            schedule,
            products: Mutex::new(HashMap::new()),
        })
    }

    pub fn letters(&self) -> &[G::Elem] {
        &self.letters
    }

    fn in_right(&self, r: u64, z: &G::Elem, y: &G::Elem) -> bool {
        self.group.norm(&self.group.mul(y, &self.group.inv(z))) <= r
    }

    /// Minimal `K ⊆ candidates` with `set ⊆ U_r K`, first in lexicographic order.
    fn translates(&self, r: u64, set: &[G::Elem], candidates: &[G::Elem]) -> Result<Vec<G::Elem>> {
        if set.is_empty() {
            return Ok(Vec::new());
        }
        for size in 1..=candidates.len() {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                if set
                    .iter()
                    .all(|y| idx.iter().any(|&i| self.in_right(r, &candidates[i], y)))
                {
                    return Ok(idx.iter().map(|&i| candidates[i].clone()).collect());
                }
                // Next combination.
                let mut i = size;
                while i > 0 && idx[i - 1] == candidates.len() - size + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..size {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        Err(Error::Schedule {
            condition: "(i)".into(),
            detail: format!("the answer of Θ does not bound its own set in U_{r}"),
        })
    }

    /// The first `terms` auxiliary rounds after the radius history `q`.
    pub fn chain(&self, q: &[u64], terms: usize) -> Result<Vec<ChainStep<G::Elem>>> {
        let big = *q.last().ok_or_else(|| Error::Strategy("empty history".into()))?;
        let mut r = match &self.schedule {
            LiftSchedule::Derived => big / 2,
            LiftSchedule::Fixed(f) => f[0],
        };
        let mut history: Vec<usize> = q.iter().map(|&x| x as usize).collect();
        let mut out = Vec::with_capacity(terms);
        for k in 0..terms {
            history.push(r as usize);
            let cert = self.theta.respond(&history)?;
            if cert.cover != r as usize {
                return Err(Error::Schedule {
                    condition: "(i)".into(),
                    detail: format!("Θ answered cover {} in round of radius {r}", cert.cover),
                });
            }
            let set: Vec<G::Elem> = self
                .letters
                .iter()
                .filter(|y| cert.members.iter().any(|z| self.in_right(r, z, y)))
                .cloned()
                .collect();
            let translates = self.translates(r, &set, &cert.members)?;
            let kappa = translates.iter().map(|z| self.group.norm(z)).max().unwrap_or(0);
            let next = match &self.schedule {
                LiftSchedule::Derived => (r / 2).min(r.saturating_sub(2 * kappa)),
                LiftSchedule::Fixed(f) => match f.get(k + 1) {
                    Some(&next) => next,
                    None if k + 1 == terms => 0,
                    None => return Err(Error::Range(format!("no auxiliary radius {}", k + 1))),
                },
            };
            if next > 0 && next + 2 * kappa > r {
                return Err(Error::Schedule {
                    condition: "(iii)".into(),
                    detail: format!("z U_{} z⁻¹ ⊄ U_{k} for a translate of length {kappa}", k + 1),
                });
            }
            out.push(ChainStep {
                radius: r,
                set,
                translates,
            });
            r = next;
        }
        Ok(out)
    }

    /// `q_{2n-2}(s)` for the radius history `s` of length `n`.
    pub fn interleave(&self, s: &[u64]) -> Result<Vec<u64>> {
        let mut q = vec![s[0]];
        for k in 0..s.len() - 1 {
            let w = self.chain(&q, 2 * k + 1)?;
            q.extend(w.iter().map(|st| st.radius));
            q.push(s[k + 1]);
        }
        Ok(q)
    }

    fn product(&self, factors: &[Vec<G::Elem>]) -> Arc<Vec<G::Elem>> {
        let mut cache = self.products.lock().unwrap();
        let mut known = 0;
        let mut acc = Arc::new(vec![self.group.identity()]);
        for j in (1..=factors.len()).rev() {
            if let Some(p) = cache.get(&factors[..j]) {
                known = j;
                acc = p.clone();
                break;
            }
        }
        for j in known..factors.len() {
            let next: BTreeSet<G::Elem> = acc
                .iter()
                .flat_map(|a| factors[j].iter().map(move |b| (a, b)))
                .map(|(a, b)| self.group.mul(a, b))
                .collect();
            acc = Arc::new(next.into_iter().collect());
            cache.insert(factors[..=j].to_vec(), acc.clone());
        }
        acc
    }

    /// `Θ₁(s) = A_0 A_2 ⋯ A_{2n-2}` over `q_{2n-2}(s)`, sorted.
    pub fn lifted_set(&self, history: &[usize]) -> Result<Arc<Vec<G::Elem>>> {
        let s: Vec<u64> = history
            .iter()
            .map(|&i| {
                self.radii
                    .get(i)
                    .copied()
                    .ok_or_else(|| Error::Strategy(format!("no cover {i}")))
            })
            .collect::<Result<_>>()?;
        if s.is_empty() {
            return Err(Error::Strategy("empty history".into()));
        }
        let n = s.len();
        let q = self.interleave(&s)?;
        let chain = self.chain(&q, 2 * n - 1)?;
        let factors: Vec<Vec<G::Elem>> = chain.into_iter().step_by(2).map(|st| st.set).collect();
        Ok(self.product(&factors))
    }

    /// Θ₁'s move: the lifted set with a greedy certificate of right translates
    /// in I's last cover, trying the identity first.
    pub fn play(&self, history: &[usize]) -> Result<Move<G::Elem, G::Elem>> {
        let cover = last_cover(history)?;
        let set = self.lifted_set(history)?;
        let r = self.radii[cover];
        let e = self.group.identity();
        let mut members = Vec::new();
        if set.iter().all(|y| self.in_right(r, &e, y)) {
            members.push(e);
        } else {
            let mut left: Vec<&G::Elem> = set.iter().collect();
            let mut candidates: Vec<G::Elem> = set.iter().cloned().collect();
            candidates.insert(0, e);
            while !left.is_empty() {
                let best = candidates
                    .iter()
                    .max_by_key(|z| {
                        (
                            left.iter().filter(|y| self.in_right(r, z, y)).count(),
                            std::cmp::Reverse(*z),
                        )
                    })
                    .expect("candidates")
                    .clone();
                left.retain(|y| !self.in_right(r, &best, y));
                members.push(best);
            }
        }
        Ok(Move::with_set(Certificate::new(cover, members), set.to_vec()))
    }
}

impl<G: Group> Strategy<G::Elem> for LiftedStrategy<G> {
    fn respond(&self, history: &[usize]) -> Result<Certificate<G::Elem>> {
        self.play(history).map(|m| m.certificate)
    }

    fn budget(&self, _round: usize) -> Budget {
        Budget::Unbounded
    }
}

/// Covers the letters in one round: the identity translate when the radius
/// allows, otherwise greedily chosen letters. Its answers hold every letter,
/// so the sets form a γ-cover of the letters.
#[derive(Clone, Debug)]
pub struct LetterStrategy<G: Group> {
    group: Arc<G>,
    letters: Vec<G::Elem>,
}

impl<G: Group> LetterStrategy<G> {
    pub fn new(group: Arc<G>, generators: &[G::Elem]) -> Self {
        let letters = generators
            .iter()
            .flat_map(|x| [x.clone(), group.inv(x)])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        LetterStrategy { group, letters }
    }
}

impl<G: Group> Strategy<G::Elem> for LetterStrategy<G> {
    fn respond(&self, history: &[usize]) -> Result<Certificate<G::Elem>> {
        let r = last_cover(history)? as u64;
        let g = &*self.group;
        let inside = |z: &G::Elem, y: &G::Elem| g.norm(&g.mul(y, &g.inv(z))) <= r;
        let e = g.identity();
        if self.letters.iter().all(|y| inside(&e, y)) {
            return Ok(Certificate::new(r as usize, vec![e]));
        }
        let mut left: Vec<&G::Elem> = self.letters.iter().collect();
        let mut members = Vec::new();
        while let Some(&y) = left.first() {
            left.retain(|x| !inside(y, x));
            members.push(y.clone());
        }
        Ok(Certificate::new(r as usize, members))
    }

    fn budget(&self, _round: usize) -> Budget {
        Budget::Finite(self.letters.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{all_sequences, verify_on_probe, GameConfig, WinKind};
    use crate::spaces::free::{FreeGroup, Word};
    use crate::spaces::group::{group_multicover, FiniteGroup, Side};

    fn lifted_free(rank: usize, horizon: usize) -> (Arc<FreeGroup>, LiftedStrategy<FreeGroup>) {
        let g = Arc::new(FreeGroup::new(rank).unwrap());
        let gens = g.generators();
        let theta = Arc::new(LetterStrategy::new(g.clone(), &gens));
        let r = radius_budget(1, horizon) as u64;
        let lift = LiftedStrategy::new(g.clone(), &gens, theta, vec![r, r + 1], horizon, LiftSchedule::Derived).unwrap();
        (g, lift)
    }

    #[test]
    fn trivial_group() {
        let g = Arc::new(FiniteGroup::cyclic(1).unwrap());
        let theta = Arc::new(LetterStrategy::new(g.clone(), &[0]));
        let lift = LiftedStrategy::new(g, &[0], theta, vec![1 << 10], 4, LiftSchedule::Derived).unwrap();
        for h in [vec![0], vec![0, 0, 0]] {
            assert_eq!(*lift.lifted_set(&h).unwrap(), vec![0]);
        }
    }

    #[test]
    fn integers_as_free_group_of_rank_one() {
        let (g, lift) = lifted_free(1, 8);
        let probe: Vec<Word> = (-5i8..=5)
            .map(|x| Word::new(&vec![x.signum(); x.unsigned_abs() as usize]))
            .collect();
        let mc = group_multicover(g, &lift.radii.clone(), Side::Right).unwrap();
        let cfg = GameConfig::new(8, Budget::Unbounded, WinKind::Cover);
        let v = verify_on_probe(&mc, &cfg, &probe, &all_sequences(2, 8), |h| lift.play(h));
        assert!(v.is_yes(), "{v:?}");
        // Round n plays exactly the sums of n letters: here ±1 and ±3.
        let set = lift.lifted_set(&[0, 1, 0]).unwrap();
        let shown: Vec<String> = set.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["A", "a", "AAA", "aaa"]);
    }

    #[test]
    fn chain_radii_halve() {
        let (_, lift) = lifted_free(2, 3);
        let r = lift.radii[0];
        let c = lift.chain(&[r], 5).unwrap();
        assert_eq!(c[0].radius, r / 2);
        assert!(c.windows(2).all(|w| w[1].radius == w[0].radius / 2));
        assert!(c.iter().all(|st| st.translates == vec![Word::identity()]));
        assert_eq!(lift.interleave(&[r, r, r]).unwrap().len(), 1 + 1 + 1 + 3 + 1);
    }

    #[test]
    fn budget_and_fixed_schedule_violations() {
        let g = Arc::new(FreeGroup::new(2).unwrap());
        let gens = g.generators();
        let theta: Arc<dyn Strategy<Word>> = Arc::new(LetterStrategy::new(g.clone(), &gens));
        let small = LiftedStrategy::new(g.clone(), &gens, theta.clone(), vec![100], 4, LiftSchedule::Derived);
        assert!(matches!(small, Err(Error::Schedule { condition, .. }) if condition == "radius budget"));
        let bad = LiftedStrategy::new(g.clone(), &gens, theta.clone(), vec![100], 2, LiftSchedule::Fixed(vec![40, 30, 10]));
        assert!(matches!(bad, Err(Error::Schedule { condition, .. }) if condition == "(ii)"));
        // Answering with letters as translates forces conjugation room of 2 per round.
        let letters: Vec<Word> = ["a", "b", "A", "B"].iter().map(|w| g.word(w).unwrap()).collect();
        let by_letters: Arc<dyn Strategy<Word>> = Arc::new(crate::game::FnStrategy::new(Budget::Finite(4), move |h: &[usize]| {
            Ok(Certificate::new(*h.last().unwrap(), letters.clone()))
        }));
        let tight = LiftedStrategy::new(g, &gens, by_letters, vec![4], 2, LiftSchedule::Fixed(vec![2, 1, 0])).unwrap();
        let err = tight.lifted_set(&[0, 0]).unwrap_err();
        assert!(matches!(&err, Error::Schedule { condition, .. } if condition == "(iii)"), "{err:?}");
    }
}
