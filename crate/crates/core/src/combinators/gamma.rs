use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::cover::{Budget, Certificate};
use crate::error::{Error, Result};
use crate::game::Strategy;

/// Largest horizon of the strategy being upgraded.
pub const MAX_UPGRADE_HORIZON: usize = 12;

/// Most subsequences one answer may union.
pub const MAX_SUBSEQUENCES: u128 = 1 << 16;

/// `Θ₁(u_0, …, u_n)`: the union of `Θ` over the subsequences
/// `(u_{i_0}, …, u_{i_j}, u_n)` with `i_0 < ⋯ < i_j < n`. Subsequences longer
/// than `Θ`'s own horizon are skipped, since `Θ` does not answer them.
pub struct GammaUpgrade<M = usize> {
    theta: Arc<dyn Strategy<M>>,
    theta_horizon: usize,
    memo: Mutex<HashMap<Vec<usize>, Certificate<M>>>,
}

impl<M> GammaUpgrade<M> {
    pub fn new(theta: Arc<dyn Strategy<M>>, theta_horizon: usize) -> Result<Self> {
        if theta_horizon == 0 || theta_horizon > MAX_UPGRADE_HORIZON {
            return Err(Error::InvalidConfig(format!(
                "upgraded horizon {theta_horizon} outside 1..={MAX_UPGRADE_HORIZON}"
            )));
        }
        Ok(GammaUpgrade {
            theta,
            theta_horizon,
            memo: Mutex::new(HashMap::new()),
        })
    }
}

fn subsets(n: usize, max: usize, mut visit: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    fn go(start: usize, n: usize, max: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
        visit(cur)?;
        if cur.len() == max {
            return Ok(());
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, max, cur, visit)?;
            cur.pop();
        }
        Ok(())
    }
    go(0, n, max, &mut Vec::new(), &mut visit)
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl<M: Ord + Clone + Send + Sync> Strategy<M> for GammaUpgrade<M> {
    fn respond(&self, history: &[usize]) -> Result<Certificate<M>> {
        if history.is_empty() {
            return Err(Error::Strategy("empty history".into()));
        }
        let n = history.len() - 1;
        let count = (0..self.theta_horizon.min(n + 1)).fold(0u128, |a, j| a.saturating_add(binomial_u128(n, j)));
        if count > MAX_SUBSEQUENCES {
            return Err(Error::InvalidConfig(format!(
                "round {n} unions {count} subsequences, above the limit {MAX_SUBSEQUENCES}"
            )));
        }
        let mut out = Certificate::empty(history[n]);
        subsets(n, self.theta_horizon - 1, |idx| {
            let mut sub: Vec<usize> = idx.iter().map(|&i| history[i]).collect();
            sub.push(history[n]);
            let cached = self.memo.lock().unwrap().get(&sub).cloned();
            let cert = match cached {
                Some(c) => c,
                None => {
                    let c = self.theta.respond(&sub)?;
                    self.memo.lock().unwrap().insert(sub, c.clone());
                    c
                }
            };
            if cert.cover != history[n] {
                return Err(Error::Strategy(format!(
                    "Θ answered cover {} for a subsequence ending in {}",
                    cert.cover, history[n]
                )));
            }
            out = out.merge(&cert);
            Ok(())
        })?;
        Ok(out)
    }

    /// `Σ_{j < L_Θ} C(n, j)·b_j`, at most `2ⁿ` times the largest input budget.
    fn budget(&self, round: usize) -> Budget {
        (0..self.theta_horizon.min(round + 1)).fold(Budget::Finite(0), |acc, j| {
            acc.plus(self.theta.budget(j).scale(binomial(round, j)))
        })
    }
}

/// Replays the defining containment: for every sequence, round `n` and index
/// subsequence `i_0 < ⋯ < i_j < n` of length below `theta_horizon`, the members
/// of `Θ(u_{i_0}, …, u_{i_j}, u_n)` appear in `Θ₁(u_0, …, u_n)`. Returns the first
/// violation as (sequence prefix, indices including `n`).
pub fn check_subsequence_containment<M: Ord + Clone>(
    theta: &dyn Strategy<M>,
    upgraded: &dyn Strategy<M>,
    theta_horizon: usize,
    sequences: &[Vec<usize>],
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    for seq in sequences {
        for n in 0..seq.len() {
            let big = upgraded.respond(&seq[..=n])?;
            let mut bad = None;
            subsets(n, theta_horizon.saturating_sub(1), |idx| {
                let mut sub: Vec<usize> = idx.iter().map(|&i| seq[i]).collect();
                sub.push(seq[n]);
                let small = theta.respond(&sub)?;
                if bad.is_none() && !small.members.iter().all(|m| big.members.binary_search(m).is_ok()) {
                    let mut at = idx.to_vec();
                    at.push(n);
                    bad = Some((seq[..=n].to_vec(), at));
                }
                Ok(())
            })?;
            if bad.is_some() {
                return Ok(bad);
            }
        }
    }
    Ok(None)
}
