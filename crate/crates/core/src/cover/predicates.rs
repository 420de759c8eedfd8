//! Finite surrogates of the cover classes, evaluated over a probe.
//!
//! The ω-cover family of checks quantifies over every subset of the probe with
//! at most `k` points. Enumeration is pruned: once some admissible member
//! contains every probe point not yet decided, all extensions pass at once.

use super::Contains;
use crate::bits::DenseBits;

/// Default minimum number of members engulfing each set in a proper ω-cover.
pub const DEFAULT_MIN_OCCURRENCES: usize = 2;

/// Every probe point lies in some member. An empty probe is covered.
pub fn is_cover<P, S: Contains<P>>(family: &[S], probe: &[P]) -> bool {
    probe
        .iter()
        .all(|p| family.iter().any(|m| m.contains_point(p)))
}

/// Every subset of the probe with at most `k` points lies in a single member.
/// `k` larger than the probe is clamped to the probe size.
pub fn is_omega_cover<P, S: Contains<P>>(family: &[S], probe: &[P], k: usize) -> bool {
    omega_failure(family, probe, k, 1).is_none()
}

/// Every probe point belongs to `family[n]` for all `n` in `[m, len)` except at
/// most `f` indices.
pub fn is_gamma_cover<P, S: Contains<P>>(family: &[S], probe: &[P], m: usize, f: usize) -> bool {
    probe.iter().all(|p| {
        family
            .iter()
            .skip(m)
            .filter(|member| !member.contains_point(p))
            .count()
            <= f
    })
}

/// Every subset of the probe with at most `k` points lies in at least `t`
/// distinct members.
pub fn is_proper_omega_cover<P, S: Contains<P>>(family: &[S], probe: &[P], k: usize, t: usize) -> bool {
    omega_failure(family, probe, k, t).is_none()
}

/// First subset (as probe indices, in enumeration order) of at most `k` points
/// contained in fewer than `t` members.
pub fn omega_failure<P, S: Contains<P>>(family: &[S], probe: &[P], k: usize, t: usize) -> Option<Vec<usize>> {
    let t = t.max(1);
    let n = probe.len();
    if n == 0 {
        return None;
    }
    if family.len() < t {
        return Some(Vec::new());
    }
    let k = k.min(n);
    let m = Matrix::build(family, probe);
    let mut chosen = Vec::with_capacity(k);
    let all = DenseBits::ones(family.len());
    if m.search(0, k, t, &all, &mut chosen) {
        None
    } else {
        Some(chosen)
    }
}

/// Least number of members containing a subset of at most `k` probe points.
pub fn omega_multiplicity<P, S: Contains<P>>(family: &[S], probe: &[P], k: usize) -> usize {
    let n = probe.len();
    if n == 0 {
        return family.len();
    }
    let k = k.min(n);
    let m = Matrix::build(family, probe);
    let mut best = family.len();
    m.min_count(0, k, &DenseBits::ones(family.len()), &mut best);
    best
}

struct Matrix {
    /// Per probe point, the members containing it.
    by_point: Vec<DenseBits>,
    /// Per member, the probe points it contains.
    by_member: Vec<DenseBits>,
    n: usize,
}

impl Matrix {
    fn build<P, S: Contains<P>>(family: &[S], probe: &[P]) -> Self {
        let n = probe.len();
        let mut by_point = vec![DenseBits::zeros(family.len()); n];
        let mut by_member = vec![DenseBits::zeros(n); family.len()];
        for (i, member) in family.iter().enumerate() {
            for (j, p) in probe.iter().enumerate() {
                if member.contains_point(p) {
                    by_point[j].set(i);
                    by_member[i].set(j);
                }
            }
        }
        Matrix { by_point, by_member, n }
    }

    /// True when every extension of `chosen` by points at or after `start`, up
    /// to `k` points in total, stays inside at least `t` members of `admissible`.
    fn search(&self, start: usize, k: usize, t: usize, admissible: &DenseBits, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k || start >= self.n {
            return true;
        }
        let rest = DenseBits::suffix(self.n, start);
        let engulfing = admissible
            .iter_ones()
            .filter(|&i| rest.is_subset(&self.by_member[i]))
            .take(t)
            .count();
        if engulfing >= t {
            return true;
        }
        for j in start..self.n {
            let mut next = admissible.clone();
            next.and_assign(&self.by_point[j]);
            chosen.push(j);
            if next.count() < t || !self.search(j + 1, k, t, &next, chosen) {
                return false;
            }
            chosen.pop();
        }
        true
    }

    fn min_count(&self, start: usize, k: usize, admissible: &DenseBits, best: &mut usize) {
        *best = (*best).min(admissible.count());
        if k == 0 || *best == 0 {
            return;
        }
        for j in start..self.n {
            let mut next = admissible.clone();
            next.and_assign(&self.by_point[j]);
            self.min_count(j + 1, k - 1, &next, best);
        }
    }
}
