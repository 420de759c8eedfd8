//! The coarseness preorder on covers and its multicover lift.
//!
//! `u ≺ v` holds when every `v`-bounded set is `u`-bounded. It is decided
//! member by member: each member of `v` must be covered by at most
//! `search_bound` members of `u`, and unions of per-member certificates then
//! witness every finite subfamily of `v`.

use serde::Serialize;

use super::{bounded_by, Budget, Cover, Multicover, Verdict};
use crate::error::Error;

/// Default per-member certificate size for coarseness checks.
pub const DEFAULT_SEARCH_BOUND: usize = 32;

/// Per-member certificates showing `u ≺ v`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CoarserEvidence<VM, UM> {
    pub per_member: Vec<(VM, Vec<UM>)>,
    /// False when only the members of `v` meeting a probe were examined.
    pub exact: bool,
}

impl<VM, UM> CoarserEvidence<VM, UM> {
    pub fn max_certificate(&self) -> usize {
        self.per_member.iter().map(|(_, c)| c.len()).max().unwrap_or(0)
    }
}

/// A member of `v` that no `search_bound` members of `u` cover.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Refutation<VM, P> {
    pub member: VM,
    pub points: Vec<P>,
}

/// Decides `u ≺ v`. For lazy covers only members of `v` meeting `probe` are examined.
#[allow(clippy::type_complexity)]
pub fn coarser_than<U, V>(
    u: &U,
    v: &V,
    probe: &[U::Point],
    search_bound: usize,
) -> Verdict<CoarserEvidence<V::Member, U::Member>, Refutation<V::Member, U::Point>>
where
    U: Cover,
    V: Cover<Point = U::Point>,
{
    let mut per_member = Vec::new();
    for vm in v.members_meeting(probe) {
        let Some(points) = v.member_points(&vm) else {
            return Verdict::Unknown(format!("member {vm:?} of `{}` is too large to list", v.label()));
        };
        match bounded_by(u, &points, Budget::Finite(search_bound)) {
            Ok(Some(cert)) => per_member.push((vm, cert)),
            Ok(None) => return Verdict::No(Refutation { member: vm, points }),
            Err(Error::SearchLimit(n)) => {
                return Verdict::Unknown(format!("search limit {n} hit on member {vm:?}"))
            }
            Err(e) => return Verdict::Unknown(e.to_string()),
        }
    }
    Verdict::Yes(CoarserEvidence {
        per_member,
        exact: u.is_exact() && v.is_exact(),
    })
}

/// `λ ≺ ν`: for every `u ∈ λ` some `v ∈ ν` has `u ≺ v`. Yes carries, per cover
/// of `λ`, the index of the matching cover of `ν`; No carries the failing index.
pub fn multicover_coarser<C, D>(
    lambda: &Multicover<C>,
    nu: &Multicover<D>,
    probe: &[C::Point],
    search_bound: usize,
) -> Verdict<Vec<usize>, usize>
where
    C: Cover,
    D: Cover<Point = C::Point>,
{
    let mut matches = Vec::with_capacity(lambda.len());
    for (i, u) in lambda.covers().iter().enumerate() {
        let mut unknown = None;
        let mut found = None;
        for (j, v) in nu.covers().iter().enumerate() {
            match coarser_than(u, v, probe, search_bound) {
                Verdict::Yes(_) => {
                    found = Some(j);
                    break;
                }
                Verdict::No(_) => {}
                Verdict::Unknown(why) => unknown = Some(why),
            }
        }
        match (found, unknown) {
            (Some(j), _) => matches.push(j),
            (None, Some(why)) => return Verdict::Unknown(why),
            (None, None) => return Verdict::No(i),
        }
    }
    Verdict::Yes(matches)
}

/// Which side of an equivalence check failed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Direction {
    LambdaBelowNu,
    NuBelowLambda,
}

/// `λ ≅ ν`: both `λ ≺ ν` and `ν ≺ λ`.
#[allow(clippy::type_complexity)]
pub fn equivalent_multicovers<C, D>(
    lambda: &Multicover<C>,
    nu: &Multicover<D>,
    probe: &[C::Point],
    search_bound: usize,
) -> Verdict<(Vec<usize>, Vec<usize>), (Direction, usize)>
where
    C: Cover,
    D: Cover<Point = C::Point>,
{
    let forward = match multicover_coarser(lambda, nu, probe, search_bound) {
        Verdict::Yes(m) => m,
        Verdict::No(i) => return Verdict::No((Direction::LambdaBelowNu, i)),
        Verdict::Unknown(w) => return Verdict::Unknown(w),
    };
    match multicover_coarser(nu, lambda, probe, search_bound) {
        Verdict::Yes(back) => Verdict::Yes((forward, back)),
        Verdict::No(i) => Verdict::No((Direction::NuBelowLambda, i)),
        Verdict::Unknown(w) => Verdict::Unknown(w),
    }
}

/// Every pair of covers has an upper bound in the multicover. Pairs suffice:
/// an upper bound of a pair together with a third cover has, inductively, an
/// upper bound of all three. The declared bound is tried first, then every cover.
/// Yes carries the bound found for each pair `(i, j)` with `i < j`.
pub fn is_centered<C: Cover>(
    lambda: &Multicover<C>,
    probe: &[C::Point],
    search_bound: usize,
) -> Verdict<Vec<((usize, usize), usize)>, (usize, usize)> {
    let covers = lambda.covers();
    let mut bounds = Vec::new();
    for i in 0..covers.len() {
        for j in i + 1..covers.len() {
            let declared = lambda.declared_upper_bound(i, j);
            let order = std::iter::once(declared).chain((0..covers.len()).filter(|&k| k != declared));
            let mut unknown = None;
            let mut found = None;
            for k in order {
                let a = coarser_than(&covers[i], &covers[k], probe, search_bound);
                let b = coarser_than(&covers[j], &covers[k], probe, search_bound);
                match (a, b) {
                    (Verdict::Yes(_), Verdict::Yes(_)) => {
                        found = Some(k);
                        break;
                    }
                    (Verdict::Unknown(w), _) | (_, Verdict::Unknown(w)) => unknown = Some(w),
                    _ => {}
                }
            }
            match (found, unknown) {
                (Some(k), _) => bounds.push(((i, j), k)),
                (None, Some(w)) => return Verdict::Unknown(w),
                (None, None) => return Verdict::No((i, j)),
            }
        }
    }
    Verdict::Yes(bounds)
}

/// The points (ground set or probe) are `u`-bounded within `budget` for every
/// cover. Yes carries one certificate per cover; No carries the cover index
/// and a minimal unbounded subset of the points.
#[allow(clippy::type_complexity)]
pub fn is_totally_bounded<C: Cover>(
    lambda: &Multicover<C>,
    points: &[C::Point],
    budget: Budget,
) -> Verdict<Vec<Vec<C::Member>>, (usize, Vec<C::Point>)> {
    let mut certs = Vec::with_capacity(lambda.len());
    for (i, u) in lambda.covers().iter().enumerate() {
        match bounded_by(u, points, budget) {
            Ok(Some(c)) => certs.push(c),
            Ok(None) => {
                // Shrink from the top so the witness is the lexicographically
                // earliest minimal unbounded subset reachable this way.
                let mut witness: Vec<C::Point> = points.to_vec();
                witness.sort();
                witness.dedup();
                let mut idx = witness.len();
                while idx > 0 {
                    idx -= 1;
                    let mut trial = witness.clone();
                    trial.remove(idx);
                    if let Ok(None) = bounded_by(u, &trial, budget) {
                        witness = trial;
                    }
                }
                return Verdict::No((i, witness));
            }
            Err(e) => return Verdict::Unknown(e.to_string()),
        }
    }
    Verdict::Yes(certs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::FiniteCover;

    fn u(lists: &[Vec<usize>]) -> FiniteCover {
        FiniteCover::from_lists("u", 4, lists).unwrap()
    }

    #[test]
    fn reflexive_on_finite() {
        let a = u(&[vec![0, 1], vec![2, 3]]);
        assert!(coarser_than(&a, &a, &[], DEFAULT_SEARCH_BOUND).is_yes());
    }

    #[test]
    fn refinement_gives_singleton_certificates() {
        let coarse = u(&[vec![0, 1], vec![2, 3]]);
        let fine = FiniteCover::singletons(4);
        match coarser_than(&coarse, &fine, &[], 1) {
            Verdict::Yes(ev) => assert_eq!(ev.max_certificate(), 1),
            other => panic!("{other:?}"),
        }
        // The other direction needs two singletons per pair.
        assert!(coarser_than(&fine, &coarse, &[], 1).is_no());
        assert!(coarser_than(&fine, &coarse, &[], 2).is_yes());
    }

    #[test]
    fn finite_preorder_is_total_at_default_bound() {
        let a = FiniteCover::singletons(4);
        let b = FiniteCover::whole(4);
        assert!(coarser_than(&a, &b, &[], DEFAULT_SEARCH_BOUND).is_yes());
        assert!(coarser_than(&b, &a, &[], DEFAULT_SEARCH_BOUND).is_yes());
    }

    #[test]
    fn totally_bounded_witness() {
        let lambda = Multicover::new(vec![u(&[vec![0, 1], vec![2, 3]])]);
        let pts = [0, 1, 2, 3];
        assert_eq!(
            is_totally_bounded(&lambda, &pts, Budget::Finite(1)).strip(),
            Verdict::No(())
        );
        match is_totally_bounded(&lambda, &pts, Budget::Finite(1)) {
            Verdict::No((0, w)) => assert_eq!(w, vec![0, 2]),
            other => panic!("{other:?}"),
        }
        let three = Multicover::new(vec![FiniteCover::singletons(3), FiniteCover::whole(3)]);
        assert!(is_totally_bounded(&three, &[0, 1, 2], Budget::Finite(3)).is_yes());
    }

    #[test]
    fn identity_multicover_is_centered_and_equivalent() {
        let lambda = Multicover::new(vec![u(&[vec![0, 1], vec![2, 3]]), FiniteCover::singletons(4)]);
        assert!(is_centered(&lambda, &[], DEFAULT_SEARCH_BOUND).is_yes());
        assert!(equivalent_multicovers(&lambda, &lambda, &[], DEFAULT_SEARCH_BOUND).is_yes());
    }
}
