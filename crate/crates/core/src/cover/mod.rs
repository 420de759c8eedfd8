//! Covers, multicovers, boundedness, cover classes and the coarseness preorder.
//!
//! A [`Cover`] is an indexed family of members over some point type. Finite
//! covers index their members by position; lazy covers (lattice balls, word
//! balls) index members by a point of the group. Every question asked about a
//! lazy cover is answered on a finite probe.

mod bounded;
mod finite;
mod map;
mod multicover;
mod order;
mod predicates;

use std::fmt::{self, Debug};
use std::hash::Hash;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::PointSet;

pub use bounded::{bounded_by, bounded_by_with_limit, DEFAULT_NODE_LIMIT};
pub use finite::{FiniteCover, FiniteSpace, Restriction};
pub use map::{FiniteMap, PerfectData, UniformData};
pub use multicover::{restrict, Multicover};
pub use order::{
    coarser_than, equivalent_multicovers, is_centered, is_totally_bounded, multicover_coarser,
    CoarserEvidence, Direction, Refutation, DEFAULT_SEARCH_BOUND,
};
pub use predicates::{
    is_cover, is_gamma_cover, is_omega_cover, is_proper_omega_cover, omega_failure, omega_multiplicity,
    DEFAULT_MIN_OCCURRENCES,
};

/// A family of subsets of a ground set, with decidable membership.
pub trait Cover: Send + Sync {
    type Point: Clone + Eq + Ord + Hash + Debug + Send + Sync;
    type Member: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn label(&self) -> &str;

    fn contains(&self, member: &Self::Member, point: &Self::Point) -> bool;

    /// Every member containing `point`, ascending and duplicate-free.
    fn members_containing(&self, point: &Self::Point) -> Vec<Self::Member>;

    /// The points of a member, when it is finite and small enough to list.
    fn member_points(&self, member: &Self::Member) -> Option<Vec<Self::Point>>;

    /// All members for finite covers; the members meeting `probe` otherwise.
    fn members_meeting(&self, probe: &[Self::Point]) -> Vec<Self::Member> {
        let mut out: Vec<Self::Member> = probe
            .iter()
            .flat_map(|p| self.members_containing(p))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// True when the ground set is finite and answers are exact.
    fn is_exact(&self) -> bool {
        false
    }
}

/// A finite subfamily of one cover of a multicover. Its union is the bounded set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Certificate<M = usize> {
    pub cover: usize,
    pub members: Vec<M>,
}

impl<M: Debug> Debug for Certificate<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}{:?}", self.cover, self.members)
    }
}

impl<M: Ord + Clone> Certificate<M> {
    pub fn new(cover: usize, mut members: Vec<M>) -> Self {
        members.sort();
        members.dedup();
        Certificate { cover, members }
    }

    pub fn empty(cover: usize) -> Self {
        Certificate {
            cover,
            members: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Union of two certificates in the same cover.
    pub fn merge(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cover, other.cover);
        let mut m = self.members.clone();
        m.extend(other.members.iter().cloned());
        Certificate::new(self.cover, m)
    }
}

impl Certificate<usize> {
    /// The bounded set of a finite certificate.
    pub fn union_in(&self, cover: &FiniteCover) -> PointSet {
        self.members
            .iter()
            .fold(PointSet::EMPTY, |acc, &m| acc.union(cover.member(m)))
    }
}

/// Maximum number of members a certificate may select in one round.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Budget {
    Finite(usize),
    Unbounded,
}

impl Budget {
    pub fn allows(self, size: usize) -> bool {
        match self {
            Budget::Finite(b) => size <= b,
            Budget::Unbounded => true,
        }
    }

    pub fn limit(self) -> Option<usize> {
        match self {
            Budget::Finite(b) => Some(b),
            Budget::Unbounded => None,
        }
    }

    pub fn plus(self, other: Budget) -> Budget {
        match (self, other) {
            (Budget::Finite(a), Budget::Finite(b)) => Budget::Finite(a + b),
            _ => Budget::Unbounded,
        }
    }

    pub fn times(self, other: Budget) -> Budget {
        match (self, other) {
            (Budget::Finite(0), _) | (_, Budget::Finite(0)) => Budget::Finite(0),
            (Budget::Finite(a), Budget::Finite(b)) => Budget::Finite(a * b),
            _ => Budget::Unbounded,
        }
    }

    pub fn scale(self, k: usize) -> Budget {
        self.times(Budget::Finite(k))
    }
}

impl Serialize for Budget {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Budget::Finite(b) => s.serialize_u64(*b as u64),
            Budget::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for Budget {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|b| Budget::Finite(b as usize))
                .ok_or_else(|| serde::de::Error::custom("budget must be a nonnegative integer")),
            serde_json::Value::String(s) if s == "unbounded" => Ok(Budget::Unbounded),
            other => Err(serde::de::Error::custom(format!(
                "budget must be an integer or \"unbounded\", got {other}"
            ))),
        }
    }
}

/// Three-valued answer for semi-decidable questions. `Yes` and `No` carry
/// replayable evidence; `Unknown` says which bound was hit.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Verdict<Y = (), N = ()> {
    Yes(Y),
    No(N),
    Unknown(String),
}

impl<Y, N> Verdict<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No(_) => "no",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn strip(&self) -> Verdict<(), ()> {
        match self {
            Verdict::Yes(_) => Verdict::Yes(()),
            Verdict::No(_) => Verdict::No(()),
            Verdict::Unknown(s) => Verdict::Unknown(s.clone()),
        }
    }
}

/// Membership test used by the cover-class predicates.
pub trait Contains<P> {
    fn contains_point(&self, p: &P) -> bool;
}

impl Contains<usize> for PointSet {
    fn contains_point(&self, p: &usize) -> bool {
        self.contains(*p)
    }
}

impl<P: Ord> Contains<P> for std::collections::BTreeSet<P> {
    fn contains_point(&self, p: &P) -> bool {
        self.contains(p)
    }
}

impl<P, T: Contains<P>> Contains<P> for &T {
    fn contains_point(&self, p: &P) -> bool {
        (**self).contains_point(p)
    }
}

/// The union of a certificate's members, evaluated lazily.
pub struct CertUnion<'a, C: Cover> {
    pub cover: &'a C,
    pub members: &'a [C::Member],
}

impl<'a, C: Cover> CertUnion<'a, C> {
    pub fn new(cover: &'a C, members: &'a [C::Member]) -> Self {
        CertUnion { cover, members }
    }
}

impl<C: Cover> Contains<C::Point> for CertUnion<'_, C> {
    fn contains_point(&self, p: &C::Point) -> bool {
        self.members.iter().any(|m| self.cover.contains(m, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_arithmetic() {
        assert_eq!(Budget::Finite(2).plus(Budget::Finite(3)), Budget::Finite(5));
        assert_eq!(Budget::Finite(2).times(Budget::Unbounded), Budget::Unbounded);
        assert_eq!(Budget::Finite(0).times(Budget::Unbounded), Budget::Finite(0));
        assert!(Budget::Unbounded.allows(1000));
        assert!(!Budget::Finite(1).allows(2));
    }

    #[test]
    fn budget_json() {
        assert_eq!(serde_json::to_string(&Budget::Finite(3)).unwrap(), "3");
        assert_eq!(
            serde_json::from_str::<Budget>("\"unbounded\"").unwrap(),
            Budget::Unbounded
        );
        assert!(serde_json::from_str::<Budget>("-1").is_err());
    }

    #[test]
    fn certificate_normalizes() {
        let c = Certificate::new(0, vec![3usize, 1, 3]);
        assert_eq!(c.members, vec![1, 3]);
        assert_eq!(c.merge(&Certificate::new(0, vec![2])).members, vec![1, 2, 3]);
    }
}
