use serde::Serialize;

use super::{Cover, Multicover};
use crate::bits::PointSet;
use crate::error::{Error, Result};

/// A cover of `{0, …, n-1}` by explicitly listed members.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct FiniteCover {
    label: String,
    n_points: usize,
    members: Vec<PointSet>,
}

impl FiniteCover {
    /// Members must be nonempty, inside the ground set, and jointly cover it.
    pub fn new(label: impl Into<String>, n_points: usize, members: Vec<PointSet>) -> Result<Self> {
        let label = label.into();
        if n_points == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if n_points > PointSet::CAPACITY {
            return Err(Error::TooManyPoints(n_points, PointSet::CAPACITY));
        }
        let full = PointSet::full(n_points);
        let mut union = PointSet::EMPTY;
        for (i, m) in members.iter().enumerate() {
            if m.is_empty() {
                return Err(Error::InvalidCover {
                    label,
                    reason: format!("member {i} is empty"),
                });
            }
            if !m.is_subset(full) {
                return Err(Error::InvalidCover {
                    label,
                    reason: format!("member {i} leaves the ground set of {n_points} points"),
                });
            }
            union = union.union(*m);
        }
        if union != full {
            return Err(Error::InvalidCover {
                label,
                reason: format!("points {:?} are not covered", full.difference(union)),
            });
        }
        Ok(FiniteCover {
            label,
            n_points,
            members,
        })
    }

    pub fn from_lists(label: impl Into<String>, n_points: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let label = label.into();
        let mut members = Vec::with_capacity(lists.len());
        for l in lists {
            if let Some(&bad) = l.iter().find(|&&p| p >= n_points) {
                return Err(Error::InvalidCover {
                    label,
                    reason: format!("point {bad} is outside the ground set"),
                });
            }
            members.push(l.iter().collect());
        }
        Self::new(label, n_points, members)
    }

    pub fn singletons(n_points: usize) -> Self {
        Self::new("singletons", n_points, (0..n_points).map(PointSet::singleton).collect())
            .expect("singletons cover")
    }

    pub fn whole(n_points: usize) -> Self {
        Self::new("whole", n_points, vec![PointSet::full(n_points)]).expect("whole cover")
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn member(&self, i: usize) -> PointSet {
        self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Product cover of `X × Y`: point `(x, y)` is `x * |Y| + y`, member
    /// `(a, b)` is `a * |v| + b`.
    pub fn product(&self, other: &FiniteCover) -> Result<FiniteCover> {
        let n = self.n_points * other.n_points;
        if n > PointSet::CAPACITY {
            return Err(Error::TooManyPoints(n, PointSet::CAPACITY));
        }
        let mut members = Vec::with_capacity(self.len() * other.len());
        for &a in &self.members {
            for &b in &other.members {
                members.push(rectangle(a, b, other.n_points));
            }
        }
        FiniteCover::new(format!("{}·{}", self.label, other.label), n, members)
    }
}

/// The set `A × B` inside a product of a space with `ny` points.
pub fn rectangle(a: PointSet, b: PointSet, ny: usize) -> PointSet {
    let mut out = PointSet::EMPTY;
    for x in a {
        for y in b {
            out.insert(x * ny + y);
        }
    }
    out
}

impl Cover for FiniteCover {
    type Point = usize;
    type Member = usize;

    fn label(&self) -> &str {
        &self.label
    }

    fn contains(&self, member: &usize, point: &usize) -> bool {
        self.members.get(*member).is_some_and(|m| m.contains(*point))
    }

    fn members_containing(&self, point: &usize) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&i| self.members[i].contains(*point))
            .collect()
    }

    fn member_points(&self, member: &usize) -> Option<Vec<usize>> {
        self.members.get(*member).map(|m| m.to_vec())
    }

    fn members_meeting(&self, _probe: &[usize]) -> Vec<usize> {
        (0..self.members.len()).collect()
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// A finite multicovered space `({0, …, n-1}, λ)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FiniteSpace {
    n_points: usize,
    multicover: Multicover<FiniteCover>,
}

impl FiniteSpace {
    pub fn new(n_points: usize, covers: Vec<FiniteCover>) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if covers.is_empty() {
            return Err(Error::InvalidMulticover("no covers".into()));
        }
        for c in &covers {
            if c.n_points != n_points {
                return Err(Error::InvalidMulticover(format!(
                    "cover `{}` is over {} points, expected {n_points}",
                    c.label, c.n_points
                )));
            }
        }
        Ok(FiniteSpace {
            n_points,
            multicover: Multicover::new(covers),
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn ground(&self) -> PointSet {
        PointSet::full(self.n_points)
    }

    pub fn points(&self) -> Vec<usize> {
        (0..self.n_points).collect()
    }

    pub fn multicover(&self) -> &Multicover<FiniteCover> {
        &self.multicover
    }

    pub fn covers(&self) -> &[FiniteCover] {
        self.multicover.covers()
    }

    pub fn cover(&self, i: usize) -> &FiniteCover {
        &self.multicover.covers()[i]
    }

    pub fn n_covers(&self) -> usize {
        self.multicover.len()
    }

    /// Product multicovered space; covers pair positionally, `(i, j)` is `i * |ν| + j`.
    pub fn product(&self, other: &FiniteSpace) -> Result<FiniteSpace> {
        let mut covers = Vec::with_capacity(self.n_covers() * other.n_covers());
        for u in self.covers() {
            for v in other.covers() {
                covers.push(u.product(v)?);
            }
        }
        FiniteSpace::new(self.n_points * other.n_points, covers)
    }

    /// The subspace on `z` with members `U ∩ Z`; empty and repeated traces are dropped.
    pub fn restrict(&self, z: PointSet) -> Result<Restriction> {
        if z.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        if !z.is_subset(self.ground()) {
            return Err(Error::PointOutOfRange(format!("{:?}", z.difference(self.ground()))));
        }
        let points = z.to_vec();
        let index_of = |p: usize| points.iter().position(|&q| q == p).expect("point in z");
        let mut covers = Vec::new();
        let mut origins = Vec::new();
        for c in self.covers() {
            let mut members: Vec<PointSet> = Vec::new();
            let mut origin = Vec::new();
            for (i, m) in c.members().iter().enumerate() {
                let trace: PointSet = m.intersection(z).iter().map(index_of).collect();
                if !trace.is_empty() && !members.contains(&trace) {
                    members.push(trace);
                    origin.push(i);
                }
            }
            covers.push(FiniteCover::new(format!("{}|Z", c.label()), points.len(), members)?);
            origins.push(origin);
        }
        Ok(Restriction {
            space: FiniteSpace::new(points.len(), covers)?,
            points,
            origins,
        })
    }
}

/// A subspace together with the maps back into its parent.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub space: FiniteSpace,
    /// Parent index of each subspace point.
    pub points: Vec<usize>,
    /// Parent member index of each subspace member, per cover.
    pub origins: Vec<Vec<usize>>,
}

impl Restriction {
    pub fn lift_set(&self, s: PointSet) -> PointSet {
        s.iter().map(|i| self.points[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> PointSet {
        v.iter().collect()
    }

    #[test]
    fn rejects_non_covers() {
        assert!(FiniteCover::from_lists("u", 3, &[vec![0, 1]]).is_err());
        assert!(FiniteCover::from_lists("u", 2, &[vec![0, 1], vec![]]).is_err());
        assert!(FiniteCover::from_lists("u", 2, &[vec![0, 2]]).is_err());
        assert_eq!(FiniteCover::new("u", 0, vec![]), Err(Error::EmptyGroundSet));
    }

    #[test]
    fn product_of_singleton_covers() {
        let u = FiniteCover::singletons(2);
        let p = u.product(&u).unwrap();
        assert_eq!(p.n_points(), 4);
        assert_eq!(p.members(), &[set(&[0]), set(&[1]), set(&[2]), set(&[3])]);
    }

    #[test]
    fn restrict_to_whole_space_is_identity() {
        let s = FiniteSpace::new(4, vec![FiniteCover::singletons(4)]).unwrap();
        let r = s.restrict(s.ground()).unwrap();
        assert_eq!(r.space.covers()[0].members(), s.covers()[0].members());
    }

    #[test]
    fn restrict_prunes_empty_members() {
        let s = FiniteSpace::new(4, vec![FiniteCover::singletons(4)]).unwrap();
        let r = s.restrict(set(&[0, 1])).unwrap();
        assert_eq!(r.space.n_points(), 2);
        assert_eq!(r.space.cover(0).members(), &[set(&[0]), set(&[1])]);
        assert_eq!(r.origins[0], vec![0, 1]);
        assert!(s.restrict(PointSet::EMPTY).is_err());
    }

    #[test]
    fn restrict_commutes_with_product() {
        let u = FiniteCover::from_lists("u", 3, &[vec![0, 1], vec![1, 2]]).unwrap();
        let v = FiniteCover::from_lists("v", 2, &[vec![0], vec![0, 1]]).unwrap();
        let x = FiniteSpace::new(3, vec![u]).unwrap();
        let y = FiniteSpace::new(2, vec![v]).unwrap();
        let z1 = set(&[0, 2]);
        let z2 = set(&[1]);
        let a = x
            .restrict(z1)
            .unwrap()
            .space
            .product(&y.restrict(z2).unwrap().space)
            .unwrap();
        let prod = x.product(&y).unwrap();
        let z = rectangle(z1, z2, 2);
        let b = prod.restrict(z).unwrap().space;
        let mut ma: Vec<_> = a.cover(0).members().to_vec();
        let mut mb: Vec<_> = b.cover(0).members().to_vec();
        ma.sort();
        ma.dedup();
        mb.sort();
        assert_eq!(ma, mb);
    }
}
