use serde::Serialize;

use super::{bounded_by, Budget, Certificate, FiniteSpace};
use crate::bits::PointSet;
use crate::error::{Error, Result};

/// A map between the ground sets of two finite spaces.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FiniteMap {
    image: Vec<usize>,
    n_target: usize,
}

impl FiniteMap {
    pub fn new(image: Vec<usize>, n_target: usize) -> Result<Self> {
        if let Some(bad) = image.iter().position(|&y| y >= n_target) {
            return Err(Error::InvalidMap(format!(
                "point {bad} maps to {} outside a target of {n_target} points",
                image[bad]
            )));
        }
        Ok(FiniteMap { image, n_target })
    }

    pub fn identity(n: usize) -> Self {
        FiniteMap {
            image: (0..n).collect(),
            n_target: n,
        }
    }

    pub fn n_source(&self) -> usize {
        self.image.len()
    }

    pub fn n_target(&self) -> usize {
        self.n_target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image_of(&self, a: PointSet) -> PointSet {
        a.iter().map(|x| self.image[x]).collect()
    }

    pub fn preimage_of(&self, b: PointSet) -> PointSet {
        (0..self.image.len()).filter(|&x| b.contains(self.image[x])).collect()
    }

    pub fn is_onto(&self, probe: PointSet) -> bool {
        probe.is_subset(self.image_of(PointSet::full(self.image.len())))
    }

    fn check_spaces(&self, x: &FiniteSpace, y: &FiniteSpace) -> Result<()> {
        if x.n_points() != self.n_source() || y.n_points() != self.n_target {
            return Err(Error::InvalidMap(format!(
                "map is {} -> {} points, spaces have {} and {}",
                self.n_source(),
                self.n_target,
                x.n_points(),
                y.n_points()
            )));
        }
        Ok(())
    }
}

/// Perfectness data: each source cover `u` is paired with a target cover
/// `assign[u]`, and each member `V` of that cover with a `u`-certificate for `f⁻¹(V)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PerfectData {
    pub assign: Vec<usize>,
    pub preimages: Vec<Vec<Vec<usize>>>,
}

impl PerfectData {
    /// Computes minimum preimage certificates for the given assignment.
    pub fn compute(f: &FiniteMap, x: &FiniteSpace, y: &FiniteSpace, assign: Vec<usize>) -> Result<Self> {
        f.check_spaces(x, y)?;
        if assign.len() != x.n_covers() {
            return Err(Error::InvalidMap(format!(
                "assignment has {} entries for {} source covers",
                assign.len(),
                x.n_covers()
            )));
        }
        let mut preimages = Vec::with_capacity(assign.len());
        for (u, &v) in assign.iter().enumerate() {
            let target = y
                .covers()
                .get(v)
                .ok_or_else(|| Error::InvalidMap(format!("source cover {u} assigned to missing cover {v}")))?;
            let mut per_member = Vec::with_capacity(target.len());
            for &member in target.members() {
                let pre = f.preimage_of(member).to_vec();
                let cert = bounded_by(x.cover(u), &pre, Budget::Unbounded)?
                    .ok_or_else(|| Error::InvalidMap(format!("preimage of a member is not {u}-bounded")))?;
                per_member.push(cert);
            }
            preimages.push(per_member);
        }
        Ok(PerfectData { assign, preimages })
    }

    /// Replays every stored certificate: `f⁻¹(V) ⊆ ∪ cert`.
    pub fn verify(&self, f: &FiniteMap, x: &FiniteSpace, y: &FiniteSpace) -> Result<()> {
        f.check_spaces(x, y)?;
        for (u, &v) in self.assign.iter().enumerate() {
            let cover = x.cover(u);
            for (j, cert) in self.preimages[u].iter().enumerate() {
                let pre = f.preimage_of(y.cover(v).member(j));
                let union = Certificate::new(u, cert.clone()).union_in(cover);
                if !pre.is_subset(union) {
                    return Err(Error::InvalidMap(format!(
                        "preimage of member {j} of cover {v} escapes its certificate in cover {u}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Largest preimage certificate; pulled-back budgets scale by this factor.
    pub fn multiplier(&self) -> usize {
        self.preimages
            .iter()
            .flatten()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
    }

    /// Preimage of a target certificate as a certificate in source cover `u`.
    pub fn pull(&self, u: usize, target: &Certificate) -> Result<Certificate> {
        if target.cover != self.assign[u] {
            return Err(Error::Strategy(format!(
                "target certificate is in cover {}, source cover {u} is paired with {}",
                target.cover, self.assign[u]
            )));
        }
        let mut members = Vec::new();
        for &m in &target.members {
            let cert = self.preimages[u].get(m).ok_or_else(|| {
                Error::Strategy(format!("target member {m} has no preimage certificate"))
            })?;
            members.extend_from_slice(cert);
        }
        Ok(Certificate::new(u, members))
    }
}

/// Uniform boundedness data: each target cover `v` is paired with a source
/// cover `assign[v]`, and each member `U` of that cover with a `v`-certificate for `f(U)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct UniformData {
    pub assign: Vec<usize>,
    pub images: Vec<Vec<Vec<usize>>>,
}

impl UniformData {
    pub fn compute(f: &FiniteMap, x: &FiniteSpace, y: &FiniteSpace, assign: Vec<usize>) -> Result<Self> {
        f.check_spaces(x, y)?;
        if assign.len() != y.n_covers() {
            return Err(Error::InvalidMap(format!(
                "assignment has {} entries for {} target covers",
                assign.len(),
                y.n_covers()
            )));
        }
        let mut images = Vec::with_capacity(assign.len());
        for (v, &u) in assign.iter().enumerate() {
            let source = x
                .covers()
                .get(u)
                .ok_or_else(|| Error::InvalidMap(format!("target cover {v} assigned to missing cover {u}")))?;
            let mut per_member = Vec::with_capacity(source.len());
            for &member in source.members() {
                let img = f.image_of(member).to_vec();
                let cert = bounded_by(y.cover(v), &img, Budget::Unbounded)?
                    .ok_or_else(|| Error::InvalidMap(format!("image of a member is not {v}-bounded")))?;
                per_member.push(cert);
            }
            images.push(per_member);
        }
        Ok(UniformData { assign, images })
    }

    pub fn verify(&self, f: &FiniteMap, x: &FiniteSpace, y: &FiniteSpace) -> Result<()> {
        f.check_spaces(x, y)?;
        for (v, &u) in self.assign.iter().enumerate() {
            for (i, cert) in self.images[v].iter().enumerate() {
                let img = f.image_of(x.cover(u).member(i));
                let union = Certificate::new(v, cert.clone()).union_in(y.cover(v));
                if !img.is_subset(union) {
                    return Err(Error::InvalidMap(format!(
                        "image of member {i} of cover {u} escapes its certificate in cover {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn multiplier(&self) -> usize {
        self.images.iter().flatten().map(Vec::len).max().unwrap_or(0)
    }

    /// Image of a source certificate in cover `assign[v]` as a certificate in cover `v`.
    pub fn push(&self, v: usize, source: &Certificate) -> Result<Certificate> {
        if source.cover != self.assign[v] {
            return Err(Error::Strategy(format!(
                "source certificate is in cover {}, target cover {v} is paired with {}",
                source.cover, self.assign[v]
            )));
        }
        let mut members = Vec::new();
        for &m in &source.members {
            let cert = self.images[v]
                .get(m)
                .ok_or_else(|| Error::Strategy(format!("source member {m} has no image certificate")))?;
            members.extend_from_slice(cert);
        }
        Ok(Certificate::new(v, members))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::FiniteCover;

    fn collapse() -> (FiniteMap, FiniteSpace, FiniteSpace) {
        // {0,1,2,3} -> {0,1}, x ↦ x / 2
        let f = FiniteMap::new(vec![0, 0, 1, 1], 2).unwrap();
        let x = FiniteSpace::new(
            4,
            vec![FiniteCover::from_lists("u", 4, &[vec![0], vec![1], vec![2, 3]]).unwrap()],
        )
        .unwrap();
        let y = FiniteSpace::new(2, vec![FiniteCover::singletons(2)]).unwrap();
        (f, x, y)
    }

    #[test]
    fn rejects_out_of_range_images() {
        assert!(FiniteMap::new(vec![0, 2], 2).is_err());
    }

    #[test]
    fn collapse_is_perfect_with_multiplier_two() {
        let (f, x, y) = collapse();
        let data = PerfectData::compute(&f, &x, &y, vec![0]).unwrap();
        data.verify(&f, &x, &y).unwrap();
        assert_eq!(data.preimages[0], vec![vec![0, 1], vec![2]]);
        assert_eq!(data.multiplier(), 2);
        let pulled = data.pull(0, &Certificate::new(0, vec![0])).unwrap();
        assert_eq!(pulled.members, vec![0, 1]);
    }

    #[test]
    fn collapse_is_uniformly_bounded() {
        let (f, x, y) = collapse();
        let data = UniformData::compute(&f, &x, &y, vec![0]).unwrap();
        data.verify(&f, &x, &y).unwrap();
        assert_eq!(data.multiplier(), 1);
        assert!(f.is_onto(PointSet::full(2)));
        assert_eq!(data.push(0, &Certificate::new(0, vec![0, 2])).unwrap().members, vec![0, 1]);
    }
}
