use num_rational::Rational64;
use serde::Serialize;

use crate::bits::PointSet;
use crate::cover::{FiniteCover, FiniteSpace};
use crate::error::{Error, Result};

/// A finite (pseudo)metric space with rational distances.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FiniteMetricSpace {
    #[serde(serialize_with = "ser_matrix")]
    dist: Vec<Vec<Rational64>>,
}

fn ser_matrix<S: serde::Serializer>(m: &[Vec<Rational64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(|d| d.to_string()).collect()).collect();
    rows.serialize(s)
}

impl FiniteMetricSpace {
    /// Checks symmetry, nonnegativity, zero diagonal and the triangle inequality.
    pub fn new(dist: Vec<Vec<Rational64>>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if n > PointSet::CAPACITY {
            return Err(Error::TooManyPoints(n, PointSet::CAPACITY));
        }
        let zero = Rational64::from_integer(0);
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMulticover(format!("distance row {i} has {} entries", row.len())));
            }
            if row[i] != zero {
                return Err(Error::InvalidMulticover(format!("d({i},{i}) is not zero")));
            }
            for j in 0..n {
                if row[j] < zero {
                    return Err(Error::InvalidMulticover(format!("d({i},{j}) is negative")));
                }
                if row[j] != dist[j][i] {
                    return Err(Error::InvalidMulticover(format!("d({i},{j}) ≠ d({j},{i})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] {
                        return Err(Error::InvalidMulticover(format!(
                            "triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { dist })
    }

    pub fn from_integers(dist: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            dist.iter()
                .map(|r| r.iter().map(|&d| Rational64::from_integer(d)).collect())
                .collect(),
        )
    }

    /// Points `0..n` on a line, `d(i, j) = |i - j|`.
    pub fn path(n: usize) -> Self {
        let d: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (i as i64 - j as i64).abs()).collect())
            .collect();
        Self::from_integers(&d).expect("path metric")
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> Rational64 {
        self.dist[i][j]
    }

    /// Open ball `{y : d(x, y) < ε}`.
    pub fn ball(&self, x: usize, eps: Rational64) -> PointSet {
        (0..self.len()).filter(|&y| self.dist[x][y] < eps).collect()
    }

    /// Max metric on the product; point `(x, y)` is `x * |Y| + y`.
    pub fn product_max(&self, other: &FiniteMetricSpace) -> Result<FiniteMetricSpace> {
        let (n, m) = (self.len(), other.len());
        if n * m > PointSet::CAPACITY {
            return Err(Error::TooManyPoints(n * m, PointSet::CAPACITY));
        }
        let mut dist = vec![vec![Rational64::from_integer(0); n * m]; n * m];
        for a in 0..n * m {
            for b in 0..n * m {
                dist[a][b] = self.dist[a / m][b / m].max(other.dist[a % m][b % m]);
            }
        }
        Ok(FiniteMetricSpace { dist })
    }
}

/// One cover of open `ε`-balls per radius, member `x` being the ball around `x`.
/// Radii must be positive and nonincreasing, so later covers are finer.
pub fn metric_multicover(space: &FiniteMetricSpace, radii: &[Rational64]) -> Result<FiniteSpace> {
    if radii.is_empty() {
        return Err(Error::InvalidMulticover("no radii".into()));
    }
    if radii.iter().any(|&r| r <= Rational64::from_integer(0)) {
        return Err(Error::InvalidMulticover("radii must be positive".into()));
    }
    if radii.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidMulticover("radii must be nonincreasing".into()));
    }
    let covers = radii
        .iter()
        .map(|&eps| {
            let members = (0..space.len()).map(|x| space.ball(x, eps)).collect();
            FiniteCover::new(format!("B({eps})"), space.len(), members)
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteSpace::new(space.len(), covers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{equivalent_multicovers, is_centered, DEFAULT_SEARCH_BOUND};

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn triangle_inequality_is_enforced() {
        assert!(FiniteMetricSpace::from_integers(&[vec![0, 1, 5], vec![1, 0, 1], vec![5, 1, 0]]).is_err());
        assert!(FiniteMetricSpace::from_integers(&[vec![0, 1], vec![2, 0]]).is_err());
        // Pseudometrics are allowed.
        assert!(FiniteMetricSpace::from_integers(&[vec![0, 0], vec![0, 0]]).is_ok());
    }

    #[test]
    fn one_point_space_has_whole_covers() {
        let s = metric_multicover(&FiniteMetricSpace::path(1), &[r(3), r(1)]).unwrap();
        assert!(s.covers().iter().all(|c| c.members() == [PointSet::full(1)]));
    }

    #[test]
    fn path_balls() {
        let s = metric_multicover(&FiniteMetricSpace::path(4), &[r(2), r(1)]).unwrap();
        let set = |v: &[usize]| v.iter().collect::<PointSet>();
        assert_eq!(
            s.cover(0).members(),
            &[set(&[0, 1]), set(&[0, 1, 2]), set(&[1, 2, 3]), set(&[2, 3])]
        );
        assert_eq!(s.cover(1).members(), &[set(&[0]), set(&[1]), set(&[2]), set(&[3])]);
        assert!(is_centered(s.multicover(), &[], DEFAULT_SEARCH_BOUND).is_yes());
    }

    #[test]
    fn max_product_matches_product_multicover() {
        let a = FiniteMetricSpace::path(2);
        let b = FiniteMetricSpace::from_integers(&[vec![0, 2], vec![2, 0]]).unwrap();
        let radii = [r(3), r(1)];
        let prod_metric = metric_multicover(&a.product_max(&b).unwrap(), &radii).unwrap();
        let prod = metric_multicover(&a, &radii)
            .unwrap()
            .product(&metric_multicover(&b, &radii).unwrap())
            .unwrap();
        assert!(equivalent_multicovers(prod_metric.multicover(), prod.multicover(), &[], 1).is_yes());
    }
}
