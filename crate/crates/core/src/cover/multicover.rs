use std::collections::BTreeMap;

use serde::Serialize;

use super::{Cover, FiniteCover, FiniteSpace};
use crate::bits::PointSet;
use crate::error::{Error, Result};

/// An ordered family of covers. The order is the declared ≺-direction: later
/// covers are at least as fine as earlier ones unless an explicit
/// upper-bound table says otherwise.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Multicover<C> {
    covers: Vec<C>,
    upper_bounds: Option<BTreeMap<(usize, usize), usize>>,
}

impl<C> Multicover<C> {
    pub fn new(covers: Vec<C>) -> Self {
        Multicover {
            covers,
            upper_bounds: None,
        }
    }

    /// Supplies, for each pair of cover indices, the index of a common upper bound.
    pub fn with_upper_bounds(mut self, table: BTreeMap<(usize, usize), usize>) -> Self {
        self.upper_bounds = Some(table);
        self
    }

    pub fn covers(&self) -> &[C] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&C> {
        self.covers.get(i)
    }

    /// Declared upper bound of covers `i` and `j`: the table entry, else the later index.
    pub fn declared_upper_bound(&self, i: usize, j: usize) -> usize {
        let key = (i.min(j), i.max(j));
        self.upper_bounds
            .as_ref()
            .and_then(|t| t.get(&key).copied())
            .unwrap_or(key.1)
    }

    /// Declared upper bound of a nonempty list of covers, folded pairwise.
    pub fn declared_upper_bound_of(&self, idx: &[usize]) -> Option<usize> {
        let (&first, rest) = idx.split_first()?;
        Some(rest.iter().fold(first, |acc, &j| self.declared_upper_bound(acc, j)))
    }
}

/// Restricts any multicover to a finite point set `z`, producing an exact finite
/// space. Members are the distinct nonempty traces `U ∩ Z`; each keeps the
/// smallest source member producing it.
pub fn restrict<C: Cover>(
    mc: &Multicover<C>,
    z: &[C::Point],
) -> Result<(FiniteSpace, Vec<Vec<C::Member>>)> {
    let mut z: Vec<C::Point> = z.to_vec();
    z.sort();
    z.dedup();
    if z.is_empty() {
        return Err(Error::EmptyGroundSet);
    }
    if z.len() > PointSet::CAPACITY {
        return Err(Error::TooManyPoints(z.len(), PointSet::CAPACITY));
    }
    let mut covers = Vec::with_capacity(mc.len());
    let mut sources = Vec::with_capacity(mc.len());
    for c in mc.covers() {
        let mut traces: BTreeMap<PointSet, C::Member> = BTreeMap::new();
        for m in c.members_meeting(&z) {
            let trace: PointSet = (0..z.len()).filter(|&i| c.contains(&m, &z[i])).collect();
            if trace.is_empty() {
                continue;
            }
            traces
                .entry(trace)
                .and_modify(|e| {
                    if m < *e {
                        *e = m.clone();
                    }
                })
                .or_insert(m);
        }
        // Order members by their source member so the restriction is stable.
        let mut pairs: Vec<(C::Member, PointSet)> = traces.into_iter().map(|(t, m)| (m, t)).collect();
        pairs.sort();
        let members = pairs.iter().map(|(_, t)| *t).collect();
        covers.push(FiniteCover::new(format!("{}|Z", c.label()), z.len(), members)?);
        sources.push(pairs.into_iter().map(|(m, _)| m).collect());
    }
    Ok((FiniteSpace::new(z.len(), covers)?, sources))
}
