use std::sync::Arc;

use super::WitnessSequence;
use crate::bits::PointSet;
use crate::cover::{Budget, Certificate, FiniteMap, FiniteSpace, PerfectData, UniformData};
use crate::error::{Error, Result};
use crate::game::Strategy;

/// Pulls a strategy on the target back along a perfect map: I's cover `u` is
/// played as `assign[u]` on the target and the answer is pulled back.
pub struct PullbackStrategy {
    theta_y: Arc<dyn Strategy>,
    data: PerfectData,
}

impl PullbackStrategy {
    pub fn new(f: &FiniteMap, x: &FiniteSpace, y: &FiniteSpace, data: PerfectData, theta_y: Arc<dyn Strategy>) -> Result<Self> {
        data.verify(f, x, y)?;
        Ok(PullbackStrategy { theta_y, data })
    }

    pub fn data(&self) -> &PerfectData {
        &self.data
    }
}

impl Strategy for PullbackStrategy {
    fn respond(&self, history: &[usize]) -> Result<Certificate> {
        let u = *history.last().ok_or_else(|| Error::Strategy("empty history".into()))?;
        let mapped = history
            .iter()
            .map(|&u| {
                self.data
                    .assign
                    .get(u)
                    .copied()
                    .ok_or_else(|| Error::Strategy(format!("no target cover paired with cover {u}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let target = self.theta_y.respond(&mapped)?;
        self.data.pull(u, &target)
    }

    fn budget(&self, round: usize) -> Budget {
        self.theta_y.budget(round).scale(self.data.multiplier())
    }
}

/// A pushed witness together with the target probe its class is claimed on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pushed<M = usize> {
    pub witness: WitnessSequence<M>,
    pub probe: PointSet,
    pub warnings: Vec<String>,
}

/// Pushes a source witness forward along a uniformly bounded map. Round `n`
/// uses target cover `targets[n]`, whose paired source cover must be the one
/// the source witness answered. When `f(x_probe)` misses part of `y_probe`
/// the class is only claimed on the image.
pub fn pushforward_witness(
    f: &FiniteMap,
    x: &FiniteSpace,
    y: &FiniteSpace,
    data: &UniformData,
    witness: &WitnessSequence,
    targets: &[usize],
    x_probe: PointSet,
    y_probe: PointSet,
) -> Result<Pushed> {
    data.verify(f, x, y)?;
    let pushed = pushforward_with(witness, targets, |c, v| data.push(v, c))?;
    let image = f.image_of(x_probe);
    let mut warnings = Vec::new();
    let probe = if y_probe.is_subset(image) {
        y_probe
    } else {
        warnings.push(format!(
            "map is not onto the probe: {:?} has no preimage in the source probe; class claimed on the image only",
            y_probe.difference(image).to_vec()
        ));
        y_probe.intersection(image)
    };
    Ok(Pushed {
        witness: pushed,
        probe,
        warnings,
    })
}

/// Pushes each certificate with `push(certificate, target cover)`. The class is kept.
pub fn pushforward_with<M: Ord + Clone, N: Ord + Clone>(
    witness: &WitnessSequence<M>,
    targets: &[usize],
    push: impl Fn(&Certificate<M>, usize) -> Result<Certificate<N>>,
) -> Result<WitnessSequence<N>> {
    if targets.len() != witness.len() {
        return Err(Error::Precondition(format!(
            "{} target covers for a witness of length {}",
            targets.len(),
            witness.len()
        )));
    }
    let items = witness
        .items
        .iter()
        .zip(targets)
        .enumerate()
        .map(|(n, (c, &v))| push(c, v).map_err(|e| Error::Precondition(format!("round {n}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(WitnessSequence::new(items, witness.class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::WitnessClass;
    use crate::cover::FiniteCover;
    use crate::game::{evaluate_strategy, FnStrategy, GameConfig};

    fn collapse() -> (FiniteMap, FiniteSpace, FiniteSpace) {
        let f = FiniteMap::new(vec![0, 0, 1, 1], 2).unwrap();
        let x = FiniteSpace::new(4, vec![FiniteCover::from_lists("u", 4, &[vec![0], vec![1], vec![2, 3]]).unwrap()]).unwrap();
        let y = FiniteSpace::new(2, vec![FiniteCover::singletons(2)]).unwrap();
        (f, x, y)
    }

    #[test]
    fn pullback_scales_the_budget() {
        let (f, x, y) = collapse();
        let data = PerfectData::compute(&f, &x, &y, vec![0]).unwrap();
        let theta: Arc<dyn Strategy> = Arc::new(FnStrategy::new(Budget::Finite(2), |h: &[usize]| {
            Ok(Certificate::new(*h.last().unwrap(), vec![0, 1]))
        }));
        let s = PullbackStrategy::new(&f, &x, &y, data, theta).unwrap();
        assert_eq!(s.budget(0), Budget::Finite(4));
        assert_eq!(s.respond(&[0]).unwrap().members, vec![0, 1, 2]);
        let cfg = GameConfig::cover(1, 4);
        assert!(evaluate_strategy(&x, &cfg, &s).unwrap().refutation.is_none());
    }

    #[test]
    fn pushforward_downgrades_off_the_image() {
        let (_, x, _) = collapse();
        // x ↦ x / 2 into three points; point 2 is never hit.
        let f = FiniteMap::new(vec![0, 0, 1, 1], 3).unwrap();
        let y = FiniteSpace::new(3, vec![FiniteCover::singletons(3)]).unwrap();
        let data = UniformData::compute(&f, &x, &y, vec![0]).unwrap();
        let w = WitnessSequence::new(vec![Certificate::new(0, vec![0, 1, 2])], WitnessClass::Cover);
        let p = pushforward_witness(&f, &x, &y, &data, &w, &[0], PointSet::full(4), PointSet::full(3)).unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.probe, PointSet::full(2));
        assert!(p.witness.check(y.multicover(), &p.probe.to_vec()).unwrap());
        assert!(!p.witness.check(y.multicover(), &[0, 1, 2]).unwrap());
    }
}
