use std::sync::Arc;

use super::{WitnessClass, WitnessSequence};
use crate::cover::{Budget, Certificate, FiniteSpace};
use crate::error::{Error, Result};
use crate::game::Strategy;

/// Checks that `product` is `x × y` with cover `i·|ν| + j` and member `a·|v_j| + b`.
pub fn validate_product(x: &FiniteSpace, y: &FiniteSpace, product: &FiniteSpace) -> Result<()> {
    let expected = x.product(y)?;
    let ok = product.n_points() == expected.n_points()
        && product.n_covers() == expected.n_covers()
        && product
            .covers()
            .iter()
            .zip(expected.covers())
            .all(|(p, e)| p.members() == e.members());
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition("space is not the product multicover of the factors".into()))
    }
}

/// `Θ(h) = Θ_X(h_X) × Θ_Y(h_Y)` on the product multicover.
pub struct ProductStrategy {
    x: Arc<dyn Strategy>,
    y: Arc<dyn Strategy>,
    nu: usize,
    y_sizes: Vec<usize>,
}

impl ProductStrategy {
    pub fn new(
        x_space: &FiniteSpace,
        y_space: &FiniteSpace,
        product: &FiniteSpace,
        x: Arc<dyn Strategy>,
        y: Arc<dyn Strategy>,
    ) -> Result<Self> {
        validate_product(x_space, y_space, product)?;
        Ok(ProductStrategy {
            x,
            y,
            nu: y_space.n_covers(),
            y_sizes: y_space.covers().iter().map(|c| c.len()).collect(),
        })
    }
}

impl Strategy for ProductStrategy {
    fn respond(&self, history: &[usize]) -> Result<Certificate> {
        let (hx, hy): (Vec<usize>, Vec<usize>) = history.iter().map(|&h| (h / self.nu, h % self.nu)).unzip();
        let cx = self.x.respond(&hx)?;
        let cy = self.y.respond(&hy)?;
        let last = *history.last().ok_or_else(|| Error::Strategy("empty history".into()))?;
        let vy = self.y_sizes[cy.cover];
        let members = cx
            .members
            .iter()
            .flat_map(|&a| cy.members.iter().map(move |&b| a * vy + b))
            .collect();
        Ok(Certificate::new(last, members))
    }

    fn budget(&self, round: usize) -> Budget {
        self.x.budget(round).times(self.y.budget(round))
    }
}

/// `(B_n × C_n)` from γ-witnesses of both factors: `m` is the larger and the
/// exception counts add. Only the common prefix is kept.
pub fn hurewicz_product_witness<A, B, O: Ord + Clone>(
    a: &WitnessSequence<A>,
    b: &WitnessSequence<B>,
    combine_cover: impl Fn(usize, usize) -> usize,
    combine: impl Fn(usize, &A, usize, &B) -> O,
) -> Result<(WitnessSequence<O>, Vec<String>)>
where
    A: Ord + Clone,
    B: Ord + Clone,
{
    let (WitnessClass::Gamma { m: ma, f: fa }, WitnessClass::Gamma { m: mb, f: fb }) = (a.class, b.class) else {
        return Err(Error::Precondition("both factors need γ-witnesses".into()));
    };
    let mut warnings = Vec::new();
    if a.len() != b.len() {
        warnings.push(format!(
            "witness lengths {} and {} differ; truncated to {}",
            a.len(),
            b.len(),
            a.len().min(b.len())
        ));
    }
    let items = a
        .items
        .iter()
        .zip(&b.items)
        .map(|(ca, cb)| {
            let members = ca
                .members
                .iter()
                .flat_map(|p| cb.members.iter().map(|q| combine(ca.cover, p, cb.cover, q)))
                .collect();
            Certificate::new(combine_cover(ca.cover, cb.cover), members)
        })
        .collect();
    let class = WitnessClass::Gamma {
        m: ma.max(mb),
        f: fa + fb,
    };
    Ok((WitnessSequence::new(items, class), warnings))
}

/// The product witness on a finite product multicover.
pub fn finite_product_witness(
    y_space: &FiniteSpace,
    a: &WitnessSequence,
    b: &WitnessSequence,
) -> Result<(WitnessSequence, Vec<String>)> {
    let nu = y_space.n_covers();
    hurewicz_product_witness(a, b, |i, j| i * nu + j, |_, &p, j, &q| p * y_space.cover(j).len() + q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::FiniteCover;
    use crate::game::{evaluate_strategy, FnStrategy, GameConfig};

    fn two() -> FiniteSpace {
        FiniteSpace::new(
            2,
            vec![
                FiniteCover::from_lists("s", 2, &[vec![0], vec![1]]).unwrap(),
                FiniteCover::whole(2),
            ],
        )
        .unwrap()
    }

    fn all() -> Arc<dyn Strategy> {
        Arc::new(FnStrategy::new(Budget::Finite(2), |h: &[usize]| {
            let c = *h.last().unwrap();
            Ok(Certificate::new(c, if c == 0 { vec![0, 1] } else { vec![0] }))
        }))
    }

    #[test]
    fn product_strategy_covers_the_product() {
        let x = two();
        let p = x.product(&x).unwrap();
        let s = ProductStrategy::new(&x, &x, &p, all(), all()).unwrap();
        let cfg = GameConfig::cover(1, 4);
        assert!(evaluate_strategy(&p, &cfg, &s).unwrap().refutation.is_none());
        assert_eq!(s.budget(0), Budget::Finite(4));
        // Cover 1 of the product is s × whole: members (0,0) and (1,0) are 0 and 1.
        assert_eq!(s.respond(&[1]).unwrap().members, vec![0, 1]);
    }

    #[test]
    fn non_product_is_rejected() {
        let x = two();
        let p = x.product(&x).unwrap();
        assert!(ProductStrategy::new(&x, &x, &x, all(), all()).is_err());
        assert!(validate_product(&x, &x, &p).is_ok());
    }

    #[test]
    fn exception_counts_add() {
        let x = two();
        let w = |f| WitnessSequence::new(vec![Certificate::new(0, vec![0]); 3], WitnessClass::Gamma { m: 1, f });
        let short = WitnessSequence::new(vec![Certificate::new(1, vec![0]); 2], WitnessClass::Gamma { m: 2, f: 0 });
        let (p, warn) = finite_product_witness(&x, &w(1), &short).unwrap();
        assert_eq!(p.class, WitnessClass::Gamma { m: 2, f: 1 });
        assert_eq!(p.len(), 2);
        assert_eq!(warn.len(), 1);
        assert_eq!(p.items[0], Certificate::new(1, vec![0]));
        assert!(finite_product_witness(&x, &w(0), &WitnessSequence::new(vec![], WitnessClass::Cover)).is_err());
    }
}
