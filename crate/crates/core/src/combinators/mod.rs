//! Transformations of strategies and witness sequences: unions of pieces,
//! γ-upgrades, products, pullbacks, pushforwards and the power and piece
//! constructions. Each output declares its budget schedule.

mod gamma;
mod maps;
mod product;
mod union;
mod verify;
mod witness;

use serde::{Deserialize, Serialize};

use crate::cover::{
    is_cover, is_gamma_cover, is_omega_cover, is_proper_omega_cover, CertUnion, Certificate, Contains, Cover,
    Multicover,
};
use crate::error::{Error, Result};

pub use gamma::{check_subsequence_containment, GammaUpgrade, MAX_UPGRADE_HORIZON};
pub use maps::{pushforward_with, pushforward_witness, PullbackStrategy, Pushed};
pub use product::{finite_product_witness, hurewicz_product_witness, validate_product, ProductStrategy};
pub use union::{union_witness, UnionStrategy};
pub use verify::{
    verify_gamma_upgrade, verify_product, verify_pullback, verify_union, CombinatorReport, Outcome,
};
pub use witness::{
    menger_power_from_scheepers, proper_omega_from_scheepers, scheepers_from_menger_powers, sigma_bounded_product,
    sigma_bounded_witness, totally_bounded_decomposition, PieceDecomposition, PowerCertificates, PowerWitness,
    SliceStrategy,
};

/// The cover class a witness sequence claims.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessClass {
    Cover,
    Omega { k: usize },
    Gamma { m: usize, f: usize },
    ProperOmega { k: usize, t: usize },
}

impl WitnessClass {
    pub fn holds<P, S: Contains<P>>(&self, family: &[S], probe: &[P]) -> bool {
        match *self {
            WitnessClass::Cover => is_cover(family, probe),
            WitnessClass::Omega { k } => is_omega_cover(family, probe, k),
            WitnessClass::Gamma { m, f } => is_gamma_cover(family, probe, m, f),
            WitnessClass::ProperOmega { k, t } => is_proper_omega_cover(family, probe, k, t),
        }
    }
}

/// A played sequence of II's certificates, detached from a game.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WitnessSequence<M = usize> {
    pub items: Vec<Certificate<M>>,
    pub class: WitnessClass,
}

impl<M: Ord + Clone> WitnessSequence<M> {
    pub fn new(items: Vec<Certificate<M>>, class: WitnessClass) -> Self {
        WitnessSequence { items, class }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The sequence of covers the certificates live in.
    pub fn covers(&self) -> Vec<usize> {
        self.items.iter().map(|c| c.cover).collect()
    }

    /// The bounded sets, one per round.
    pub fn sets<'a, C: Cover<Member = M>>(&'a self, mc: &'a Multicover<C>) -> Result<Vec<CertUnion<'a, C>>> {
        self.items
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let cover = mc
                    .get(c.cover)
                    .ok_or_else(|| Error::Precondition(format!("item {n} names missing cover {}", c.cover)))?;
                Ok(CertUnion::new(cover, &c.members))
            })
            .collect()
    }

    /// Checks the class claim on `probe`.
    pub fn check<C: Cover<Member = M>>(&self, mc: &Multicover<C>, probe: &[C::Point]) -> Result<bool> {
        Ok(self.class.holds(&self.sets(mc)?, probe))
    }
}
