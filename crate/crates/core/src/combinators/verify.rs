//! Precondition check, construction, postcondition check and solver
//! cross-check for the strategy combinators on finite instances.

use std::sync::Arc;

use serde::Serialize;

use super::{check_subsequence_containment, GammaUpgrade, ProductStrategy, PullbackStrategy, UnionStrategy};
use crate::bits::PointSet;
use crate::cover::{Budget, FiniteMap, FiniteSpace, PerfectData};
use crate::error::{Error, Result};
use crate::game::{all_sequences, evaluate_strategy, solve, GameConfig, Player, Strategy, WinKind};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Outcome {
    Verified,
    Refuted,
    Unknown,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CombinatorReport {
    pub combinator: String,
    pub outcome: Outcome,
    /// Why the construction did not run, when it did not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precondition_failure: Option<String>,
    /// Budget schedule the output was checked under.
    pub budgets: Vec<Budget>,
    /// I's sequence beating the output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refutation: Option<Vec<usize>>,
    /// Whether the solver, run on the output's game, agrees II wins.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CombinatorReport {
    fn unmet(combinator: &str, why: String) -> Self {
        CombinatorReport {
            combinator: combinator.into(),
            outcome: Outcome::Unknown,
            precondition_failure: Some(why),
            budgets: Vec::new(),
            refutation: None,
            oracle_agrees: None,
            notes: Vec::new(),
        }
    }
}

fn require_cover(config: &GameConfig) -> Result<()> {
    if config.win != WinKind::Cover {
        return Err(Error::InvalidConfig(format!(
            "combinator checks run cover games, not {}",
            config.win.name()
        )));
    }
    Ok(())
}

/// Evaluates `strategy` on the game with its own budget schedule and, when
/// asked, solves that game too.
fn check_output(
    name: &str,
    space: &FiniteSpace,
    config: &GameConfig,
    strategy: &dyn Strategy,
    oracle: bool,
) -> Result<CombinatorReport> {
    let cfg = config.clone().with_schedule_of(strategy);
    let worst = evaluate_strategy(space, &cfg, strategy)?;
    let oracle_agrees = if oracle {
        Some(solve(space, &cfg)?.winner == Player::II)
    } else {
        None
    };
    let (outcome, refutation) = match worst.refutation {
        None => (Outcome::Verified, None),
        Some(r) => (Outcome::Refuted, Some(r.covers)),
    };
    Ok(CombinatorReport {
        combinator: name.into(),
        outcome,
        precondition_failure: None,
        budgets: cfg.budgets,
        refutation,
        oracle_agrees,
        notes: Vec::new(),
    })
}

/// Piece `k` is solved on its points of the probe over rounds `k..L`; the
/// union of the piece policies is then evaluated on the whole probe.
pub fn verify_union(space: &FiniteSpace, config: &GameConfig, pieces: &[PointSet], oracle: bool) -> Result<CombinatorReport> {
    const NAME: &str = "union";
    require_cover(config)?;
    config.validate(space)?;
    let probe = config.probe_in(space);
    if pieces.is_empty() || pieces.len() > config.horizon {
        return Err(Error::InvalidConfig(format!(
            "{} pieces for horizon {}",
            pieces.len(),
            config.horizon
        )));
    }
    if !probe.is_subset(pieces.iter().fold(PointSet::EMPTY, |a, &p| a.union(p))) {
        return Err(Error::InvalidConfig("pieces do not cover the probe".into()));
    }
    let mut strategies: Vec<Arc<dyn Strategy>> = Vec::with_capacity(pieces.len());
    for (k, piece) in pieces.iter().enumerate() {
        let local = piece.intersection(probe);
        if local.is_empty() {
            return Ok(CombinatorReport::unmet(NAME, format!("piece {k} misses the probe")));
        }
        let cfg = GameConfig {
            horizon: config.horizon - k,
            budgets: config.budgets[k..].to_vec(),
            win: WinKind::Cover,
            probe: Some(local),
        };
        let solved = solve(space, &cfg)?;
        match solved.policy {
            crate::game::Policy::II(table) => strategies.push(Arc::new(table)),
            crate::game::Policy::I(_) => {
                return Ok(CombinatorReport::unmet(NAME, format!("piece {k} game is won by I")))
            }
        }
    }
    let union = UnionStrategy::new(strategies)?;
    check_output(NAME, space, config, &union, oracle)
}

/// Solves the cover game, upgrades II's policy and replays the containment
/// property over every I-sequence before evaluating the upgraded strategy.
pub fn verify_gamma_upgrade(space: &FiniteSpace, config: &GameConfig, oracle: bool) -> Result<CombinatorReport> {
    const NAME: &str = "gamma-upgrade";
    require_cover(config)?;
    let solved = solve(space, config)?;
    let Some(theta) = solved.ii_policy() else {
        return Ok(CombinatorReport::unmet(NAME, "the game is won by I".into()));
    };
    let upgraded = GammaUpgrade::new(Arc::new(theta.clone()) as Arc<dyn Strategy>, config.horizon)?;
    let sequences = all_sequences(space.n_covers(), config.horizon);
    let violation = check_subsequence_containment(theta, &upgraded, config.horizon, &sequences)?;
    let mut report = check_output(NAME, space, config, &upgraded, oracle)?;
    if let Some((seq, idx)) = violation {
        report.outcome = Outcome::Refuted;
        report.notes.push(format!("containment fails on {seq:?} at indices {idx:?}"));
    }
    Ok(report)
}

/// Solves both factor γ-games and evaluates the product strategy on the
/// product γ-game: start round the later of the two, misses added.
pub fn verify_product(
    x: &FiniteSpace,
    y: &FiniteSpace,
    config_x: &GameConfig,
    config_y: &GameConfig,
    oracle: bool,
) -> Result<CombinatorReport> {
    const NAME: &str = "product";
    let (WinKind::Gamma { m: ma, f: fa }, WinKind::Gamma { m: mb, f: fb }) = (config_x.win, config_y.win) else {
        return Err(Error::InvalidConfig("product checks need γ-games on both factors".into()));
    };
    if config_x.horizon != config_y.horizon {
        return Err(Error::InvalidConfig("factor games need the same horizon".into()));
    }
    if config_x.probe.is_some() || config_y.probe.is_some() {
        return Err(Error::InvalidConfig("product checks run on whole factor spaces".into()));
    }
    let sx = solve(x, config_x)?;
    let sy = solve(y, config_y)?;
    let (Some(tx), Some(ty)) = (sx.ii_policy(), sy.ii_policy()) else {
        return Ok(CombinatorReport::unmet(NAME, "a factor game is won by I".into()));
    };
    let product = x.product(y)?;
    let strategy = ProductStrategy::new(x, y, &product, Arc::new(tx.clone()), Arc::new(ty.clone()))?;
    let win = WinKind::Gamma { m: ma.max(mb), f: fa + fb };
    let config = GameConfig::new(config_x.horizon, Budget::Finite(0), win);
    check_output(NAME, &product, &config, &strategy, oracle)
}

/// Solves the target game and evaluates the pulled-back policy on the source.
pub fn verify_pullback(
    f: &FiniteMap,
    x: &FiniteSpace,
    y: &FiniteSpace,
    assign: Vec<usize>,
    config_y: &GameConfig,
    oracle: bool,
) -> Result<CombinatorReport> {
    const NAME: &str = "pullback";
    require_cover(config_y)?;
    let data = PerfectData::compute(f, x, y, assign)?;
    let sy = solve(y, config_y)?;
    let Some(ty) = sy.ii_policy() else {
        return Ok(CombinatorReport::unmet(NAME, "the target game is won by I".into()));
    };
    let strategy = PullbackStrategy::new(f, x, y, data, Arc::new(ty.clone()))?;
    let config = GameConfig::new(config_y.horizon, Budget::Finite(0), WinKind::Cover);
    check_output(NAME, x, &config, &strategy, oracle)
}
