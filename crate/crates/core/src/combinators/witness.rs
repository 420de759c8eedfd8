use std::sync::Arc;

use super::{UnionStrategy, WitnessClass, WitnessSequence};
use crate::bits::PointSet;
use crate::cover::{
    coarser_than, is_omega_cover, omega_multiplicity, Budget, CertUnion, Certificate, Contains, Cover, FiniteSpace,
    Multicover, Verdict,
};
use crate::error::{Error, Result};
use crate::game::Strategy;

/// Largest number of probe tuples a power check enumerates.
const TUPLE_LIMIT: usize = 1 << 20;

/// A cover witness of the `n`-th power: `items[i]` answers round `n - 1 + i`
/// and `{B^n}` is meant to cover `Xⁿ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerWitness<M = usize> {
    pub power: usize,
    pub items: Vec<Certificate<M>>,
}

/// `B_k = ⋃_{n ≤ k} B_{n,k}` from cover witnesses of the powers. Round `k`
/// is played in `covers[k]`. A family whose `n`-th powers cover `probeⁿ` is
/// exactly one engulfing every `n`-subset of the probe, so each input is
/// checked as an ω-cover of order `n`.
pub fn scheepers_from_menger_powers<C: Cover>(
    mc: &Multicover<C>,
    covers: &[usize],
    powers: &[PowerWitness<C::Member>],
    probe: &[C::Point],
) -> Result<WitnessSequence<C::Member>> {
    if powers.is_empty() {
        return Err(Error::Precondition("no power witnesses".into()));
    }
    for pw in powers {
        let n = pw.power;
        if n == 0 || n - 1 + pw.items.len() > covers.len() {
            return Err(Error::Precondition(format!(
                "power witness {n} with {} rounds does not fit {} rounds",
                pw.items.len(),
                covers.len()
            )));
        }
        for (i, c) in pw.items.iter().enumerate() {
            if c.cover != covers[n - 1 + i] {
                return Err(Error::Precondition(format!(
                    "power witness {n} answers cover {} in round {}, expected {}",
                    c.cover,
                    n - 1 + i,
                    covers[n - 1 + i]
                )));
            }
        }
        let w = WitnessSequence::new(pw.items.clone(), WitnessClass::Omega { k: n });
        if !is_omega_cover(&w.sets(mc)?, probe, n) {
            return Err(Error::Precondition(format!("power witness {n} does not cover the probe power")));
        }
    }
    let items = covers
        .iter()
        .enumerate()
        .map(|(k, &u)| {
            powers
                .iter()
                .filter_map(|pw| pw.items.get((k + 1).checked_sub(pw.power)?))
                .fold(Certificate::empty(u), |acc, c| acc.merge(c))
        })
        .collect();
    let k = powers.iter().map(|p| p.power).max().unwrap_or(1);
    Ok(WitnessSequence::new(items, WitnessClass::Omega { k }))
}

/// Per round `k`, one certificate per coordinate: `rounds[k][i]` lives in `u_{k,i}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerCertificates<M = usize> {
    pub power: usize,
    pub rounds: Vec<Vec<Certificate<M>>>,
}

impl<M: Ord + Clone> PowerCertificates<M> {
    /// Every `n`-tuple of probe points lies in some `∪rounds[k][0] × ⋯ × ∪rounds[k][n-1]`.
    pub fn covers_power<C: Cover<Member = M>>(&self, mc: &Multicover<C>, probe: &[C::Point]) -> Result<bool> {
        let n = self.power;
        let total = probe.len().checked_pow(n as u32).filter(|&t| t <= TUPLE_LIMIT);
        if total.is_none() {
            return Err(Error::Range(format!("{}^{n} probe tuples exceed {TUPLE_LIMIT}", probe.len())));
        }
        // Per round and coordinate, which probe points are inside.
        let inside: Vec<Vec<Vec<bool>>> = self
            .rounds
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        let cover = mc
                            .get(c.cover)
                            .ok_or_else(|| Error::Precondition(format!("missing cover {}", c.cover)))?;
                        let u = CertUnion::new(cover, &c.members);
                        Ok(probe.iter().map(|p| u.contains_point(p)).collect())
                    })
                    .collect::<Result<Vec<Vec<bool>>>>()
            })
            .collect::<Result<_>>()?;
        let mut tuple = vec![0usize; n];
        loop {
            if !inside.iter().any(|row| tuple.iter().enumerate().all(|(i, &p)| row[i][p])) {
                return Ok(false);
            }
            let mut i = 0;
            while i < n {
                tuple[i] += 1;
                if tuple[i] < probe.len() {
                    break;
                }
                tuple[i] = 0;
                i += 1;
            }
            if i == n {
                return Ok(true);
            }
        }
    }
}

/// I plays `(u_{k,1}, …, u_{k,n})` on `Xⁿ`; `w` answered the upper bounds
/// `u_k ≻ u_{k,i}`. Each `B_k` is re-expressed in every `u_{k,i}` through
/// per-member coarseness certificates. Members of `B_k` missing the probe are dropped.
pub fn menger_power_from_scheepers<C: Cover>(
    mc: &Multicover<C>,
    w: &WitnessSequence<C::Member>,
    power_covers: &[Vec<usize>],
    probe: &[C::Point],
    search_bound: usize,
) -> Result<PowerCertificates<C::Member>> {
    let n = power_covers.first().map_or(0, Vec::len);
    if n == 0 || power_covers.iter().any(|r| r.len() != n) {
        return Err(Error::Precondition("power covers need one nonempty tuple of equal length per round".into()));
    }
    match w.class {
        WitnessClass::Omega { k } | WitnessClass::ProperOmega { k, .. } if k >= n => {}
        c => return Err(Error::Precondition(format!("{c:?} does not engulf {n}-sets"))),
    }
    if power_covers.len() != w.len() {
        return Err(Error::Precondition(format!(
            "{} power rounds for a witness of length {}",
            power_covers.len(),
            w.len()
        )));
    }
    let mut rounds = Vec::with_capacity(w.len());
    for (k, (cert, tuple)) in w.items.iter().zip(power_covers).enumerate() {
        let upper = mc
            .get(cert.cover)
            .ok_or_else(|| Error::Precondition(format!("missing cover {}", cert.cover)))?;
        let mut row = Vec::with_capacity(n);
        for &ui in tuple {
            let lower = mc
                .get(ui)
                .ok_or_else(|| Error::Precondition(format!("missing cover {ui}")))?;
            let Verdict::Yes(ev) = coarser_than(lower, upper, probe, search_bound) else {
                return Err(Error::Precondition(format!(
                    "round {k}: no centered witness, cover {} is not shown coarser than cover {ui}",
                    cert.cover
                )));
            };
            let members = cert
                .members
                .iter()
                .filter_map(|m| ev.per_member.iter().find(|(vm, _)| vm == m))
                .flat_map(|(_, c)| c.iter().cloned())
                .collect();
            row.push(Certificate::new(ui, members));
        }
        rounds.push(row);
    }
    Ok(PowerCertificates { power: n, rounds })
}

/// `B_n = ⋃_{k ≤ n} A_{k,n}`, where `stacks[k].items[i]` is `A_{k,k+i}`.
/// The occurrence count `t` is reduced, with a warning, to the number of
/// stacks and to the multiplicity actually reached on the probe.
pub fn proper_omega_from_scheepers<C: Cover>(
    mc: &Multicover<C>,
    stacks: &[WitnessSequence<C::Member>],
    t: usize,
    probe: &[C::Point],
) -> Result<(WitnessSequence<C::Member>, Vec<String>)> {
    let mut k = usize::MAX;
    for (j, s) in stacks.iter().enumerate() {
        let WitnessClass::Omega { k: kj } = s.class else {
            return Err(Error::Precondition(format!("stack {j} is not an ω-cover witness")));
        };
        if !s.check(mc, probe)? {
            return Err(Error::Precondition(format!("stack {j} fails its ω-cover check")));
        }
        k = k.min(kj);
    }
    let len = stacks
        .iter()
        .enumerate()
        .map(|(j, s)| j + s.len())
        .max()
        .ok_or_else(|| Error::Precondition("no stacks".into()))?;
    let mut items = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc: Option<Certificate<C::Member>> = None;
        for (j, s) in stacks.iter().enumerate().take(n + 1) {
            let Some(c) = s.items.get(n - j) else { continue };
            acc = Some(match acc {
                None => c.clone(),
                Some(a) if a.cover == c.cover => a.merge(c),
                Some(a) => {
                    return Err(Error::Precondition(format!(
                        "round {n}: stack {j} uses cover {}, an earlier stack cover {}",
                        c.cover, a.cover
                    )))
                }
            });
        }
        items.push(acc.ok_or_else(|| Error::Precondition(format!("round {n} has no stacked certificate")))?);
    }
    let mut warnings = Vec::new();
    let mut t_eff = t;
    if stacks.len() < t_eff {
        warnings.push(format!("only {} stacks; t reduced from {t_eff}", stacks.len()));
        t_eff = stacks.len();
    }
    let mut out = WitnessSequence::new(items, WitnessClass::ProperOmega { k, t: t_eff });
    let reached = omega_multiplicity(&out.sets(mc)?, probe, k);
    if reached < t_eff {
        warnings.push(format!("k-sets are engulfed {reached} times on the probe; t reduced from {t_eff}"));
        t_eff = reached;
    }
    out.class = WitnessClass::ProperOmega { k, t: t_eff };
    Ok((out, warnings))
}

/// A piece strategy on `X × K`: `Θ_X` on the first coordinate times a fixed
/// certificate of `K` in each cover of `Y`.
pub struct SliceStrategy {
    theta_x: Arc<dyn Strategy>,
    nu: usize,
    y_sizes: Vec<usize>,
    certs: Vec<Certificate>,
}

impl Strategy for SliceStrategy {
    fn respond(&self, history: &[usize]) -> Result<Certificate> {
        let last = *history.last().ok_or_else(|| Error::Strategy("empty history".into()))?;
        let hx: Vec<usize> = history.iter().map(|&h| h / self.nu).collect();
        let cx = self.theta_x.respond(&hx)?;
        let j = last % self.nu;
        let vy = self.y_sizes[j];
        let members = cx
            .members
            .iter()
            .flat_map(|&a| self.certs[j].members.iter().map(move |&b| a * vy + b))
            .collect();
        Ok(Certificate::new(last, members))
    }

    fn budget(&self, round: usize) -> Budget {
        let k = self.certs.iter().map(Certificate::size).max().unwrap_or(0);
        self.theta_x.budget(round).scale(k)
    }
}

/// Strategy on `X × Y` for `Y = ⋃K_n`: piece `n` plays `Θ_X` times the
/// supplied certificates of `K_n`, and the pieces are joined by [`UnionStrategy`].
/// `certs[n][j]` is a certificate of `K_n` in cover `j` of `Y`.
pub fn sigma_bounded_product(
    x: &FiniteSpace,
    y: &FiniteSpace,
    product: &FiniteSpace,
    theta_x: Arc<dyn Strategy>,
    pieces: &[PointSet],
    certs: Vec<Vec<Certificate>>,
) -> Result<UnionStrategy> {
    super::validate_product(x, y, product)?;
    check_pieces(y, pieces, &certs)?;
    let nu = y.n_covers();
    let y_sizes: Vec<usize> = y.covers().iter().map(|c| c.len()).collect();
    let slices = certs
        .into_iter()
        .map(|c| {
            Arc::new(SliceStrategy {
                theta_x: theta_x.clone(),
                nu,
                y_sizes: y_sizes.clone(),
                certs: c,
            }) as Arc<dyn Strategy>
        })
        .collect();
    UnionStrategy::new(slices)
}

fn check_pieces(y: &FiniteSpace, pieces: &[PointSet], certs: &[Vec<Certificate>]) -> Result<()> {
    if pieces.is_empty() || certs.len() != pieces.len() {
        return Err(Error::Precondition(format!(
            "{} pieces with {} certificate rows",
            pieces.len(),
            certs.len()
        )));
    }
    if pieces.windows(2).any(|w| !w[0].is_subset(w[1])) {
        return Err(Error::Precondition("pieces are not increasing".into()));
    }
    let all = pieces.iter().fold(PointSet::EMPTY, |a, &p| a.union(p));
    if all != y.ground() {
        return Err(Error::Precondition("pieces do not exhaust the space".into()));
    }
    for (n, (piece, row)) in pieces.iter().zip(certs).enumerate() {
        if row.len() != y.n_covers() {
            return Err(Error::Precondition(format!("piece {n}: missing boundedness data")));
        }
        for (j, c) in row.iter().enumerate() {
            if c.cover != j || !piece.is_subset(c.union_in(y.cover(j))) {
                return Err(Error::Precondition(format!("piece {n}: certificate for cover {j} does not cover it")));
            }
        }
    }
    Ok(())
}

/// `C_n = ⋃_{k ≤ n} B_n × K_k`, the `K_k` given by certificates in the
/// cover `y_covers[n]`: `certs[k]` maps a cover of `Y` to a certificate of `K_k`.
/// A proper ω-witness on `X` yields an ω-witness on the product.
pub fn sigma_bounded_witness<A, B, O>(
    w: &WitnessSequence<A>,
    y_covers: &[usize],
    certs: &[impl Fn(usize) -> Option<Certificate<B>>],
    combine_cover: impl Fn(usize, usize) -> usize,
    combine: impl Fn(&A, &B) -> O,
) -> Result<WitnessSequence<O>>
where
    A: Ord + Clone,
    B: Ord + Clone,
    O: Ord + Clone,
{
    if y_covers.len() != w.len() {
        return Err(Error::Precondition(format!(
            "{} covers of the second factor for a witness of length {}",
            y_covers.len(),
            w.len()
        )));
    }
    if certs.is_empty() {
        return Err(Error::Precondition("no pieces".into()));
    }
    let mut items = Vec::with_capacity(w.len());
    for (n, (b, &v)) in w.items.iter().zip(y_covers).enumerate() {
        let mut members = Vec::new();
        for (k, piece) in certs.iter().enumerate().take(n + 1) {
            let c = piece(v).ok_or_else(|| Error::Precondition(format!("piece {k}: missing data for cover {v}")))?;
            for p in &b.members {
                members.extend(c.members.iter().map(|q| combine(p, q)));
            }
        }
        items.push(Certificate::new(combine_cover(b.cover, v), members));
    }
    let class = match w.class {
        WitnessClass::ProperOmega { k, .. } => WitnessClass::Omega { k },
        c => c,
    };
    Ok(WitnessSequence::new(items, class))
}

/// Nested pieces `T_n = ⋂_{k ∈ [n, L)} ∪B_k`, restricted to the probe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PieceDecomposition<P> {
    pub pieces: Vec<Vec<P>>,
}

impl<P: PartialEq + Clone> PieceDecomposition<P> {
    pub fn covers(&self, probe: &[P]) -> bool {
        probe.iter().all(|p| self.pieces.iter().any(|t| t.contains(p)))
    }

    /// Each `T_n` lies in every certificate union from round `n` on.
    pub fn inside_tails<C: Cover<Point = P>>(&self, mc: &Multicover<C>, w: &WitnessSequence<C::Member>) -> Result<bool> {
        let sets = w.sets(mc)?;
        Ok(self
            .pieces
            .iter()
            .enumerate()
            .all(|(n, t)| sets[n..].iter().all(|s| t.iter().all(|p| s.contains_point(p)))))
    }
}

/// Splits the probe by the tails of a γ-witness with no exceptions.
pub fn totally_bounded_decomposition<C: Cover>(
    mc: &Multicover<C>,
    w: &WitnessSequence<C::Member>,
    probe: &[C::Point],
) -> Result<PieceDecomposition<C::Point>> {
    match w.class {
        WitnessClass::Gamma { f: 0, .. } => {}
        WitnessClass::Gamma { f, .. } => {
            return Err(Error::Precondition(format!("γ-witness allows {f} misses; need none")))
        }
        c => return Err(Error::Precondition(format!("{c:?} is not a γ-witness"))),
    }
    let sets = w.sets(mc)?;
    if !w.class.holds(&sets, probe) {
        return Err(Error::Precondition("witness fails its γ-cover check".into()));
    }
    let pieces = (0..sets.len())
        .map(|n| {
            probe
                .iter()
                .filter(|p| sets[n..].iter().all(|s| s.contains_point(p)))
                .cloned()
                .collect()
        })
        .collect();
    Ok(PieceDecomposition { pieces })
}
