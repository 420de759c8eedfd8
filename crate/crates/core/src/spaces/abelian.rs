//! Liftings of selection witnesses from a generating set to the lattice `Zᵈ`,
//! with `K_n` and `O_n` taken as max-norm boxes around the origin.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::lattice::Norm;
use crate::cover::{Contains, Verdict};
use crate::error::{Error, Result};

/// Longest chain accepted; radii are kept as `u128`.
pub const MAX_CHAIN: usize = 120;

/// `K_n = [-k_n, k_n]ᵈ`. Boxes are symmetric and hold 0, so only the
/// sum law `K_n + K_n ⊆ K_{n+1}`, i.e. `2k_n ≤ k_{n+1}`, needs checking.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GeneratorChain {
    pub radii: Vec<u128>,
}

impl GeneratorChain {
    /// `k_n = 2ⁿ`.
    pub fn doubling(len: usize) -> Result<Self> {
        if len > MAX_CHAIN {
            return Err(Error::Range(format!("{len} terms exceed the supported {MAX_CHAIN}")));
        }
        Ok(GeneratorChain {
            radii: (0..len).map(|n| 1u128 << n).collect(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.len() > MAX_CHAIN {
            return Err(Error::Range(format!("{} terms exceed the supported {MAX_CHAIN}", self.radii.len())));
        }
        for (n, w) in self.radii.windows(2).enumerate() {
            if w[0].checked_mul(2).is_none_or(|d| d > w[1]) {
                return Err(Error::Schedule {
                    condition: "K_n + K_n ⊆ K_{n+1}".into(),
                    detail: format!("2·{} > {} at n = {n}", w[0], w[1]),
                });
            }
        }
        Ok(())
    }
}

/// Radii of the identity neighborhoods `O_n` (max-norm balls).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NeighborhoodSchedule {
    pub radii: Vec<u128>,
}

impl NeighborhoodSchedule {
    /// `o_n = 2^{len-1-n}`.
    pub fn halving(len: usize) -> Result<Self> {
        if len == 0 || len > MAX_CHAIN {
            return Err(Error::Range(format!("schedule length {len} outside 1..={MAX_CHAIN}")));
        }
        Ok(NeighborhoodSchedule {
            radii: (0..len).map(|n| 1u128 << (len - 1 - n)).collect(),
        })
    }

    /// Strictly decreasing positive radii with `O_{n+1} + O_{n+1} ⊆ O_n`.
    pub fn validate_halving(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(Error::Schedule {
                condition: "nonempty".into(),
                detail: "no radii".into(),
            });
        }
        if let Some(n) = self.radii.iter().position(|&r| r == 0) {
            return Err(Error::Schedule {
                condition: "positive radii".into(),
                detail: format!("r_{n} = 0"),
            });
        }
        for (n, w) in self.radii.windows(2).enumerate() {
            if w[1].saturating_mul(2) > w[0] {
                return Err(Error::Schedule {
                    condition: "O_{n+1} + O_{n+1} ⊆ O_n".into(),
                    detail: format!("2·{} > {} at n = {n}", w[1], w[0]),
                });
            }
        }
        Ok(())
    }
}

/// The generating set the witness lives on.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Generators {
    /// `X = G`: the set `S` is the probe set itself with 0 added, and `m = 1`.
    Whole,
    /// A finite generating set; `S = X ∪ {0}` and `m` is the word length over `S - S`.
    Explicit(Vec<Vec<i64>>),
}

/// A box `[-r, r]ᵈ`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CenteredBox {
    pub radius: u128,
}

impl Contains<Vec<i64>> for CenteredBox {
    fn contains_point(&self, p: &Vec<i64>) -> bool {
        Norm::Max.of(p) as u128 <= self.radius
    }
}

/// One run of the index arithmetic. `l` is the least admissible index of
/// `I_S` (at least `3m`), `n = l - m`, and `steps[j-1]` bounds `j(S - S)`,
/// checked against `K_{l+j} + O_{l-j}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LiftTrace {
    /// A probe point realizing this run (the largest one sharing it).
    pub witness: Vec<i64>,
    pub m: usize,
    pub l: usize,
    pub n: usize,
    pub steps: Vec<u128>,
}

/// The lifted family `{K_{2n} + O_n : 2n < N}` and the runs justifying it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AbelianLift {
    pub family: Vec<CenteredBox>,
    pub traces: Vec<LiftTrace>,
    /// For the γ lifting, the index from which every probe point is in every member.
    pub tail: Option<usize>,
}

struct Ctx<'a> {
    k: &'a [u128],
    o: &'a [u128],
    len: usize,
}

impl Ctx<'_> {
    fn new<'a>(chain: &'a GeneratorChain, schedule: &'a NeighborhoodSchedule) -> Result<Ctx<'a>> {
        chain.validate()?;
        schedule.validate_halving()?;
        let len = chain.radii.len().min(schedule.radii.len());
        Ok(Ctx {
            k: &chain.radii,
            o: &schedule.radii,
            len,
        })
    }

    fn sum(&self, j: usize, n: usize) -> u128 {
        self.k[j].saturating_add(self.o[n])
    }

    /// `z(x)_n`: the least `j` with `x ∈ K_j + O_n`.
    fn z(&self, x: u128, n: usize) -> Option<usize> {
        (0..self.len).find(|&j| x <= self.sum(j, n))
    }

    /// `n ∈ I_S` iff `z(x)_n ≤ n` for every `x ∈ S`; `s` is `max |x|` over `S`.
    fn in_i(&self, s: u128, n: usize) -> bool {
        self.z(s, n).is_some_and(|j| j <= n)
    }

    /// Re-executes `j(S - S) ⊆ K_{l+j} + O_{l-j}` for `j = 1..=m`.
    fn steps(&self, s: u128, l: usize, m: usize) -> Result<Vec<u128>> {
        let diam = s.saturating_mul(2);
        (1..=m)
            .map(|j| {
                if l + j >= self.len {
                    return Err(Error::Range(format!("K_{} is past the end of the chain", l + j)));
                }
                let bound = diam.saturating_mul(j as u128);
                let target = self.sum(l + j, l - j);
                if bound > target {
                    return Err(Error::Precondition(format!(
                        "{j}(S - S) reaches {bound}, outside K_{} + O_{} of radius {target}",
                        l + j,
                        l - j
                    )));
                }
                Ok(bound)
            })
            .collect()
    }

    fn family(&self) -> Vec<CenteredBox> {
        (0..self.len.div_ceil(2))
            .map(|n| CenteredBox {
                radius: self.sum(2 * n, n),
            })
            .collect()
    }
}

/// Word length of each probe point over `D = S - S`, `S = X ∪ {0}`.
fn d_lengths(gens: &[Vec<i64>], probe: &[Vec<i64>]) -> Result<Vec<usize>> {
    let dim = probe.first().map_or(0, |p| p.len());
    if gens.iter().chain(probe).any(|p| p.len() != dim) {
        return Err(Error::Precondition("points of mixed dimension".into()));
    }
    let mut s: Vec<Vec<i64>> = gens.to_vec();
    s.push(vec![0; dim]);
    let d: Vec<Vec<i64>> = s
        .iter()
        .flat_map(|a| s.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x - y).collect()))
        .collect();
    let step = d.iter().map(|v| Norm::Max.of(v)).max().unwrap_or(0) as i64;
    let reach = probe.iter().map(|p| Norm::Max.of(p)).max().unwrap_or(0) as i64 + step;
    let mut dist: HashMap<Vec<i64>, usize> = HashMap::from([(vec![0; dim], 0)]);
    let mut queue = VecDeque::from([vec![0; dim]]);
    let wanted: HashSet<&Vec<i64>> = probe.iter().collect();
    let mut missing = wanted.iter().filter(|p| !dist.contains_key(**p)).count();
    while let Some(x) = queue.pop_front() {
        if missing == 0 {
            break;
        }
        let dx = dist[&x];
        for v in &d {
            let y: Vec<i64> = x.iter().zip(v).map(|(a, b)| a + b).collect();
            if Norm::Max.of(&y) as i64 <= reach && !dist.contains_key(&y) {
                dist.insert(y.clone(), dx + 1);
                if wanted.contains(&y) {
                    missing -= 1;
                }
                queue.push_back(y);
            }
        }
    }
    probe
        .iter()
        .map(|p| {
            dist.get(p)
                .copied()
                .ok_or_else(|| Error::Precondition(format!("{p:?} is not reached by the generators")))
        })
        .collect()
}

/// For each probe point: the pair `(max |x| over S, m)` driving its run.
fn run_keys(gens: &Generators, probe: &[Vec<i64>]) -> Result<Vec<(u128, usize)>> {
    match gens {
        Generators::Whole => Ok(probe.iter().map(|p| (Norm::Max.of(p) as u128, 1)).collect()),
        Generators::Explicit(xs) => {
            if xs.is_empty() {
                return Err(Error::Precondition("empty generating set".into()));
            }
            let s = xs.iter().map(|x| Norm::Max.of(x) as u128).max().unwrap_or(0);
            Ok(d_lengths(xs, probe)?.into_iter().map(|m| (s, m.max(1))).collect())
        }
    }
}

fn check_witness_shape(chain: &GeneratorChain, schedule: &NeighborhoodSchedule) -> Result<()> {
    if chain.radii.is_empty() || schedule.radii.is_empty() {
        return Err(Error::Range("empty chain".into()));
    }
    Ok(())
}

/// Lifts an ω-type witness on the generators to the family `{K_{2n} + O_n}`.
///
/// A finite `A` of probe points is handled through `S` and `m` as follows:
/// the least `l ≥ 3m` in `I_S` is found, the containments
/// `j(S - S) ⊆ K_{l+j} + O_{l-j}` are replayed, and `A ⊆ K_{2n} + O_n` is
/// checked for `n = l - m`. The run depends on `A` only through its largest
/// key, so one run per distinct key settles every finite subset of the probe.
pub fn lift_scheepers(
    chain: &GeneratorChain,
    schedule: &NeighborhoodSchedule,
    gens: &Generators,
    probe: &[Vec<i64>],
) -> Result<AbelianLift> {
    check_witness_shape(chain, schedule)?;
    let ctx = Ctx::new(chain, schedule)?;
    let keys = run_keys(gens, probe)?;
    // Largest probe norm per key: the set of points a run must engulf.
    let mut runs: BTreeMap<(u128, usize), (u128, Vec<i64>)> = BTreeMap::new();
    for (p, &key) in probe.iter().zip(&keys) {
        let norm = Norm::Max.of(p) as u128;
        let e = runs.entry(key).or_insert((0, p.clone()));
        if norm >= e.0 {
            *e = (norm, p.clone());
        }
    }
    let mut traces = Vec::new();
    let mut covered_norm: u128 = 0;
    for (&(s, m), (reach, witness)) in &runs {
        // Every point with a key at most this one rides along.
        covered_norm = covered_norm.max(*reach);
        let l = (3 * m..ctx.len)
            .find(|&l| ctx.in_i(s, l))
            .ok_or_else(|| Error::Range(format!("no index l ≥ {} in I_S below {}", 3 * m, ctx.len)))?;
        let n = l - m;
        if 2 * n >= ctx.len {
            return Err(Error::Range(format!("K_{} is past the end of the chain", 2 * n)));
        }
        let steps = ctx.steps(s, l, m)?;
        if covered_norm > ctx.sum(2 * n, n) {
            return Err(Error::Precondition(format!(
                "probe points of norm {covered_norm} escape K_{} + O_{n}",
                2 * n
            )));
        }
        traces.push(LiftTrace {
            witness: witness.clone(),
            m,
            l,
            n,
            steps,
        });
    }
    Ok(AbelianLift {
        family: ctx.family(),
        traces,
        tail: None,
    })
}

/// Lifts a γ-type witness: each probe point `z` lies in `K_{2n} + O_n` for
/// every `n ≥ l - m`, where `[l, N)` is the tail of `I_S` and `l ≥ 3m`.
pub fn lift_hurewicz(
    chain: &GeneratorChain,
    schedule: &NeighborhoodSchedule,
    gens: &Generators,
    probe: &[Vec<i64>],
) -> Result<AbelianLift> {
    check_witness_shape(chain, schedule)?;
    let ctx = Ctx::new(chain, schedule)?;
    let keys = run_keys(gens, probe)?;
    let family = ctx.family();
    let mut traces = Vec::new();
    let mut tail = 0;
    let mut seen: BTreeMap<(u128, usize, u128), usize> = BTreeMap::new();
    for (p, &(s, m)) in probe.iter().zip(&keys) {
        let norm = Norm::Max.of(p) as u128;
        let s = match gens {
            Generators::Whole => s.max(norm),
            Generators::Explicit(_) => s,
        };
        if let Some(&t) = seen.get(&(s, m, norm)) {
            tail = tail.max(t);
            continue;
        }
        let mut l = ctx.len;
        while l > 3 * m && ctx.in_i(s, l - 1) {
            l -= 1;
        }
        if l >= ctx.len || l < 3 * m {
            return Err(Error::Range(format!("I_S has no tail starting at or after {}", 3 * m)));
        }
        let start = l - m;
        if 2 * start >= ctx.len {
            return Err(Error::Range(format!("K_{} is past the end of the chain", 2 * start)));
        }
        let steps = ctx.steps(s, l, m)?;
        for (n, b) in family.iter().enumerate().skip(start) {
            if !b.contains_point(p) {
                return Err(Error::Precondition(format!("{p:?} escapes K_{} + O_{n}", 2 * n)));
            }
        }
        seen.insert((s, m, norm), start);
        tail = tail.max(start);
        traces.push(LiftTrace {
            witness: p.clone(),
            m,
            l,
            n: start,
            steps,
        });
    }
    if tail >= family.len() {
        return Err(Error::Range(format!("tail {tail} leaves no members")));
    }
    Ok(AbelianLift {
        family,
        traces,
        tail: Some(tail),
    })
}

/// Which lattice points the addition map is defined on.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdditionDomain {
    /// The cone `Nᵈ`.
    Cone,
    /// All of `Zᵈ`.
    Full,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AdditionSummary {
    pub checks: usize,
    pub max_certificate: u128,
}

/// A ball whose preimage reaches the probe boundary.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AdditionFailure {
    pub product_radii: Vec<u64>,
    pub target_radius: u64,
    pub center: Vec<i64>,
}

/// Perfectness of `(x_1, …, x_n) ↦ x_1 + ⋯ + x_n` on `D^n`, `D ⊆ Zᵈ`, with
/// max-norm ball covers of the given radii on both sides and probe box
/// `[-M, M]ᵈ` in each factor.
///
/// For each product cover `(r_1, …, r_n)` the target cover has radius
/// `min r_i`. For each target ball lying inside the image probe, the
/// preimage is the product over coordinates of
/// `{(x_1, …, x_n) : |Σ x_i - c| ≤ ρ}`, whose projection on each factor is an
/// interval computed exactly; a grid of radius-`r_i` balls covering that
/// projection gives the certificate. A projection touching the probe
/// boundary means the preimage is not seen to be bounded, which is a No.
pub fn addition_map_perfectness(
    dim: usize,
    n: usize,
    radii: &[u64],
    m: u64,
    domain: AdditionDomain,
) -> Result<Verdict<AdditionSummary, AdditionFailure>> {
    if n == 0 || dim == 0 || radii.is_empty() {
        return Err(Error::Precondition("need n ≥ 1, d ≥ 1 and at least one radius".into()));
    }
    let m = m as i64;
    let lo_x = match domain {
        AdditionDomain::Cone => 0,
        AdditionDomain::Full => -m,
    };
    let nn = n as i64;
    let mut checks = 0;
    let mut max_cert: u128 = 0;
    let mut tuple = vec![0usize; n];
    loop {
        let r: Vec<u64> = tuple.iter().map(|&i| radii[i]).collect();
        let rho = *r.iter().min().unwrap() as i64;
        // Target balls inside the open probe box; coordinates decouple under the max norm.
        let (clo, chi) = (-m + 1 + rho, m - 1 - rho);
        if clo <= chi {
            for c in clo..=chi {
                // Feasible sums, then each factor's exact range.
                let (slo, shi) = (c - rho, c + rho);
                let raw_lo = slo - (nn - 1) * m;
                let raw_hi = shi - (nn - 1) * lo_x;
                let (lo, hi) = (raw_lo.max(lo_x), raw_hi.min(m));
                if lo > hi {
                    continue;
                }
                if (raw_lo < lo_x && lo_x == -m) || raw_hi > m {
                    return Ok(Verdict::No(AdditionFailure {
                        product_radii: r,
                        target_radius: rho as u64,
                        center: vec![c; dim],
                    }));
                }
                let width = (hi - lo + 1) as u128;
                let cert: u128 = r
                    .iter()
                    .map(|&ri| width.div_ceil(2 * ri as u128 + 1).pow(dim as u32))
                    .product();
                max_cert = max_cert.max(cert);
                checks += 1;
            }
        }
        // Next tuple of radii indices.
        let mut i = 0;
        while i < n && tuple[i] + 1 == radii.len() {
            tuple[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        tuple[i] += 1;
    }
    Ok(Verdict::Yes(AdditionSummary {
        checks,
        max_certificate: max_cert,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{is_gamma_cover, is_omega_cover};
    use crate::spaces::lattice::probe_box;

    fn z_probe(m: i64) -> Vec<Vec<i64>> {
        (-m..=m).map(|x| vec![x]).collect()
    }

    #[test]
    fn chain_and_schedule_checks() {
        assert!(GeneratorChain { radii: vec![1, 3, 5] }.validate().is_err());
        assert!(GeneratorChain::doubling(130).is_err());
        assert!(NeighborhoodSchedule { radii: vec![4, 3] }.validate_halving().is_err());
        assert!(NeighborhoodSchedule::halving(10).unwrap().validate_halving().is_ok());
    }

    #[test]
    fn integers_with_whole_generating_set() {
        let chain = GeneratorChain::doubling(12).unwrap();
        let sched = NeighborhoodSchedule::halving(12).unwrap();
        let probe = z_probe(20);
        let lift = lift_scheepers(&chain, &sched, &Generators::Whole, &probe).unwrap();
        assert!(is_omega_cover(&lift.family, &probe, 3));
        let h = lift_hurewicz(&chain, &sched, &Generators::Whole, &probe).unwrap();
        assert!(is_gamma_cover(&h.family, &probe, h.tail.unwrap(), 0));
    }

    #[test]
    fn plane_with_three_generators() {
        let chain = GeneratorChain::doubling(100).unwrap();
        let sched = NeighborhoodSchedule::halving(100).unwrap();
        let gens = Generators::Explicit(vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let probe = probe_box(2, 20);
        let lift = lift_scheepers(&chain, &sched, &gens, &probe).unwrap();
        assert!(lift.traces.iter().all(|t| t.l >= 3 * t.m));
        assert!(is_omega_cover(&lift.family, &probe, 2));
        let h = lift_hurewicz(&chain, &sched, &gens, &probe).unwrap();
        assert_eq!(h.tail, Some(40));
        assert!(is_gamma_cover(&h.family, &probe, 40, 0));
    }

    #[test]
    fn short_chain_is_a_range_error() {
        let chain = GeneratorChain::doubling(6).unwrap();
        let sched = NeighborhoodSchedule::halving(6).unwrap();
        let gens = Generators::Explicit(vec![vec![1]]);
        assert!(matches!(
            lift_scheepers(&chain, &sched, &gens, &z_probe(20)),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn origin_probe() {
        let chain = GeneratorChain::doubling(8).unwrap();
        let sched = NeighborhoodSchedule::halving(8).unwrap();
        let lift = lift_scheepers(&chain, &sched, &Generators::Whole, &[vec![0]]).unwrap();
        assert!(lift.family.iter().all(|b| b.contains_point(&vec![0])));
    }

    #[test]
    fn addition_map() {
        assert!(addition_map_perfectness(1, 1, &[1, 0], 10, AdditionDomain::Full).unwrap().is_yes());
        assert!(addition_map_perfectness(1, 2, &[2, 1], 10, AdditionDomain::Cone).unwrap().is_yes());
        assert!(addition_map_perfectness(2, 2, &[2, 1], 10, AdditionDomain::Cone).unwrap().is_yes());
        assert!(addition_map_perfectness(1, 2, &[1], 10, AdditionDomain::Full).unwrap().is_no());
    }
}
