use std::collections::{BTreeSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::lattice::{block_offsets, offsets_count, Norm};
use crate::bits::PointSet;
use crate::cover::{Budget, Certificate, Cover, FiniteCover, FiniteSpace, Multicover, Verdict};
use crate::error::{Error, Result};
use crate::game::{
    play_game, selection_property, solve, verify_on_probe, Chooser, GameConfig, Move, Player, ProbeFailure,
    Strategy, Transcript,
};

/// Largest ball a group cover lists explicitly.
pub const BALL_LIMIT: usize = 1 << 16;

/// A group with a proper word norm, so that the closed balls
/// `{g : |g| ≤ r}` form a neighborhood base of the identity.
pub trait Group: Send + Sync + Debug {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn norm(&self, a: &Self::Elem) -> u64;
    /// Elements of norm at most `r`, sorted, or `None` if more than `limit`.
    fn ball(&self, r: u64, limit: usize) -> Option<Vec<Self::Elem>>;
    fn is_abelian(&self) -> bool;

    /// The first `count` elements ordered by norm, then by element order.
    fn enumerate(&self, count: usize) -> Vec<Self::Elem> {
        let mut r = 0;
        loop {
            let Some(mut ball) = self.ball(r, usize::MAX) else {
                return Vec::new();
            };
            if ball.len() >= count || (r > 0 && self.ball(r - 1, usize::MAX).map(|b| b.len()) == Some(ball.len())) {
                ball.sort_by(|a, b| self.norm(a).cmp(&self.norm(b)).then_with(|| a.cmp(b)));
                ball.truncate(count);
                return ball;
            }
            r += 1;
        }
    }

    fn product(&self, items: &[Self::Elem]) -> Self::Elem {
        items.iter().fold(self.identity(), |acc, x| self.mul(&acc, x))
    }
}

/// Which translates of a neighborhood `U` of the identity form the cover.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `gU`
    Left,
    /// `Ug`
    Right,
    /// `gU ∩ Ug`
    Join,
    /// `UgU`
    Meet,
}

impl Side {
    pub fn symbol(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
            Side::Join => "J",
            Side::Meet => "M",
        }
    }
}

/// Translates of the closed ball of a given radius; member `g` is the translate at `g`.
///
/// Balls above [`BALL_LIMIT`] elements are not listed. Membership still works
/// for one-sided and join covers, but listing the members containing a point
/// panics, so such covers suit probe replays rather than subfamily searches.
#[derive(Clone, Debug)]
pub struct GroupCover<G: Group> {
    group: Arc<G>,
    radius: u64,
    side: Side,
    ball: Option<Vec<G::Elem>>,
    label: String,
}

impl<G: Group> GroupCover<G> {
    pub fn new(group: Arc<G>, radius: u64, side: Side) -> Result<Self> {
        let ball = group.ball(radius, BALL_LIMIT);
        if ball.is_none() && side == Side::Meet {
            return Err(Error::InvalidGroup(format!(
                "two-sided cover needs the ball of radius {radius}, which has more than {BALL_LIMIT} elements"
            )));
        }
        Ok(GroupCover {
            group,
            radius,
            side,
            ball,
            label: format!("{}{radius}", side.symbol()),
        })
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn group(&self) -> &Arc<G> {
        &self.group
    }

    fn within(&self, g: &G::Elem) -> bool {
        self.group.norm(g) <= self.radius
    }

    fn listed_ball(&self) -> &[G::Elem] {
        self.ball
            .as_deref()
            .unwrap_or_else(|| panic!("ball of radius {} is too large to list", self.radius))
    }
}

impl<G: Group> Cover for GroupCover<G> {
    type Point = G::Elem;
    type Member = G::Elem;

    fn label(&self) -> &str {
        &self.label
    }

    fn contains(&self, g: &G::Elem, y: &G::Elem) -> bool {
        let gr = &*self.group;
        let left = || self.within(&gr.mul(&gr.inv(g), y));
        let right = || self.within(&gr.mul(y, &gr.inv(g)));
        match self.side {
            Side::Left => left(),
            Side::Right => right(),
            Side::Join => left() && right(),
            Side::Meet => {
                let gi = gr.inv(g);
                self.listed_ball()
                    .iter()
                    .any(|u| self.within(&gr.mul(&gi, &gr.mul(&gr.inv(u), y))))
            }
        }
    }

    fn members_containing(&self, y: &G::Elem) -> Vec<G::Elem> {
        let gr = &*self.group;
        let ball = self.listed_ball();
        let set: BTreeSet<G::Elem> = match self.side {
            Side::Left => ball.iter().map(|u| gr.mul(y, u)).collect(),
            Side::Right => ball.iter().map(|u| gr.mul(u, y)).collect(),
            Side::Join => ball
                .iter()
                .map(|u| gr.mul(y, u))
                .filter(|g| self.contains(g, y))
                .collect(),
            Side::Meet => ball
                .iter()
                .flat_map(|u| ball.iter().map(move |v| gr.mul(u, &gr.mul(y, v))))
                .collect(),
        };
        set.into_iter().collect()
    }

    fn member_points(&self, g: &G::Elem) -> Option<Vec<G::Elem>> {
        let gr = &*self.group;
        let ball = self.ball.as_deref()?;
        let set: BTreeSet<G::Elem> = match self.side {
            Side::Left => ball.iter().map(|u| gr.mul(g, u)).collect(),
            Side::Right => ball.iter().map(|u| gr.mul(u, g)).collect(),
            Side::Join => ball
                .iter()
                .map(|u| gr.mul(g, u))
                .filter(|y| self.contains(g, y))
                .collect(),
            Side::Meet => {
                if ball.len().saturating_mul(ball.len()) > BALL_LIMIT {
                    return None;
                }
                ball
                    .iter()
                    .flat_map(|u| ball.iter().map(move |v| gr.mul(u, &gr.mul(g, v))))
                    .collect()
            }
        };
        Some(set.into_iter().collect())
    }
}

/// The multicover of `side`-translates of balls with the given radii.
pub fn group_multicover<G: Group>(group: Arc<G>, radii: &[u64], side: Side) -> Result<Multicover<GroupCover<G>>> {
    if radii.is_empty() {
        return Err(Error::InvalidMulticover("no radii".into()));
    }
    let covers = radii
        .iter()
        .map(|&r| GroupCover::new(group.clone(), r, side))
        .collect::<Result<Vec<_>>>()?;
    Ok(Multicover::new(covers))
}

/// A finite group given by its Cayley table, with a generating set defining
/// the word norm.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    norms: Vec<u64>,
    abelian: bool,
}

impl FiniteGroup {
    /// Validates the group axioms and that `generators` generate.
    pub fn new(table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > PointSet::CAPACITY {
            return Err(Error::TooManyPoints(n, PointSet::CAPACITY));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not an n×n table over 0..n".into()));
        }
        if let Some(&g) = generators.iter().find(|&&g| g >= n) {
            return Err(Error::InvalidGroup(format!("generator {g} out of range")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("{a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        let abelian = (0..n).all(|a| (0..n).all(|b| table[a][b] == table[b][a]));
        let mut norms = vec![u64::MAX; n];
        norms[identity] = 0;
        let steps: Vec<usize> = generators.iter().flat_map(|&g| [g, inverse[g]]).collect();
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for &s in &steps {
                let y = table[x][s];
                if norms[y] == u64::MAX {
                    norms[y] = norms[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if let Some(x) = norms.iter().position(|&d| d == u64::MAX) {
            return Err(Error::InvalidGroup(format!("generators do not reach element {x}")));
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
            generators,
            norms,
            abelian,
        })
    }

    /// `Z/n` generated by 1.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::new(table, if n > 1 { vec![1] } else { Vec::new() })
    }

    /// `A × B` with element `(a, b)` numbered `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let (n, m) = (a.order(), b.order());
        let table = (0..n * m)
            .map(|x| (0..n * m).map(|y| a.table[x / m][y / m] * m + b.table[x % m][y % m]).collect())
            .collect();
        let mut gens: Vec<usize> = a.generators.iter().map(|&g| g * m + b.identity).collect();
        gens.extend(b.generators.iter().map(|&h| a.identity * m + h));
        Self::new(table, gens)
    }

    /// The symmetric group on three letters, generated by a transposition and a 3-cycle.
    pub fn s3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| idx([p[q[0]], p[q[1]], p[q[2]]])).collect())
            .collect();
        Self::new(table, vec![1, 3]).expect("S3 table")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity_elem(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn ball_set(&self, r: u64) -> PointSet {
        (0..self.order()).filter(|&x| self.norms[x] <= r).collect()
    }
}

impl Group for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }

    fn inv(&self, a: &usize) -> usize {
        self.inverse[*a]
    }

    fn norm(&self, a: &usize) -> u64 {
        self.norms[*a]
    }

    fn ball(&self, r: u64, limit: usize) -> Option<Vec<usize>> {
        let b: Vec<usize> = self.ball_set(r).iter().collect();
        (b.len() <= limit).then_some(b)
    }

    fn is_abelian(&self) -> bool {
        self.abelian
    }
}

/// The finite space of `side`-translates of the given identity neighborhoods.
/// Member `g` of each cover is the translate at `g`.
pub fn finite_group_space(group: &FiniteGroup, neighborhoods: &[PointSet], side: Side) -> Result<FiniteSpace> {
    let n = group.order();
    if neighborhoods.is_empty() {
        return Err(Error::InvalidMulticover("no neighborhoods".into()));
    }
    let covers = neighborhoods
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            if !u.contains(group.identity) {
                return Err(Error::InvalidGroup(format!("neighborhood {i} misses the identity")));
            }
            if u.iter().any(|x| x >= n) {
                return Err(Error::InvalidGroup(format!("neighborhood {i} has elements out of range")));
            }
            let left = |g: usize| u.iter().map(|x| group.table[g][x]).collect::<PointSet>();
            let right = |g: usize| u.iter().map(|x| group.table[x][g]).collect::<PointSet>();
            let members = (0..n)
                .map(|g| match side {
                    Side::Left => left(g),
                    Side::Right => right(g),
                    Side::Join => left(g).intersection(right(g)),
                    Side::Meet => u
                        .iter()
                        .flat_map(|a| u.iter().map(move |b| group.table[group.table[a][g]][b]))
                        .collect(),
                })
                .collect();
            FiniteCover::new(format!("{}{i}", side.symbol()), n, members)
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteSpace::new(n, covers)
}

/// [`finite_group_space`] for the balls of the given radii.
pub fn finite_group_space_radii(group: &FiniteGroup, radii: &[u64], side: Side) -> Result<FiniteSpace> {
    let nbhds: Vec<PointSet> = radii.iter().map(|&r| group.ball_set(r)).collect();
    finite_group_space(group, &nbhds, side)
}

fn one_sided(side: Side) -> Result<()> {
    match side {
        Side::Left | Side::Right => Ok(()),
        _ => Err(Error::InvalidConfig(format!(
            "the neighborhood game uses left or right translates, not {side:?}"
        ))),
    }
}

/// Plays the neighborhood game on a finite group: I names neighborhoods, II
/// answers finitely many translates. It is the selection game on the
/// one-sided translate multicover, so a strategy there plays here unchanged.
pub fn play_on_finite_group(
    group: &FiniteGroup,
    neighborhoods: &[PointSet],
    side: Side,
    config: &GameConfig,
    chooser: &dyn Chooser,
    strategy: &dyn Strategy,
) -> Result<Transcript> {
    one_sided(side)?;
    let space = finite_group_space(group, neighborhoods, side)?;
    play_game(&space, config, chooser, strategy)
}

/// The neighborhood game on a lazy group, checked on a probe.
pub fn verify_on_group<G, F>(
    group: Arc<G>,
    radii: &[u64],
    side: Side,
    config: &GameConfig,
    probe: &[G::Elem],
    sequences: &[Vec<usize>],
    strategy: F,
) -> Result<Verdict<usize, ProbeFailure<G::Elem>>>
where
    G: Group,
    F: Fn(&[usize]) -> Result<Move<G::Elem, G::Elem>> + Sync,
{
    one_sided(side)?;
    let mc = group_multicover(group, radii, side)?;
    Ok(verify_on_probe(&mc, config, probe, sequences, strategy))
}

/// II wins the left neighborhood game within the configured horizon.
pub fn is_strictly_o_bounded(group: &FiniteGroup, neighborhoods: &[PointSet], config: &GameConfig) -> Result<bool> {
    let space = finite_group_space(group, neighborhoods, Side::Left)?;
    Ok(solve(&space, config)?.winner == Player::II)
}

/// The selection property of the right translate multicover.
pub fn is_o_bounded(
    group: &FiniteGroup,
    neighborhoods: &[PointSet],
    config: &GameConfig,
) -> Result<Verdict<usize, Vec<usize>>> {
    let space = finite_group_space(group, neighborhoods, Side::Right)?;
    selection_property(&space, config)
}

/// `Zᵈ` under addition with the given norm.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LatticeGroup {
    pub dim: usize,
    pub norm: Norm,
}

impl Group for LatticeGroup {
    type Elem = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.dim]
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn inv(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn norm(&self, a: &Vec<i64>) -> u64 {
        self.norm.of(a)
    }

    fn ball(&self, r: u64, limit: usize) -> Option<Vec<Vec<i64>>> {
        if offsets_count(self.dim, r, self.norm) > limit as u128 {
            return None;
        }
        let b = block_offsets(self.dim, r, self.norm);
        (b.len() <= limit).then_some(b)
    }

    fn is_abelian(&self) -> bool {
        true
    }
}

/// II names the next `budget` elements of a fixed enumeration each round.
#[derive(Clone, Debug)]
pub struct EnumerationStrategy<E> {
    order: Vec<E>,
    budget: usize,
}

impl<E> EnumerationStrategy<E> {
    pub fn new(order: Vec<E>, budget: usize) -> Self {
        EnumerationStrategy { order, budget }
    }

    /// Enumerates `group` by norm, enough for `horizon` rounds.
    pub fn for_group<G: Group<Elem = E>>(group: &G, budget: usize, horizon: usize) -> Self {
        Self::new(group.enumerate(budget * horizon), budget)
    }
}

impl<E: Clone + Ord + Send + Sync> Strategy<E> for EnumerationStrategy<E> {
    fn respond(&self, history: &[usize]) -> Result<Certificate<E>> {
        let cover = crate::game::last_cover(history)?;
        let n = history.len() - 1;
        let lo = (n * self.budget).min(self.order.len());
        let hi = ((n + 1) * self.budget).min(self.order.len());
        Ok(Certificate::new(cover, self.order[lo..hi].to_vec()))
    }

    fn budget(&self, _round: usize) -> Budget {
        Budget::Finite(self.budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{coarser_than, restrict};
    use crate::game::{all_sequences, WinKind};
    use crate::spaces::free::{FreeGroup, Word};

    #[test]
    fn cyclic_and_products() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(z6.norm(&3), 3);
        assert_eq!(z6.norm(&5), 1);
        let z2z3 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(3).unwrap())
            .unwrap();
        assert!(z2z3.is_abelian());
        assert!(!FiniteGroup::s3().is_abelian());
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 1]], vec![1]).is_err());
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 0]], vec![]).is_err());
    }

    #[test]
    fn z6_translates() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let s = finite_group_space_radii(&z6, &[1, 0], Side::Left).unwrap();
        assert_eq!(s.cover(0).len(), 6);
        assert_eq!(s.cover(0).member(0), [0, 1, 5].iter().collect());
        let r = finite_group_space_radii(&z6, &[1, 0], Side::Right).unwrap();
        assert_eq!(s.cover(0).members(), r.cover(0).members());
    }

    #[test]
    fn s3_sides_differ() {
        let g = FiniteGroup::s3();
        // A neighborhood that is not normal: {e, (0 1)}.
        let u: PointSet = [0, 2].iter().collect();
        let l = finite_group_space(&g, &[u], Side::Left).unwrap();
        let r = finite_group_space(&g, &[u], Side::Right).unwrap();
        let mut lm: Vec<PointSet> = l.cover(0).members().to_vec();
        let mut rm: Vec<PointSet> = r.cover(0).members().to_vec();
        lm.sort();
        rm.sort();
        lm.dedup();
        rm.dedup();
        assert_ne!(lm, rm);
        let m = finite_group_space(&g, &[u], Side::Meet).unwrap();
        let j = finite_group_space(&g, &[u], Side::Join).unwrap();
        for x in 0..6 {
            assert!(l.cover(0).member(x).is_subset(m.cover(0).member(x)));
            assert!(j.cover(0).member(x).is_subset(l.cover(0).member(x)));
        }
    }

    #[test]
    fn lazy_cover_agrees_with_finite_space() {
        let g = Arc::new(FiniteGroup::s3());
        for side in [Side::Left, Side::Right, Side::Join, Side::Meet] {
            let lazy = GroupCover::new(g.clone(), 1, side).unwrap();
            let fin = finite_group_space_radii(&g, &[1], side).unwrap();
            for x in 0..6 {
                let pts: PointSet = lazy.member_points(&x).unwrap().into_iter().collect();
                assert_eq!(pts, fin.cover(0).member(x), "{side:?} {x}");
                for y in 0..6 {
                    assert_eq!(lazy.contains(&x, &y), pts.contains(y));
                    assert_eq!(lazy.members_containing(&y).contains(&x), pts.contains(y));
                }
            }
        }
    }

    #[test]
    fn free_group_cover_restricted_to_generators() {
        let f2 = Arc::new(FreeGroup::new(2).unwrap());
        let mc = group_multicover(f2.clone(), &[1, 0], Side::Right).unwrap();
        let x: Vec<Word> = ["a", "b", "A", "B"].iter().map(|s| f2.word(s).unwrap()).collect();
        let (space, sources) = restrict(&mc, &x).unwrap();
        assert_eq!(space.n_points(), 4);
        // The radius-1 ball at the identity holds every generator.
        let e = sources[0].iter().position(|w| w.is_empty()).unwrap();
        assert_eq!(space.cover(0).member(e), PointSet::full(4));
        assert!(space.cover(1).members().iter().all(|m| m.len() == 1));
    }

    #[test]
    fn free_group_meet_cover() {
        let f2 = Arc::new(FreeGroup::new(2).unwrap());
        let c = GroupCover::new(f2.clone(), 1, Side::Meet).unwrap();
        let a = f2.word("a").unwrap();
        assert!(c.contains(&a, &f2.word("bab").unwrap()));
        assert!(!c.contains(&a, &f2.word("bbab").unwrap()));
        let pts = c.member_points(&a).unwrap();
        assert!(pts.contains(&f2.word("Bab").unwrap()));
        // Each left translate sits inside the two-sided translate at the same element.
        let l1 = GroupCover::new(f2.clone(), 1, Side::Left).unwrap();
        assert!(coarser_than(&c, &l1, &[Word::identity(), a.clone()], 1).is_yes());
    }

    #[test]
    fn strict_radius_one_enumeration_on_integers() {
        let z = LatticeGroup { dim: 1, norm: Norm::Max };
        let probe: Vec<Vec<i64>> = (-10..=10).map(|x| vec![x]).collect();
        let mc = group_multicover(Arc::new(z), &[0], Side::Left).unwrap();
        for b in 1..=4usize {
            for l in 1..=12usize {
                let strat = EnumerationStrategy::for_group(&z, b, l);
                let cfg = GameConfig::new(l, Budget::Finite(b), WinKind::Cover);
                let v = verify_on_probe(&mc, &cfg, &probe, &all_sequences(1, l), |h| {
                    strat.respond(h).map(Move::plain)
                });
                assert_eq!(v.is_yes(), l >= 21usize.div_ceil(b), "b={b} L={l}");
            }
        }
    }

    #[test]
    fn z6_games() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let nbhds = [z6.ball_set(1), z6.ball_set(0)];
        assert!(!is_strictly_o_bounded(&z6, &nbhds, &GameConfig::cover(5, 1)).unwrap());
        assert!(is_strictly_o_bounded(&z6, &nbhds, &GameConfig::cover(6, 1)).unwrap());
        assert!(is_o_bounded(&z6, &nbhds, &GameConfig::cover(6, 1)).unwrap().is_yes());
        let t = play_on_finite_group(
            &z6,
            &nbhds,
            Side::Left,
            &GameConfig::cover(1, 6),
            &vec![1usize],
            &crate::game::PrefixStrategy {
                space: finite_group_space(&z6, &nbhds, Side::Left).unwrap(),
                budget: 6,
            },
        )
        .unwrap();
        assert_eq!(t.winner, Player::II);
        assert!(play_on_finite_group(&z6, &nbhds, Side::Meet, &GameConfig::cover(1, 6), &vec![1usize], &crate::game::EmptyStrategy).is_err());
    }
}
