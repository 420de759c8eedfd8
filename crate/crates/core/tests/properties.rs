use std::collections::BTreeSet;
use std::sync::Arc;

use multicover::bits::PointSet;
use multicover::combinators::{
    check_subsequence_containment, verify_gamma_upgrade, verify_union, GammaUpgrade, Outcome, UnionStrategy,
};
use multicover::cover::{
    bounded_by, coarser_than, equivalent_multicovers, is_centered, is_cover, is_gamma_cover, is_omega_cover, Budget,
    Cover, FiniteCover, FiniteSpace, Verdict,
};
use multicover::game::{
    all_sequences, evaluate_i_policy, evaluate_strategy, play_game, solve, GameConfig, GreedyStrategy, Player, Policy,
    Strategy as Play, WinKind,
};
use multicover::spaces::{
    finite_group_space_radii, group_multicover, metric_multicover, FiniteGroup, FiniteMetricSpace, FreeGroup,
    GeneratorChain, NeighborhoodSchedule, Side, Word,
};
use num_rational::Rational64;
use proptest::prelude::*;

fn build(n: usize, covers: Vec<Vec<u128>>) -> FiniteSpace {
    let full = (1u128 << n) - 1;
    let covers = covers
        .into_iter()
        .enumerate()
        .map(|(i, masks)| {
            let mut masks: Vec<u128> = masks.into_iter().map(|m| m & full).filter(|&m| m != 0).collect();
            let missing = full & !masks.iter().fold(0, |a, m| a | m);
            if missing != 0 {
                masks.push(missing);
            }
            masks.sort_unstable();
            masks.dedup();
            FiniteCover::new(format!("u{i}"), n, masks.into_iter().map(PointSet::from_bits).collect()).unwrap()
        })
        .collect();
    FiniteSpace::new(n, covers).unwrap()
}

fn arb_space() -> impl Strategy<Value = FiniteSpace> {
    (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(1u128..(1 << n), 1..=4), 1..=3).prop_map(move |c| build(n, c))
    })
}

fn arb_win(horizon: usize) -> impl Strategy<Value = WinKind> {
    prop_oneof![
        Just(WinKind::Cover),
        (1usize..=3).prop_map(|k| WinKind::Omega { k }),
        (0..horizon, 0usize..=1).prop_map(|(m, f)| WinKind::Gamma { m, f }),
    ]
}

fn arb_game() -> impl Strategy<Value = (FiniteSpace, GameConfig)> {
    (arb_space(), 1usize..=3, 1usize..=2).prop_flat_map(|(s, l, b)| {
        arb_win(l).prop_map(move |w| (s.clone(), GameConfig::new(l, Budget::Finite(b), w)))
    })
}

fn ii_wins(s: &FiniteSpace, cfg: GameConfig) -> bool {
    solve(s, &cfg).unwrap().winner == Player::II
}

fn greedy(s: &FiniteSpace, budget: usize, probe: PointSet) -> GreedyStrategy {
    GreedyStrategy {
        space: s.clone(),
        budget,
        probe,
    }
}

fn points(mask: u128) -> Vec<usize> {
    PointSet::from_bits(mask).to_vec()
}

fn masks(s: &FiniteSpace, i: usize) -> BTreeSet<u128> {
    s.cover(i).members().iter().map(|m| m.bits()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    // cover-core

    #[test]
    fn bounded_by_is_monotone(s in arb_space(), i in 0usize..3, a in any::<u128>(), b in any::<u128>(), k in 0usize..4) {
        let cover = s.cover(i % s.n_covers());
        let full = s.ground().bits();
        let small = a & full;
        let big = small | (b & full);
        let bounded = |m: u128, k: usize| bounded_by(cover, &points(m), Budget::Finite(k)).unwrap().is_some();
        if bounded(big, k) {
            prop_assert!(bounded(small, k));
            prop_assert!(bounded(big, k + 1));
        }
    }

    #[test]
    fn coarser_than_is_a_preorder(s in arb_space(), a in 1usize..3, b in 1usize..3) {
        let probe = s.points();
        let nc = s.n_covers();
        for u in 0..nc {
            prop_assert!(coarser_than(s.cover(u), s.cover(u), &probe, 1).is_yes());
            for v in 0..nc {
                let uv = coarser_than(s.cover(u), s.cover(v), &probe, a);
                prop_assert!(!uv.is_unknown());
                for w in 0..nc {
                    let vw = coarser_than(s.cover(v), s.cover(w), &probe, b);
                    if uv.is_yes() && vw.is_yes() {
                        prop_assert!(coarser_than(s.cover(u), s.cover(w), &probe, a * b).is_yes());
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_has_singleton_certificates(s in arb_space(), cut in any::<u128>()) {
        let n = s.n_points();
        let u = s.cover(0);
        let halves: Vec<Vec<usize>> = u
            .members()
            .iter()
            .flat_map(|m| [m.bits() & cut, m.bits() & !cut])
            .filter(|&h| h != 0)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(points)
            .collect();
        let v = FiniteCover::from_lists("v", n, &halves).unwrap();
        match coarser_than(u, &v, &s.points(), 1) {
            Verdict::Yes(ev) => prop_assert!(ev.per_member.iter().all(|(_, c)| c.len() == 1)),
            other => prop_assert!(false, "{:?}", other.strip()),
        }
    }

    #[test]
    fn restriction_commutes_with_products(x in arb_space(), y in arb_space(), a in any::<u128>(), b in any::<u128>()) {
        let za = (a | 1) & x.ground().bits();
        let zb = (b | 1) & y.ground().bits();
        let ny = y.n_points();
        let rect: PointSet = points(za).into_iter().flat_map(|p| points(zb).into_iter().map(move |q| p * ny + q)).collect();
        let whole = x.product(&y).unwrap().restrict(rect).unwrap().space;
        let parts = x
            .restrict(PointSet::from_bits(za))
            .unwrap()
            .space
            .product(&y.restrict(PointSet::from_bits(zb)).unwrap().space)
            .unwrap();
        prop_assert_eq!(whole.n_covers(), parts.n_covers());
        for i in 0..whole.n_covers() {
            prop_assert_eq!(masks(&whole, i), masks(&parts, i));
        }
    }

    #[test]
    fn class_implications(family in prop::collection::vec(any::<u8>(), 1..6), probe in any::<u8>(), k in 1usize..=3) {
        let family: Vec<PointSet> = family.into_iter().map(|m| PointSet::from_bits(m as u128)).collect();
        let probe = points(probe as u128);
        if is_omega_cover(&family, &probe, k) {
            prop_assert!(is_cover(&family, &probe));
        }
        if is_gamma_cover(&family, &probe, 0, 0) {
            prop_assert!(is_omega_cover(&family, &probe, k));
        }
    }

    // game-engine

    #[test]
    fn solver_and_evaluation_agree((s, cfg) in arb_game()) {
        let r = solve(&s, &cfg).unwrap();
        match &r.policy {
            Policy::II(t) => prop_assert!(evaluate_strategy(&s, &cfg, t).unwrap().refutation.is_none()),
            Policy::I(p) => prop_assert!(evaluate_i_policy(&s, &cfg, p).unwrap().is_none()),
        }
        // The solver is deterministic.
        let again = solve(&s, &cfg).unwrap();
        prop_assert_eq!(again.ii_policy(), r.ii_policy());
    }

    #[test]
    fn budget_and_horizon_monotone(s in arb_space(), l in 1usize..=3, k in 1usize..=3) {
        for win in [WinKind::Cover, WinKind::Omega { k }] {
            if ii_wins(&s, GameConfig::new(l, Budget::Finite(1), win)) {
                prop_assert!(ii_wins(&s, GameConfig::new(l, Budget::Finite(2), win)));
                prop_assert!(ii_wins(&s, GameConfig::new(l + 1, Budget::Finite(1), win)));
            }
        }
    }

    #[test]
    fn hierarchy(s in arb_space(), l in 1usize..=3, b in 1usize..=2, k in 1usize..=3) {
        let at = |w| ii_wins(&s, GameConfig::new(l, Budget::Finite(b), w));
        let (gamma, omega, cover) = (at(WinKind::Gamma { m: 0, f: 0 }), at(WinKind::Omega { k }), at(WinKind::Cover));
        prop_assert!(!gamma || omega);
        prop_assert!(!omega || cover);
    }

    #[test]
    fn transcripts_are_deterministic((s, cfg) in arb_game(), seed in any::<u64>()) {
        let seq: Vec<usize> = (0..cfg.horizon).map(|n| (seed >> (4 * n)) as usize % s.n_covers()).collect();
        let ii = greedy(&s, 1, s.ground());
        let l = cfg.horizon;
        let cfg = cfg.with_budgets(vec![Budget::Finite(1); l]);
        let a = play_game(&s, &cfg, &seq, &ii).unwrap();
        let b = play_game(&s, &cfg, &seq, &ii).unwrap();
        prop_assert_eq!(a, b);
    }

    // strategy-combinators

    #[test]
    fn combinator_outputs_match_the_solver(s in arb_space(), l in 2usize..=3, split in any::<u128>()) {
        let cfg = GameConfig::cover(l, 1);
        let g = verify_gamma_upgrade(&s, &cfg, true).unwrap();
        if g.outcome == Outcome::Verified {
            prop_assert_eq!(g.oracle_agrees, Some(true));
        }
        let full = s.ground().bits();
        let a = split & full;
        if a == 0 || a == full {
            return Ok(());
        }
        let u = verify_union(&s, &cfg, &[PointSet::from_bits(a), PointSet::from_bits(full & !a)], true).unwrap();
        if u.outcome == Outcome::Verified {
            prop_assert_eq!(u.oracle_agrees, Some(true));
        }
        prop_assert!(u.outcome != Outcome::Refuted);
    }

    #[test]
    fn gamma_upgrade_contains_every_subsequence(s in arb_space(), l in 1usize..=4, b in 1usize..=2) {
        let theta: Arc<dyn Play> = Arc::new(greedy(&s, b, s.ground()));
        let up = GammaUpgrade::new(theta.clone(), l).unwrap();
        let seqs = all_sequences(s.n_covers(), l);
        prop_assert_eq!(check_subsequence_containment(&*theta, &up, l, &seqs).unwrap(), None);
    }

    #[test]
    fn union_is_the_union_of_pieces(s in arb_space(), probes in prop::collection::vec(any::<u128>(), 1..=3), seed in any::<u64>()) {
        let pieces: Vec<Arc<dyn Play>> = probes
            .iter()
            .map(|&p| Arc::new(greedy(&s, 1, PointSet::from_bits(p & s.ground().bits()))) as Arc<dyn Play>)
            .collect();
        let union = UnionStrategy::new(pieces.clone()).unwrap();
        let history: Vec<usize> = (0..4).map(|n| (seed >> (4 * n)) as usize % s.n_covers()).collect();
        for n in 0..history.len() {
            let h = &history[..=n];
            let got: BTreeSet<usize> = union.respond(h).unwrap().members.into_iter().collect();
            let want: BTreeSet<usize> = pieces
                .iter()
                .enumerate()
                .take(n + 1)
                .flat_map(|(k, p)| p.respond(&h[k..]).unwrap().members)
                .collect();
            prop_assert_eq!(&got, &want);
            prop_assert_eq!(union.respond(h).unwrap().members.into_iter().collect::<BTreeSet<_>>(), got);
        }
    }

    // space-constructors

    #[test]
    fn metric_and_group_multicovers_are_centered(
        xs in prop::collection::vec(-6i64..6, 1..=5),
        mut radii in prop::collection::vec(1i64..8, 1..=3),
        order in 1usize..=8,
    ) {
        let d: Vec<Vec<i64>> = xs.iter().map(|a| xs.iter().map(|b| (a - b).abs()).collect()).collect();
        radii.sort_unstable_by(|a, b| b.cmp(a));
        let r: Vec<Rational64> = radii.iter().map(|&x| Rational64::from_integer(x)).collect();
        let m = metric_multicover(&FiniteMetricSpace::from_integers(&d).unwrap(), &r).unwrap();
        prop_assert!(is_centered(m.multicover(), &m.points(), m.n_points()).is_yes());
        let g = FiniteGroup::cyclic(order).unwrap();
        let gs = finite_group_space_radii(&g, &[2, 1, 0], Side::Left).unwrap();
        prop_assert!(is_centered(gs.multicover(), &gs.points(), order).is_yes());
    }

    #[test]
    fn products_of_metrics_match_max_metric(
        xs in prop::collection::vec(-4i64..4, 1..=4),
        ys in prop::collection::vec(-4i64..4, 1..=4),
        mut radii in prop::collection::vec(1i64..6, 1..=3),
    ) {
        let metric = |v: &[i64]| {
            let d: Vec<Vec<i64>> = v.iter().map(|a| v.iter().map(|b| (a - b).abs()).collect()).collect();
            FiniteMetricSpace::from_integers(&d).unwrap()
        };
        radii.sort_unstable_by(|a, b| b.cmp(a));
        radii.dedup();
        let r: Vec<Rational64> = radii.iter().map(|&x| Rational64::from_integer(x)).collect();
        let (x, y) = (metric(&xs), metric(&ys));
        let max = metric_multicover(&x.product_max(&y).unwrap(), &r).unwrap();
        let prod = metric_multicover(&x, &r).unwrap().product(&metric_multicover(&y, &r).unwrap()).unwrap();
        prop_assert!(equivalent_multicovers(max.multicover(), prod.multicover(), &prod.points(), 1).is_yes());
    }

    #[test]
    fn schedules_validate_exactly(k in prop::collection::vec(1u128..1000, 1..8), o in prop::collection::vec(0u128..1000, 1..8), len in 1usize..=120) {
        prop_assert!(GeneratorChain::doubling(len).unwrap().validate().is_ok());
        prop_assert!(NeighborhoodSchedule::halving(len).unwrap().validate_halving().is_ok());
        let doubling = k.windows(2).all(|w| 2 * w[0] <= w[1]);
        prop_assert_eq!(GeneratorChain { radii: k }.validate().is_ok(), doubling);
        let halving = o.iter().all(|&r| r > 0) && o.windows(2).all(|w| 2 * w[1] <= w[0]);
        prop_assert_eq!(NeighborhoodSchedule { radii: o }.validate_halving().is_ok(), halving);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    /// `y ∈ gU` iff `g⁻¹y ∈ U`, with `gU` listed by the cover and the right
    /// side computed by table lookup or free reduction.
    #[test]
    fn translate_membership(a in 1usize..=4, b in 1usize..=3, g in any::<usize>(), y in any::<usize>(), r in 0u64..3,
                            gw in prop::collection::vec(prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)], 0..6),
                            yw in prop::collection::vec(prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)], 0..6)) {
        let group = FiniteGroup::direct_product(&FiniteGroup::cyclic(a).unwrap(), &FiniteGroup::cyclic(b).unwrap()).unwrap();
        let n = group.order();
        let (g, y) = (g % n, y % n);
        let s = finite_group_space_radii(&group, &[r], Side::Left).unwrap();
        let table = group.table();
        let e = group.identity_elem();
        let inv = (0..n).find(|&h| table[g][h] == e).unwrap();
        prop_assert_eq!(s.cover(0).member(g).contains(y), group.ball_set(r).contains(table[inv][y]));

        let f2 = Arc::new(FreeGroup::new(2).unwrap());
        let mc = group_multicover(f2, &[r], Side::Left).unwrap();
        let cover = mc.get(0).unwrap();
        let (gw, yw) = (Word::new(&gw), Word::new(&yw));
        let listed = cover.member_points(&gw).unwrap().contains(&yw);
        let mut w: Vec<i8> = gw.letters().iter().rev().map(|x| -x).collect();
        let mut reduced: Vec<i8> = Vec::new();
        w.extend_from_slice(yw.letters());
        for x in w {
            if reduced.last() == Some(&-x) {
                reduced.pop();
            } else {
                reduced.push(x);
            }
        }
        prop_assert_eq!(listed, reduced.len() as u64 <= r);
        prop_assert_eq!(cover.contains(&gw, &yw), listed);
    }
}
