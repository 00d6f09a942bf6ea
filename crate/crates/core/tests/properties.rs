use std::f64::consts::PI;

use bsn::analytic::{solve, thresholds, Phase};
use bsn::fermat::{steiner_info, weiszfeld_point, SteinerKind};
use bsn::network::Network;
use bsn::{Point, TerminalTriangle};
use proptest::prelude::*;

fn well_shaped(t: &TerminalTriangle) -> bool {
    t.shortest_side().0 > 0.05 && t.angles().iter().all(|&a| a > 0.05)
}

fn triangle() -> impl Strategy<Value = TerminalTriangle> {
    proptest::array::uniform6(0.0..1.0f64).prop_filter_map("sliver or degenerate", |c| {
        TerminalTriangle::from_coords([[c[0], c[1]], [c[2], c[3]], [c[4], c[5]]]).ok().filter(well_shaped)
    })
}

/// Budget at fraction `f` of `[l_st, l3]`.
fn budget_at(t: &TerminalTriangle, f: f64) -> f64 {
    let th = thresholds(t).unwrap();
    th.l_st + f * (th.l3 - th.l_st)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solutions_are_feasible_and_valid(t in triangle(), f in 0.0..1.0f64) {
        let th = thresholds(&t).unwrap();
        let l = budget_at(&t, f);
        let r = solve(&t, l).unwrap();
        prop_assert!(r.l_used <= l + 1e-9 * th.l3);
        if r.phase != Phase::Complete {
            prop_assert!((r.l_used - l).abs() <= 1e-9 * th.l3, "unspent budget {} of {}", r.l_used, l);
        }
        prop_assert!(r.objective.j >= th.l3 - 1e-9);
        let v = r.network.validate(1e-9);
        prop_assert!(v.is_empty(), "{:?} at {} ({})", v, l, r.phase);
    }

    #[test]
    fn objective_never_increases(t in triangle(), f in 0.0..1.0f64, g in 0.0..1.0f64) {
        let (lo, hi) = if f < g { (f, g) } else { (g, f) };
        let a = solve(&t, budget_at(&t, lo)).unwrap();
        let b = solve(&t, budget_at(&t, hi)).unwrap();
        prop_assert!(b.objective.j <= a.objective.j + 1e-12);
        prop_assert!(b.phase.rank() >= a.phase.rank());
    }

    #[test]
    fn rigid_motions_and_scaling(t in triangle(), f in 0.01..0.99f64, turn in 0.0..2.0 * PI,
                                 dx in -5.0..5.0f64, dy in -5.0..5.0f64, s in 0.1..10.0f64) {
        let moved = t.map(|p| p.rotate(turn) * s + Point::new(dx, dy)).unwrap();
        let (th, th2) = (thresholds(&t).unwrap(), thresholds(&moved).unwrap());
        prop_assert!((th2.l_st - s * th.l_st).abs() <= 1e-9 * s * th.l3);
        prop_assert!((th2.l2 - s * th.l2).abs() <= 1e-9 * s * th.l3);
        let l = budget_at(&t, f);
        let (a, b) = (solve(&t, l).unwrap(), solve(&moved, s * l).unwrap());
        prop_assert!((b.objective.j - s * a.objective.j).abs() <= 1e-8 * s * th.l3);
        let near = th.all().iter().any(|&x| (x - l).abs() < 1e-6 * th.l3);
        if !near {
            prop_assert_eq!(a.phase, b.phase);
            prop_assert_eq!(a.network.anchor_count(), b.network.anchor_count());
        }
    }

    #[test]
    fn relabeling_terminals(t in triangle(), f in 0.0..1.0f64) {
        let [a, b, c] = t.vertices();
        let l = budget_at(&t, f);
        let base = solve(&t, l).unwrap().objective.j;
        for (p, q, r) in [(b, c, a), (c, a, b), (b, a, c)] {
            let u = TerminalTriangle::new(p, q, r).unwrap();
            prop_assert!((solve(&u, l).unwrap().objective.j - base).abs() <= 1e-9 * t.perimeter());
        }
    }

    #[test]
    fn steiner_point_matches_weiszfeld(t in triangle()) {
        let s = steiner_info(&t);
        if s.kind == SteinerKind::Interior && t.angles().iter().all(|&a| a < 2.0 * PI / 3.0 - 0.05) {
            let w = weiszfeld_point(&t, 1e-14, 100_000).unwrap();
            prop_assert!(w.dist(s.point) < 1e-7 * t.perimeter());
        }
        let sum: f64 = t.vertices().iter().map(|v| v.dist(s.point)).sum();
        prop_assert!((sum - s.l_st).abs() < 1e-12 * t.perimeter());
    }

    #[test]
    fn extra_edges_never_lengthen_paths(t in triangle(), mask in 0u8..8, extra in 0u8..8) {
        let a = Network::sides(t, mask).evaluate(1e9);
        let b = Network::sides(t, mask | extra).evaluate(1e9);
        prop_assert!(b.d_ab <= a.d_ab && b.d_bc <= a.d_bc && b.d_ac <= a.d_ac);
    }

    #[test]
    fn tree_objective_is_twice_length(t in triangle()) {
        let n = Network::steiner_tree(t);
        prop_assert!((n.evaluate(1e9).j - 2.0 * n.total_length()).abs() <= 1e-12 * t.perimeter());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn oracle_never_beats_exact_solution(t in triangle(), f in 0.0..1.0f64) {
        let l = budget_at(&t, f);
        let exact = solve(&t, l).unwrap();
        let found = bsn::oracle::solve(&t, l, 7);
        prop_assert!(found.j >= exact.objective.j - 1e-6, "{} < {}", found.j, exact.objective.j);
        prop_assert!(found.best.total_length() <= l + bsn::oracle::BUDGET_SLACK);
        let v = found.best.validate(1e-3);
        prop_assert!(v.is_empty(), "{:?}", v);
    }
}
