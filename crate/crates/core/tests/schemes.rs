mod common;

use std::collections::BTreeMap;

use catspan::charging::{
    build_kpath_scheme, build_t2_forest, edge_left, eliminate_edge, shortcut, verify_acyclic, verify_scheme,
    ChargingScheme, DetourMove,
};
use catspan::decomposition::interval_layout;
use catspan::spanner::{pipeline_parts, PipelineParts};
use catspan::toolkit::generate::{corpus_spec, gen_kcaterpillar};
use catspan::toolkit::rng::Rng;
use catspan::{EdgeId, Rational, WeightedGraph};
use proptest::prelude::*;

fn parts(k: usize, n: usize, seed: u64, flaps: bool) -> PipelineParts {
    let (g, d) = gen_kcaterpillar(&corpus_spec(k, n, seed, flaps, 750)).unwrap();
    pipeline_parts(&g, &d, Rational::new(1, 2)).unwrap()
}

/// Walks `path` from one end of `edge` and checks it is a simple path to
/// the other end.
fn closes_simple_cycle(g: &WeightedGraph, m: &DetourMove) -> bool {
    let e = g.edge(m.edge);
    [e.u, e.v].into_iter().any(|start| {
        let mut at = start;
        let mut seen = vec![start];
        for &p in &m.path {
            let pe = g.edge(p);
            if p == m.edge || !pe.touches(at) {
                return false;
            }
            at = pe.other(at);
            if seen.contains(&at) {
                return false;
            }
            seen.push(at);
        }
        at == e.other(start) && m.path.len() >= 2
    })
}

/// Out and In recomputed from the move list.
fn flows(s: &ChargingScheme) -> BTreeMap<EdgeId, (Rational, Rational)> {
    let mut f: BTreeMap<EdgeId, (Rational, Rational)> = BTreeMap::new();
    for m in &s.moves {
        f.entry(m.edge).or_default().0 += m.amount;
        for p in &m.path {
            f.entry(*p).or_default().1 += m.amount;
        }
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructed_scheme_is_valid_and_acyclic(k in 1usize..=4, n in 20usize..80, seed in any::<u64>(), flaps in any::<bool>()) {
        let p = parts(k, n, seed, flaps);
        let report = verify_scheme(&p.working, &p.scheme);
        prop_assert!(report.valid, "{:?}", report.violations);
        prop_assert!(verify_acyclic(&p.scheme).acyclic);
        // independent recount of the conditions
        let f = flows(&p.scheme);
        let mut value = Rational::from_integer(0);
        for e in p.working.edge_ids() {
            let (out, inflow) = f.get(&e).copied().unwrap_or_default();
            if p.tree.tree.contains(e) {
                prop_assert_eq!(out, Rational::from_integer(0));
                value = value.max(inflow - out);
            } else {
                prop_assert!(out >= Rational::from_integer(1));
                prop_assert!(inflow <= out);
            }
        }
        prop_assert_eq!(value, report.value);
        for m in &p.scheme.moves {
            prop_assert!(closes_simple_cycle(&p.working, m));
        }
    }

    #[test]
    fn spine_scheme_is_integral(k in 1usize..=4, n in 20usize..80, seed in any::<u64>()) {
        let p = parts(k, n, seed, false);
        let layout = interval_layout(&p.reduced_decomposition).unwrap();
        let s = build_kpath_scheme(&p.working, &p.tree, &layout).unwrap();
        let f = flows(&s);
        for e in p.working.edge_ids().filter(|&e| !p.tree.tree.contains(e)) {
            let (out, inflow) = f[&e];
            prop_assert_eq!(out, Rational::from_integer(1));
            prop_assert!(inflow.is_integer() && inflow <= out);
        }
        let degree = p.working.max_degree() as i64;
        prop_assert!(verify_scheme(&p.working, &s).value <= Rational::from_integer(4 * degree));
    }

    #[test]
    fn triangle_forest_links_move_left(k in 1usize..=4, n in 20usize..80, seed in any::<u64>(), flaps in any::<bool>()) {
        let p = parts(k, n, seed, flaps);
        let layout = interval_layout(&p.reduced_decomposition).unwrap();
        let forest = build_t2_forest(&p.working, &p.tree, &layout).unwrap();
        for (&e, tri) in &forest.triangles {
            prop_assert!(edge_left(&p.working, &layout, tri.parent) < edge_left(&p.working, &layout, e));
            prop_assert!(p.tree.tree.contains(tri.tree_edge));
            prop_assert!(p.tree.tree.contains(forest.root_of(e)));
        }
        for r in forest.roots() {
            prop_assert!(p.tree.tree.contains(r));
        }
    }

    #[test]
    fn elimination_keeps_scheme_valid(k in 1usize..=4, n in 20usize..60, seed in any::<u64>()) {
        let p = parts(k, n, seed, true);
        let before = verify_scheme(&p.working, &p.scheme);
        let non_tree: Vec<EdgeId> = p.working.edge_ids().filter(|&e| !p.tree.tree.contains(e)).collect();
        prop_assume!(!non_tree.is_empty());
        let e = non_tree[Rng::new(seed).index(non_tree.len())];
        let after = eliminate_edge(&p.working, &p.scheme, e).unwrap();
        let report = verify_scheme(&p.working, &after);
        prop_assert!(report.valid, "{:?}", report.violations);
        prop_assert!(verify_acyclic(&after).acyclic);
        prop_assert!(report.value <= before.value);
        prop_assert!(after.moves.iter().all(|m| m.edge != e && !m.path.contains(&e)));
    }

    #[test]
    fn shortcuts_are_detours(k in 1usize..=4, n in 20usize..60, seed in any::<u64>()) {
        let p = parts(k, n, seed, true);
        let by_edge: BTreeMap<EdgeId, &DetourMove> = p.scheme.moves.iter().map(|m| (m.edge, m)).collect();
        let mut checked = 0;
        for m1 in &p.scheme.moves {
            for f in &m1.path {
                if let Some(m2) = by_edge.get(f) {
                    if !m2.path.contains(&m1.edge) {
                        let cut = shortcut(&p.working, m1, m2).unwrap();
                        prop_assert_eq!(cut.edge, m1.edge);
                        prop_assert!(closes_simple_cycle(&p.working, &cut));
                        checked += 1;
                    }
                }
            }
        }
        prop_assert!(checked > 0 || p.scheme.moves.len() < 2 || k == 1);
    }

    #[test]
    fn value_is_linear(k in 1usize..=4, n in 20usize..50, seed in any::<u64>(), a in 1i64..20, b in 1i64..20) {
        let p = parts(k, n, seed, true);
        let lambda = Rational::new(a, b);
        let v = verify_scheme(&p.working, &p.scheme).value;
        prop_assert_eq!(verify_scheme(&p.working, &p.scheme.scaled(lambda)).value, v * lambda);
    }
}

/// Eliminating every edge the greedy spanner dropped leaves a valid scheme
/// on the spanner itself.
#[test]
fn elimination_down_to_the_spanner() {
    for seed in 0..6 {
        let p = parts(2 + seed as usize % 3, 40, seed, true);
        let v = verify_scheme(&p.working, &p.scheme).value;
        let mut s = p.scheme.clone();
        for e in p.working.edge_ids().filter(|e| !p.spanner.contains(e)) {
            s = eliminate_edge(&p.working, &s, e).unwrap();
        }
        assert_eq!(s.support, p.spanner);
        let report = verify_scheme(&p.working, &s);
        assert!(report.valid && report.value <= v);
        assert!(verify_acyclic(&s).acyclic);
    }
}
