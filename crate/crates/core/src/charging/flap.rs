//! Scheme for edges with an endpoint in some flap's `Q`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use super::scheme::{canonical, ChargingScheme, DetourMove};
use super::t2::check_monotone;
use crate::decomposition::{interval_layout, validate, CaterpillarDecomposition};
use crate::error::{Error, Result};
use crate::graph::{DisjointSets, EdgeId, Rational, VertexId, WeightedGraph};
use crate::monotone::MonotoneTree;

type Crossing = (VertexId, VertexId, EdgeId);

/// Inside each flap clique the tree splits into components. A non-tree
/// edge within one component charges its tree path there. Edges between
/// two components form one group per component pair, ordered by edge id;
/// each charges the next edge of its group plus the tree paths joining the
/// endpoints, and the last one charges its whole tree path.
pub fn build_flap_scheme(g: &WeightedGraph, t: &MonotoneTree, d: &CaterpillarDecomposition) -> Result<ChargingScheme> {
    validate(g, d).into_result()?;
    let layout = interval_layout(d)?;
    check_monotone(t, &layout)?;
    let depth = t.depths();
    let mut scheme = ChargingScheme::new(g, t.tree.clone());
    for flap in &d.flaps {
        let clique: Vec<VertexId> = flap.clique().collect();
        let slot: BTreeMap<VertexId, usize> = clique.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let q: BTreeSet<VertexId> = flap.q.iter().copied().collect();

        let mut sets = DisjointSets::new(clique.len());
        let mut flap_edges = Vec::new();
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                let e = g.find_edge(a, b).ok_or(Error::NotCompleted(a.min(b), a.max(b)))?;
                if t.tree.contains(e) {
                    sets.union(slot[&a], slot[&b]);
                } else if q.contains(&a) || q.contains(&b) {
                    flap_edges.push(e);
                }
            }
        }
        flap_edges.sort();

        let label = |v: VertexId, sets: &mut DisjointSets| clique[sets.find(slot[&v])];
        // component pair -> (end in the first component, end in the second, edge)
        let mut groups: BTreeMap<(VertexId, VertexId), Vec<Crossing>> = BTreeMap::new();
        for e in flap_edges {
            let edge = g.edge(e);
            let (cu, cv) = (label(edge.u, &mut sets), label(edge.v, &mut sets));
            if cu == cv {
                let path = t.path_between(edge.u, edge.v, &depth);
                scheme.moves.push(DetourMove { edge: e, path: canonical(g, e, path), amount: Rational::one() });
            } else if cu < cv {
                groups.entry((cu, cv)).or_default().push((edge.u, edge.v, e));
            } else {
                groups.entry((cv, cu)).or_default().push((edge.v, edge.u, e));
            }
        }
        for group in groups.values() {
            for (i, &(x, y, e)) in group.iter().enumerate() {
                let path = match group.get(i + 1) {
                    Some(&(nx, ny, ne)) => {
                        let mut path = t.path_between(x, nx, &depth);
                        path.push(ne);
                        path.extend(t.path_between(ny, y, &depth));
                        path
                    }
                    None => t.path_between(x, y, &depth),
                };
                scheme.moves.push(DetourMove { edge: e, path: canonical(g, e, path), amount: Rational::one() });
            }
        }
    }
    scheme.normalize();
    Ok(scheme)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charging::scheme::{verify_acyclic, verify_scheme};
    use crate::decomposition::Flap;
    use crate::graph::TreeEdges;
    use crate::monotone::lightest_monotone_tree;

    fn leaf_instance() -> (WeightedGraph, CaterpillarDecomposition) {
        // spine bag {0,1}, k-leaf 2 on {0,1}
        let g = WeightedGraph::from_int_edges(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 3)]).unwrap();
        let mut d = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1]], 2);
        d.flaps.push(Flap { p: vec![VertexId(0), VertexId(1)], q: vec![VertexId(2)], anchor: 1 });
        (g, d)
    }

    #[test]
    fn k_leaf_attachment_needs_no_moves_when_p_edge_is_tree() {
        let (g, d) = leaf_instance();
        let t = lightest_monotone_tree(&g, &d).unwrap();
        // 2 attaches to 0 through e1; {1,2} is non-tree but both ends meet in one component
        let s = build_flap_scheme(&g, &t, &d).unwrap();
        assert_eq!(s.moves.len(), 1);
        assert_eq!(s.moves[0].edge, EdgeId(2));
        assert!(verify_scheme(&g, &s).valid);
    }

    #[test]
    fn one_two_flap_triangle() {
        // spine {0}, flap P = {0}, Q = {1,2}
        let g = WeightedGraph::from_int_edges(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 5)]).unwrap();
        let mut d = CaterpillarDecomposition::from_lists(&[&[0]], 2);
        d.flaps.push(Flap { p: vec![VertexId(0)], q: vec![VertexId(1), VertexId(2)], anchor: 0 });
        let t = lightest_monotone_tree(&g, &d).unwrap();
        assert_eq!(t.tree.edges, vec![EdgeId(0), EdgeId(1)]);
        let s = build_flap_scheme(&g, &t, &d).unwrap();
        assert_eq!(s.moves.len(), 1);
        let report = verify_scheme(&g, &s);
        assert!(report.valid);
        assert_eq!(report.value, Rational::one());
        assert!(verify_acyclic(&s).acyclic);
    }

    #[test]
    fn cross_component_edges_chain() {
        // P = {0,2}, Q = {3}; the tree reaches 2 through 1 and 3 hangs off 0,
        // so 0 and 2 fall in different components inside the clique
        let g = WeightedGraph::from_int_edges(4, &[(0, 1, 1), (1, 2, 1), (0, 2, 9), (0, 3, 1), (2, 3, 9)]).unwrap();
        let mut d = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1], &[0, 1, 2]], 2);
        d.flaps.push(Flap { p: vec![VertexId(0), VertexId(2)], q: vec![VertexId(3)], anchor: 2 });
        let t = lightest_monotone_tree(&g, &d).unwrap();
        assert!(!t.tree.contains(EdgeId(4)));
        let s = build_flap_scheme(&g, &t, &d).unwrap();
        // {2,3} escapes along 3-0-1-2
        assert_eq!(s.moves.len(), 1);
        assert_eq!(s.moves[0].path.len(), 3);
        // {0,2} belongs to the spine scheme
        let layout = interval_layout(&d).unwrap();
        let both = crate::charging::build_kpath_scheme(&g, &t, &layout).unwrap().merged(s);
        assert!(verify_scheme(&g, &both).valid);
        assert!(verify_acyclic(&both).acyclic);
    }

    #[test]
    fn bad_flap_is_rejected() {
        let (g, mut d) = leaf_instance();
        d.flaps[0].anchor = 7;
        let t = MonotoneTree {
            tree: TreeEdges { edges: vec![EdgeId(0), EdgeId(1)], root: VertexId(0) },
            parent: vec![None, Some((VertexId(0), EdgeId(0))), Some((VertexId(0), EdgeId(1)))],
        };
        assert!(build_flap_scheme(&g, &t, &d).is_err());
    }
}
