//! The triangle forest over spine edges and the Euler-tour scheme built on it.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use super::scheme::{canonical, shortcut, ChargingScheme, DetourMove};
use crate::decomposition::{IntervalLayout, Point};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Rational, VertexId, WeightedGraph};
use crate::monotone::MonotoneTree;

/// Triangle data for a non-tree spine edge `{j,k}` with `left(j) < left(k)`:
/// `i` is the tree parent of `k`, the parent node is `{i,j}` and the tree
/// edge `{i,k}` closes the triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub apex: VertexId,
    pub parent: EdgeId,
    pub tree_edge: EdgeId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct T2Forest {
    /// Spine edges, tree edges among them are the roots.
    pub nodes: BTreeSet<EdgeId>,
    pub triangles: BTreeMap<EdgeId, Triangle>,
    /// Children of each node ordered by the left end of their interval.
    pub children: BTreeMap<EdgeId, Vec<EdgeId>>,
}

impl T2Forest {
    pub fn parent(&self, e: EdgeId) -> Option<EdgeId> {
        self.triangles.get(&e).map(|t| t.parent)
    }

    pub fn roots(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.nodes.iter().copied().filter(|e| !self.triangles.contains_key(e))
    }

    pub fn children(&self, e: EdgeId) -> &[EdgeId] {
        self.children.get(&e).map_or(&[], |c| c.as_slice())
    }

    /// Root reached by following parent links from `e`.
    pub fn root_of(&self, mut e: EdgeId) -> EdgeId {
        while let Some(p) = self.parent(e) {
            e = p;
        }
        e
    }
}

/// Left end of `I_u ∩ I_v`.
pub fn edge_left(g: &WeightedGraph, layout: &IntervalLayout, e: EdgeId) -> Point {
    let edge = g.edge(e);
    layout.left(edge.u).max(layout.left(edge.v))
}

pub(crate) fn check_monotone(t: &MonotoneTree, layout: &IntervalLayout) -> Result<()> {
    for (v, link) in t.parent.iter().enumerate() {
        if let Some((p, _)) = *link {
            let child = VertexId::from(v);
            if layout.left(p) >= layout.left(child) {
                return Err(Error::NotMonotone { child, parent: p });
            }
        }
    }
    Ok(())
}

pub fn build_t2_forest(g: &WeightedGraph, t: &MonotoneTree, layout: &IntervalLayout) -> Result<T2Forest> {
    check_monotone(t, layout)?;
    let mut forest = T2Forest::default();
    for (id, edge) in g.edges().iter().enumerate() {
        if layout.is_flap_vertex(edge.u) || layout.is_flap_vertex(edge.v) {
            continue;
        }
        let e = EdgeId::from(id);
        forest.nodes.insert(e);
        if t.tree.contains(e) {
            continue;
        }
        let (j, k) = if layout.left(edge.u) < layout.left(edge.v) { (edge.u, edge.v) } else { (edge.v, edge.u) };
        let (i, tree_edge) = t.parent[k.index()].ok_or(Error::NotMonotone { child: k, parent: j })?;
        let parent = g.find_edge(i, j).ok_or(Error::NotCompleted(i, j))?;
        forest.triangles.insert(e, Triangle { apex: i, parent, tree_edge });
    }
    for (&e, tri) in &forest.triangles {
        forest.children.entry(tri.parent).or_default().push(e);
    }
    for kids in forest.children.values_mut() {
        kids.sort_by_key(|&c| (edge_left(g, layout, c), c));
    }
    Ok(forest)
}

/// Node sequence of the closed tour below `start`, followed by `root`.
fn tour(forest: &T2Forest, start: EdgeId, root: EdgeId) -> Vec<EdgeId> {
    let mut seq = vec![start];
    let mut stack: Vec<(EdgeId, usize)> = vec![(start, 0)];
    while let Some(top) = stack.last_mut() {
        let kids = forest.children(top.0);
        if top.1 < kids.len() {
            let c = kids[top.1];
            top.1 += 1;
            seq.push(c);
            stack.push((c, 0));
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                seq.push(p);
            }
        }
    }
    seq.push(root);
    seq
}

/// Triangle move for one tour step. Going up from `jk` to `ij`, `{j,k}`
/// charges `j-i-k`; going down from `ij` to `jk`, `{i,j}` charges `i-k-j`.
fn step(g: &WeightedGraph, forest: &T2Forest, from: EdgeId, to: EdgeId) -> DetourMove {
    let child = if forest.parent(from) == Some(to) { from } else { to };
    let tri = forest.triangles[&child];
    DetourMove { edge: from, path: canonical(g, from, vec![to, tri.tree_edge]), amount: Rational::one() }
}

/// Euler-tour scheme over the spine edges. Each tour below a child of a
/// root, with the closing step into the root, gives a chain of triangle
/// moves; only the last visit of every node keeps a move, composed by
/// shortcuts through the skipped visits up to the next kept node.
pub fn build_kpath_scheme(g: &WeightedGraph, t: &MonotoneTree, layout: &IntervalLayout) -> Result<ChargingScheme> {
    let forest = build_t2_forest(g, t, layout)?;
    let mut scheme = ChargingScheme::new(g, t.tree.clone());
    for root in forest.roots() {
        for &start in forest.children(root) {
            let seq = tour(&forest, start, root);
            let steps: Vec<DetourMove> = seq.windows(2).map(|w| step(g, &forest, w[0], w[1])).collect();
            let mut last: BTreeMap<EdgeId, usize> = BTreeMap::new();
            for (pos, &e) in seq[..seq.len() - 1].iter().enumerate() {
                last.insert(e, pos);
            }
            let mut kept: Vec<usize> = last.values().copied().collect();
            kept.sort();
            kept.push(seq.len() - 1);
            for w in kept.windows(2) {
                let (a, b) = (w[0], w[1]);
                let mut cur = steps[a].clone();
                for (c, m) in steps.iter().enumerate().take(b).skip(a + 1) {
                    if !cur.path.contains(&seq[c]) {
                        break;
                    }
                    cur = shortcut(g, &cur, m)?;
                }
                cur.amount = Rational::one();
                scheme.moves.push(cur);
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
    use crate::decomposition::{interval_layout, CaterpillarDecomposition};
    use crate::graph::TreeEdges;

    fn tree_from(n: usize, root: u32, links: &[(u32, u32, u32)]) -> MonotoneTree {
        let mut parent = vec![None; n];
        let mut edges = Vec::new();
        for &(child, p, e) in links {
            parent[child as usize] = Some((VertexId(p), EdgeId(e)));
            edges.push(EdgeId(e));
        }
        edges.sort();
        MonotoneTree { tree: TreeEdges { edges, root: VertexId(root) }, parent }
    }

    #[test]
    fn tree_graph_has_isolated_roots() {
        let g = WeightedGraph::from_int_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0, 1], &[1], &[1, 2]], 1);
        let layout = interval_layout(&d).unwrap();
        let t = tree_from(3, 0, &[(1, 0, 0), (2, 1, 1)]);
        let forest = build_t2_forest(&g, &t, &layout).unwrap();
        assert_eq!(forest.roots().count(), 2);
        assert!(forest.triangles.is_empty());
        let s = build_kpath_scheme(&g, &t, &layout).unwrap();
        assert!(s.moves.is_empty());
        assert_eq!(verify_scheme(&g, &s).value, Rational::from_integer(0));
    }

    #[test]
    fn single_triangle() {
        // i = 0, j = 1, k = 2; ij = e0, ik = e1, jk = e2
        let g = WeightedGraph::from_int_edges(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1], &[0, 1, 2]], 2);
        let layout = interval_layout(&d).unwrap();
        let t = tree_from(3, 0, &[(1, 0, 0), (2, 0, 1)]);
        let forest = build_t2_forest(&g, &t, &layout).unwrap();
        assert_eq!(forest.parent(EdgeId(2)), Some(EdgeId(0)));
        assert_eq!(forest.root_of(EdgeId(2)), EdgeId(0));
        let s = build_kpath_scheme(&g, &t, &layout).unwrap();
        assert_eq!(s.moves.len(), 1);
        assert_eq!(s.moves[0].edge, EdgeId(2));
        let report = verify_scheme(&g, &s);
        assert!(report.valid);
        assert_eq!(report.value, Rational::from_integer(1));
        assert!(verify_acyclic(&s).acyclic);
    }

    #[test]
    fn non_monotone_tree_is_rejected() {
        let g = WeightedGraph::from_int_edges(3, &[(0, 2, 1), (1, 2, 1), (0, 1, 1)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1], &[0, 1, 2]], 2);
        let layout = interval_layout(&d).unwrap();
        // 1 hangs below 2, which starts to its right
        let t = tree_from(3, 0, &[(2, 0, 0), (1, 2, 1)]);
        assert!(matches!(
            build_t2_forest(&g, &t, &layout),
            Err(Error::NotMonotone { child: VertexId(1), parent: VertexId(2) })
        ));
    }

    #[test]
    fn incomplete_graph_reports_pair() {
        let g = WeightedGraph::from_int_edges(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1], &[0, 1, 2], &[0, 1, 2, 3]], 3);
        let layout = interval_layout(&d).unwrap();
        // non-tree {2,3}: j = 2, k = 3, parent of 3 is 1, and {1,2} is absent
        let t = tree_from(4, 0, &[(1, 0, 0), (2, 0, 2), (3, 1, 1)]);
        match build_t2_forest(&g, &t, &layout) {
            Err(Error::NotCompleted(a, b)) => assert_eq!((a, b), (VertexId(1), VertexId(2))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fan_with_repeats_is_acyclic() {
        // complete graph on 5 vertices in one growing bag, star tree from 0
        let mut edges = Vec::new();
        for a in 0..5u32 {
            for b in a + 1..5 {
                edges.push((a, b, 1 + (a * 7 + b * 3) as i64 % 5));
            }
        }
        let g = WeightedGraph::from_int_edges(5, &edges).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1], &[0, 1, 2], &[0, 1, 2, 3], &[0, 1, 2, 3, 4]], 4);
        let layout = interval_layout(&d).unwrap();
        let links: Vec<(u32, u32, u32)> =
            (1..5u32).map(|c| (c, 0, g.find_edge(VertexId(0), VertexId(c)).unwrap().0)).collect();
        let t = tree_from(5, 0, &links);
        let s = build_kpath_scheme(&g, &t, &layout).unwrap();
        let report = verify_scheme(&g, &s);
        assert!(report.valid, "{:?}", report.violations);
        assert!(verify_acyclic(&s).acyclic);
    }
}
