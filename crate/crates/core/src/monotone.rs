//! Monotone spanning trees: every parent's interval starts left of its
//! child's.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::decomposition::{interval_layout, CaterpillarDecomposition, IntervalLayout};
use crate::error::{Error, Result};
use crate::graph::{DisjointSets, EdgeId, TreeEdges, VertexId, WeightedGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneTree {
    pub tree: TreeEdges,
    /// `(parent, edge)` for every non-root vertex.
    pub parent: Vec<Option<(VertexId, EdgeId)>>,
}

impl MonotoneTree {
    pub fn root(&self) -> VertexId {
        self.tree.root
    }

    pub fn parent_of(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v.index()].map(|(p, _)| p)
    }

    fn from_parents(root: VertexId, parent: Vec<Option<(VertexId, EdgeId)>>) -> Self {
        let mut edges: Vec<EdgeId> = parent.iter().flatten().map(|&(_, e)| e).collect();
        edges.sort();
        Self { tree: TreeEdges { edges, root }, parent }
    }

    /// Depth of each vertex below the root.
    pub fn depths(&self) -> Vec<usize> {
        let n = self.parent.len();
        let mut depth = vec![usize::MAX; n];
        depth[self.root().index()] = 0;
        for start in 0..n {
            let mut chain = Vec::new();
            let mut x = start;
            while depth[x] == usize::MAX {
                chain.push(x);
                x = self.parent[x].expect("non-root vertices have parents").0.index();
            }
            let mut d = depth[x];
            for &y in chain.iter().rev() {
                d += 1;
                depth[y] = d;
            }
        }
        depth
    }

    /// Tree path between `a` and `b` as edge ids, from `a`'s side.
    pub fn path_between(&self, a: VertexId, b: VertexId, depth: &[usize]) -> Vec<EdgeId> {
        let (mut x, mut y) = (a, b);
        let mut front = Vec::new();
        let mut back = Vec::new();
        while depth[x.index()] > depth[y.index()] {
            let (p, e) = self.parent[x.index()].unwrap();
            front.push(e);
            x = p;
        }
        while depth[y.index()] > depth[x.index()] {
            let (p, e) = self.parent[y.index()].unwrap();
            back.push(e);
            y = p;
        }
        while x != y {
            let (px, ex) = self.parent[x.index()].unwrap();
            let (py, ey) = self.parent[y.index()].unwrap();
            front.push(ex);
            back.push(ey);
            x = px;
            y = py;
        }
        front.extend(back.into_iter().rev());
        front
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneCheck {
    pub monotone: bool,
    /// First offending `(child, parent)` link in breadth-first order.
    pub violation: Option<(VertexId, VertexId)>,
}

/// Roots `t` at the leftmost-interval vertex and checks that every parent
/// link decreases `left()`.
pub fn is_monotone(g: &WeightedGraph, t: &TreeEdges, layout: &IntervalLayout) -> Result<MonotoneCheck> {
    t.check_spanning(g)?;
    let root = layout.leftmost().ok_or_else(|| Error::Precondition("empty layout".into()))?;
    let edges: BTreeSet<EdgeId> = t.edge_set();
    let mut seen = vec![false; g.vertex_count()];
    seen[root.index()] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &(y, e) in g.neighbors(x) {
            if edges.contains(&e) && !seen[y.index()] {
                seen[y.index()] = true;
                if layout.left(x) >= layout.left(y) {
                    return Ok(MonotoneCheck { monotone: false, violation: Some((y, x)) });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(MonotoneCheck { monotone: true, violation: None })
}

/// Cheapest edge from `v` to a neighbour whose interval starts earlier,
/// optionally restricted to `allowed`; ties go to the smaller neighbour id.
fn cheapest_earlier(
    g: &WeightedGraph,
    layout: &IntervalLayout,
    v: VertexId,
    allowed: Option<&dyn Fn(VertexId) -> bool>,
) -> Option<(VertexId, EdgeId)> {
    g.neighbors(v)
        .iter()
        .filter(|&&(u, _)| layout.left(u) < layout.left(v) && allowed.is_none_or(|f| f(u)))
        .min_by_key(|&&(u, e)| (g.units(e), u))
        .copied()
}

fn layout_for(g: &WeightedGraph, d: &CaterpillarDecomposition) -> Result<IntervalLayout> {
    let layout = interval_layout(d)?;
    if layout.len() != g.vertex_count() {
        return Err(Error::Precondition(format!(
            "decomposition covers {} vertices, graph has {}",
            layout.len(),
            g.vertex_count()
        )));
    }
    Ok(layout)
}

/// Left-to-right scan: each newly introduced vertex attaches to its nearest
/// neighbour among vertices already in the tree. Each parent edge is chosen
/// independently, so the result is the lightest monotone spanning tree.
pub fn lightest_monotone_tree(g: &WeightedGraph, d: &CaterpillarDecomposition) -> Result<MonotoneTree> {
    let layout = layout_for(g, d)?;
    lightest_monotone_tree_with(g, &layout)
}

pub fn lightest_monotone_tree_with(g: &WeightedGraph, layout: &IntervalLayout) -> Result<MonotoneTree> {
    let order = layout.order_by_left();
    let root = *order.first().ok_or_else(|| Error::Precondition("empty graph".into()))?;
    let mut parent = vec![None; g.vertex_count()];
    for &v in &order[1..] {
        parent[v.index()] = Some(cheapest_earlier(g, layout, v, None).ok_or(Error::NoEarlierNeighbor(v))?);
    }
    Ok(MonotoneTree::from_parents(root, parent))
}

/// The recursive construction: a lightest monotone path from the leftmost
/// to the rightmost interval, then the components of the minimum spanning
/// tree left after deleting that path, each hooked onto the path at its
/// leftmost vertex and solved recursively. Flap vertices attach by their
/// cheapest edge into the flap clique.
pub fn recursive_monotone_tree(g: &WeightedGraph, d: &CaterpillarDecomposition) -> Result<MonotoneTree> {
    let layout = layout_for(g, d)?;
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let spine: Vec<VertexId> = g.vertices().filter(|&v| !layout.is_flap_vertex(v)).collect();
    let root = spine
        .iter()
        .copied()
        .min_by_key(|&v| layout.left(v))
        .ok_or_else(|| Error::Precondition("empty spine".into()))?;

    let mut work = vec![spine];
    while let Some(members) = work.pop() {
        work.extend(split_component(g, &layout, &members, &mut parent)?);
    }

    for v in layout.order_by_left() {
        if let Some(f) = layout.flap_of(v) {
            let clique = layout.flap_clique(f);
            let inside = |u: VertexId| clique.contains(&u);
            parent[v.index()] =
                Some(cheapest_earlier(g, &layout, v, Some(&inside)).ok_or(Error::NoEarlierNeighbor(v))?);
        }
    }
    Ok(MonotoneTree::from_parents(root, parent))
}

/// One recursion step on `members`; assigns parents along the monotone path
/// and for each component head, and returns the components to recurse on.
fn split_component(
    g: &WeightedGraph,
    layout: &IntervalLayout,
    members: &[VertexId],
    parent: &mut [Option<(VertexId, EdgeId)>],
) -> Result<Vec<Vec<VertexId>>> {
    if members.len() <= 1 {
        return Ok(Vec::new());
    }
    let n = g.vertex_count();
    let mut inside = vec![false; n];
    for &v in members {
        inside[v.index()] = true;
    }
    let mut order = members.to_vec();
    order.sort_by_key(|&v| layout.left(v));
    let start = order[0];
    let end = *members.iter().max_by_key(|&&v| layout.right(v)).unwrap();

    // lightest monotone path start -> end over the left-ordered DAG
    let mut dist = vec![i64::MAX; n];
    let mut via: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    dist[start.index()] = 0;
    for &x in &order {
        let dx = dist[x.index()];
        if dx == i64::MAX {
            continue;
        }
        for &(y, e) in g.neighbors(x) {
            if inside[y.index()] && layout.left(y) > layout.left(x) {
                let nd = dx + g.units(e);
                if nd < dist[y.index()] {
                    dist[y.index()] = nd;
                    via[y.index()] = Some((x, e));
                }
            }
        }
    }
    if dist[end.index()] == i64::MAX {
        return Err(Error::NoEarlierNeighbor(end));
    }
    let mut on_path = vec![false; n];
    on_path[start.index()] = true;
    let mut x = end;
    while x != start {
        let (p, e) = via[x.index()].expect("reached vertices have predecessors");
        parent[x.index()] = Some((p, e));
        on_path[x.index()] = true;
        x = p;
    }

    // minimum spanning tree of the induced subgraph
    let mut candidates: Vec<EdgeId> =
        g.edge_ids().filter(|&e| inside[g.edge(e).u.index()] && inside[g.edge(e).v.index()]).collect();
    candidates.sort_by_key(|&e| (g.units(e), e));
    let mut dsu = DisjointSets::new(n);
    let mut mst_adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for e in candidates {
        let edge = g.edge(e);
        if dsu.union(edge.u.index(), edge.v.index()) {
            mst_adj[edge.u.index()].push(edge.v);
            mst_adj[edge.v.index()].push(edge.u);
        }
    }

    let mut seen = on_path.clone();
    let mut components = Vec::new();
    for &v in &order {
        if seen[v.index()] {
            continue;
        }
        let mut comp = vec![v];
        seen[v.index()] = true;
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for &y in &mst_adj[x.index()] {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    comp.push(y);
                }
            }
        }
        // `v` is the leftmost vertex of its component since `order` is sorted
        let on_p1 = |u: VertexId| on_path[u.index()];
        let hook = cheapest_earlier(g, layout, v, Some(&on_p1)).ok_or(Error::NoEarlierNeighbor(v))?;
        parent[v.index()] = Some(hook);
        components.push(comp);
    }
    Ok(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::subgraph_weight;
    use crate::graph::Rational;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn scan_on_triangle() {
        // ab = 1, ac = 3, bc = 1
        let g = WeightedGraph::from_int_edges(3, &[(0, 1, 1), (0, 2, 3), (1, 2, 1)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1], &[0, 1, 2]], 2);
        let t = lightest_monotone_tree(&g, &d).unwrap();
        assert_eq!(t.tree.edges, vec![EdgeId(0), EdgeId(2)]);
        assert_eq!(subgraph_weight(&g, &t.tree.edges).unwrap(), Rational::from_integer(2));
        let layout = interval_layout(&d).unwrap();
        assert!(is_monotone(&g, &t.tree, &layout).unwrap().monotone);
    }

    #[test]
    fn tree_input_returns_itself() {
        let g = WeightedGraph::from_int_edges(3, &[(0, 1, 4), (1, 2, 7)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0, 1], &[1], &[1, 2]], 1);
        let scan = lightest_monotone_tree(&g, &d).unwrap();
        assert_eq!(scan.tree.edges, vec![EdgeId(0), EdgeId(1)]);
        let rec = recursive_monotone_tree(&g, &d).unwrap();
        assert_eq!(rec.tree.edges, vec![EdgeId(0), EdgeId(1)]);
    }

    #[test]
    fn two_vertices() {
        let g = WeightedGraph::from_int_edges(2, &[(0, 1, 5)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0, 1]], 1);
        assert_eq!(recursive_monotone_tree(&g, &d).unwrap().tree.edges, vec![EdgeId(0)]);
    }

    #[test]
    fn star_and_reversed_path() {
        let g = WeightedGraph::from_int_edges(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1], &[0, 1, 2]], 2);
        let layout = interval_layout(&d).unwrap();
        let star = TreeEdges { edges: vec![EdgeId(0), EdgeId(1)], root: v(0) };
        assert!(is_monotone(&g, &star, &layout).unwrap().monotone);

        // path graph 0-1-2 with intervals ordered 2 < 1 < 0
        let p = WeightedGraph::from_int_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let dp = CaterpillarDecomposition::from_lists(&[&[2], &[1, 2], &[1], &[0, 1]], 1);
        let lp = interval_layout(&dp).unwrap();
        let t = TreeEdges { edges: vec![EdgeId(0), EdgeId(1)], root: v(0) };
        // rooted at the leftmost vertex (2) every link is fine
        assert!(is_monotone(&p, &t, &lp).unwrap().monotone);
        // a path whose middle vertex starts first cannot be monotone
        let dm = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1], &[1], &[1, 2]], 1);
        let lm = interval_layout(&dm).unwrap();
        let bad = WeightedGraph::from_int_edges(3, &[(0, 2, 1), (1, 2, 1)]).unwrap();
        let tb = TreeEdges { edges: vec![EdgeId(0), EdgeId(1)], root: v(0) };
        let check = is_monotone(&bad, &tb, &lm).unwrap();
        assert!(!check.monotone);
        assert_eq!(check.violation, Some((v(1), v(2))));
    }

    #[test]
    fn tree_paths() {
        let g = WeightedGraph::from_int_edges(4, &[(0, 1, 1), (0, 2, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1], &[0, 1, 2], &[1, 2], &[1, 2, 3]], 2);
        let t = lightest_monotone_tree(&g, &d).unwrap();
        let depth = t.depths();
        assert_eq!(depth[0], 0);
        let p = t.path_between(v(2), v(3), &depth);
        assert!(!p.is_empty());
        assert!(p.iter().all(|e| t.tree.contains(*e)));
    }
}
