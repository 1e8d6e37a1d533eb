//! Weighted undirected graphs: shortest paths, distance tables, minimum
//! spanning trees.
//!
//! Weights are exact rationals. Every graph keeps a common denominator
//! (`scale`) so that the hot loops (Dijkstra, greedy distance queries) run on
//! plain `i64` numerators; results are converted back to [`Rational`] at the
//! API boundary.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Dense vertex identifier, `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

/// Dense edge identifier, `0..m`, in insertion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

impl From<usize> for EdgeId {
    fn from(i: usize) -> Self {
        EdgeId(i as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    /// Smaller endpoint.
    pub u: VertexId,
    /// Larger endpoint.
    pub v: VertexId,
    pub weight: Rational,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    index: HashMap<(VertexId, VertexId), EdgeId>,
    scale: i64,
    units: Vec<i64>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for WeightedGraph {}

fn ordered(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, weight)` triples; edge ids follow the
    /// order of `edges`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId, Rational)>) -> Result<Self> {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        let mut adj = vec![Vec::new(); n];
        for (a, b, w) in edges {
            if a.index() >= n || b.index() >= n {
                return Err(Error::UnknownVertex(if a.index() >= n { a } else { b }));
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if w.is_negative() {
                return Err(Error::NegativeWeight { u: a, v: b });
            }
            let (u, v) = ordered(a, b);
            let id = EdgeId::from(list.len());
            if index.insert((u, v), id).is_some() {
                return Err(Error::ParallelEdge { u, v });
            }
            adj[u.index()].push((v, id));
            adj[v.index()].push((u, id));
            list.push(Edge { u, v, weight: w });
        }
        let mut scale: i64 = 1;
        for e in &list {
            scale = scale.checked_mul(*e.weight.denom() / scale.gcd(e.weight.denom())).ok_or(Error::WeightOverflow)?;
        }
        let units = list
            .iter()
            .map(|e| e.weight.numer().checked_mul(scale / e.weight.denom()).ok_or(Error::WeightOverflow))
            .collect::<Result<Vec<_>>>()?;
        for a in &mut adj {
            a.sort();
        }
        Ok(Self { n, edges: list, adj, index, scale, units })
    }

    /// Convenience constructor for integer weights.
    pub fn from_int_edges(n: usize, edges: &[(u32, u32, i64)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(a, b, w)| (VertexId(a), VertexId(b), Rational::from_integer(w))))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId::from)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId::from)
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn try_edge(&self, e: EdgeId) -> Result<&Edge> {
        self.edges.get(e.index()).ok_or(Error::UnknownEdge(e))
    }

    pub fn weight(&self, e: EdgeId) -> Rational {
        self.edges[e.index()].weight
    }

    /// Neighbours of `x` with the connecting edge, sorted by neighbour id.
    pub fn neighbors(&self, x: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[x.index()]
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.adj[x.index()].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn find_edge(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.index.get(&ordered(a, b)).copied()
    }

    /// Common denominator of all edge weights.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Weight of `e` as a numerator over [`Self::scale`].
    pub(crate) fn units(&self, e: EdgeId) -> i64 {
        self.units[e.index()]
    }

    pub(crate) fn to_rational(&self, units: i64) -> Rational {
        Rational::new(units, self.scale)
    }

    /// Adjacency restricted to `edges` (or all edges), in scaled units.
    pub(crate) fn unit_adjacency(&self, edges: Option<&BTreeSet<EdgeId>>) -> Vec<Vec<(u32, i64)>> {
        let mut adj = vec![Vec::new(); self.n];
        let mut push = |id: EdgeId| {
            let e = &self.edges[id.index()];
            let w = self.units[id.index()];
            adj[e.u.index()].push((e.v.0, w));
            adj[e.v.index()].push((e.u.0, w));
        };
        match edges {
            Some(set) => set.iter().for_each(|&id| push(id)),
            None => self.edge_ids().for_each(&mut push),
        }
        adj
    }

    pub fn total_weight(&self) -> Rational {
        self.to_rational(self.units.iter().sum())
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adj[x] {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    count += 1;
                    stack.push(y.index());
                }
            }
        }
        count == self.n
    }
}

/// Sum of the weights of `edges`.
pub fn subgraph_weight<'a>(g: &WeightedGraph, edges: impl IntoIterator<Item = &'a EdgeId>) -> Result<Rational> {
    let mut total = 0i64;
    for &e in edges {
        g.try_edge(e)?;
        total += g.units(e);
    }
    Ok(g.to_rational(total))
}

pub(crate) const UNREACHED: i64 = i64::MAX;

/// Single-source Dijkstra on a unit adjacency. Returns distances and the
/// settle order; ties in the heap break by vertex id.
pub(crate) fn dijkstra_units(adj: &[Vec<(u32, i64)>], source: usize) -> (Vec<i64>, Vec<u32>) {
    let n = adj.len();
    let mut dist = vec![UNREACHED; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();
    dist[source] = 0;
    heap.push(Reverse((0i64, source as u32)));
    while let Some(Reverse((d, x))) = heap.pop() {
        let xi = x as usize;
        if done[xi] {
            continue;
        }
        done[xi] = true;
        order.push(x);
        for &(y, w) in &adj[xi] {
            let nd = d + w;
            if nd < dist[y as usize] {
                dist[y as usize] = nd;
                heap.push(Reverse((nd, y)));
            }
        }
    }
    (dist, order)
}

/// Shortest-path information towards a fixed target, used to extract
/// deterministic shortest paths from any source.
pub struct PathsTo {
    target: VertexId,
    dist: Vec<i64>,
    rank: Vec<u32>,
}

impl PathsTo {
    pub fn new(g: &WeightedGraph, target: VertexId) -> Self {
        let adj = g.unit_adjacency(None);
        let (dist, order) = dijkstra_units(&adj, target.index());
        let mut rank = vec![u32::MAX; g.n];
        for (r, &x) in order.iter().enumerate() {
            rank[x as usize] = r as u32;
        }
        Self { target, dist, rank }
    }

    pub fn distance_units(&self, from: VertexId) -> Option<i64> {
        let d = self.dist[from.index()];
        (d != UNREACHED).then_some(d)
    }

    /// Lexicographically smallest edge-id sequence among shortest paths
    /// from `from` to the target. Zero-weight ties are resolved along the
    /// settle order of the search so the walk always terminates.
    pub fn path_from(&self, g: &WeightedGraph, from: VertexId) -> Option<Vec<EdgeId>> {
        self.distance_units(from)?;
        let mut path = Vec::new();
        let mut x = from;
        while x != self.target {
            let dx = self.dist[x.index()];
            let rx = self.rank[x.index()];
            let step = g
                .neighbors(x)
                .iter()
                .filter(|&&(y, e)| {
                    let dy = self.dist[y.index()];
                    dy != UNREACHED && dy + g.units(e) == dx && self.rank[y.index()] < rx
                })
                .min_by_key(|&&(_, e)| e)
                .copied()?;
            path.push(step.1);
            x = step.0;
        }
        Some(path)
    }
}

/// Result of a point-to-point query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShortestPath {
    Reachable { distance: Rational, path: Vec<EdgeId> },
    Unreachable,
}

pub fn shortest_path(g: &WeightedGraph, u: VertexId, v: VertexId) -> Result<ShortestPath> {
    for x in [u, v] {
        if x.index() >= g.vertex_count() {
            return Err(Error::UnknownVertex(x));
        }
    }
    let to = PathsTo::new(g, v);
    Ok(match (to.distance_units(u), to.path_from(g, u)) {
        (Some(d), Some(path)) => ShortestPath::Reachable { distance: g.to_rational(d), path },
        _ => ShortestPath::Unreachable,
    })
}

/// All-pairs distance table. Unreachable pairs are `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    scale: i64,
    units: Vec<i64>,
}

impl DistanceTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> Option<Rational> {
        let d = self.units[u.index() * self.n + v.index()];
        (d != UNREACHED).then(|| Rational::new(d, self.scale))
    }

    pub(crate) fn units(&self, u: usize, v: usize) -> i64 {
        self.units[u * self.n + v]
    }
}

pub fn all_pairs_distances(g: &WeightedGraph) -> DistanceTable {
    distances_over(g, None)
}

/// Distance table of the spanning subgraph `(V(g), edges)`.
pub fn subgraph_distances(g: &WeightedGraph, edges: &BTreeSet<EdgeId>) -> DistanceTable {
    distances_over(g, Some(edges))
}

fn distances_over(g: &WeightedGraph, edges: Option<&BTreeSet<EdgeId>>) -> DistanceTable {
    let adj = g.unit_adjacency(edges);
    let n = g.vertex_count();
    let rows: Vec<Vec<i64>> = (0..n).into_par_iter().map(|s| dijkstra_units(&adj, s).0).collect();
    DistanceTable { n, scale: g.scale(), units: rows.concat() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdges {
    /// Sorted edge ids.
    pub edges: Vec<EdgeId>,
    pub root: VertexId,
}

impl TreeEdges {
    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }

    /// Checks the spanning-tree invariants against `g`.
    pub fn check_spanning(&self, g: &WeightedGraph) -> Result<()> {
        let n = g.vertex_count();
        if self.edges.len() + 1 != n.max(1) {
            return Err(Error::NotSpanningTree(format!("{} edges for {} vertices", self.edges.len(), n)));
        }
        let mut dsu = DisjointSets::new(n);
        for &e in &self.edges {
            let edge = g.try_edge(e)?;
            if !dsu.union(edge.u.index(), edge.v.index()) {
                return Err(Error::NotSpanningTree(format!("edge {e} closes a cycle")));
            }
        }
        Ok(())
    }
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Kruskal over edges sorted by `(weight, id)`; rooted at vertex 0.
pub fn minimum_spanning_tree(g: &WeightedGraph) -> Result<TreeEdges> {
    let mut order: Vec<EdgeId> = g.edge_ids().collect();
    order.sort_by_key(|&e| (g.units(e), e));
    let mut dsu = DisjointSets::new(g.vertex_count());
    let mut edges = Vec::with_capacity(g.vertex_count().saturating_sub(1));
    for e in order {
        let edge = g.edge(e);
        if dsu.union(edge.u.index(), edge.v.index()) {
            edges.push(e);
        }
    }
    if edges.len() + 1 < g.vertex_count() {
        return Err(Error::Disconnected);
    }
    edges.sort();
    Ok(TreeEdges { edges, root: VertexId(0) })
}

pub fn mst_weight(g: &WeightedGraph) -> Result<Rational> {
    let t = minimum_spanning_tree(g)?;
    subgraph_weight(g, &t.edges)
}

/// Parses `"3"`, `"7/2"` or a plain decimal such as `"0.125"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: i64 = a.trim().parse().ok()?;
        let den: i64 = b.trim().parse().ok()?;
        return (den != 0).then(|| Rational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let int_part: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let frac_part: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let num = int_part.checked_mul(den)?.checked_add(frac_part)?;
    Some(Rational::new(if neg { -num } else { num }, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
