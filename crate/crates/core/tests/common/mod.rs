//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use catspan::decomposition::CaterpillarDecomposition;
use catspan::graph::{EdgeId, Rational, VertexId, WeightedGraph};

pub type Table = Vec<Vec<Option<Rational>>>;

/// Floyd–Warshall over exact rationals on the edges accepted by `keep`.
#[allow(clippy::needless_range_loop)]
pub fn floyd_where(g: &WeightedGraph, keep: impl Fn(EdgeId) -> bool) -> Table {
    let n = g.vertex_count();
    let mut d: Table = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(Rational::from_integer(0));
    }
    for (id, e) in g.edges().iter().enumerate() {
        if !keep(EdgeId(id as u32)) {
            continue;
        }
        let (u, v) = (e.u.index(), e.v.index());
        if d[u][v].is_none_or(|x| e.weight < x) {
            d[u][v] = Some(e.weight);
            d[v][u] = Some(e.weight);
        }
    }
    for m in 0..n {
        for i in 0..n {
            let Some(a) = d[i][m] else { continue };
            for j in 0..n {
                if let Some(b) = d[m][j] {
                    if d[i][j].is_none_or(|x| a + b < x) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

pub fn floyd(g: &WeightedGraph) -> Table {
    floyd_where(g, |_| true)
}

pub fn floyd_sub(g: &WeightedGraph, edges: &BTreeSet<EdgeId>) -> Table {
    floyd_where(g, |e| edges.contains(&e))
}

/// Whether every connected pair has `d_H ≤ (1+ε)·d_G`.
pub fn is_spanner(full: &Table, sub: &Table, epsilon: Rational) -> bool {
    let factor = Rational::from_integer(1) + epsilon;
    for (i, row) in full.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            if let Some(d) = d {
                match sub[i][j] {
                    Some(s) if s <= factor * d => {}
                    _ => return false,
                }
            }
        }
    }
    true
}

pub fn weight_of(g: &WeightedGraph, edges: &BTreeSet<EdgeId>) -> Rational {
    edges.iter().map(|&e| g.weight(e)).sum()
}

/// Greedy spanner recomputing exact distances from scratch for every edge.
pub fn naive_greedy(g: &WeightedGraph, tree: &[EdgeId], epsilon: Rational) -> BTreeSet<EdgeId> {
    let mut chosen: BTreeSet<EdgeId> = tree.iter().copied().collect();
    let mut rest: Vec<EdgeId> = (0..g.edge_count() as u32).map(EdgeId).filter(|e| !chosen.contains(e)).collect();
    rest.sort_by(|&a, &b| g.weight(a).cmp(&g.weight(b)).then(a.cmp(&b)));
    for e in rest {
        let edge = g.edge(e);
        let d = floyd_sub(g, &chosen)[edge.u.index()][edge.v.index()];
        let accept = match d {
            None => true,
            Some(d) => (Rational::from_integer(1) + epsilon) * edge.weight < d,
        };
        if accept {
            chosen.insert(e);
        }
    }
    chosen
}

/// Order key of every vertex: spine vertices by first bag then id, flap
/// vertices just after their anchor's spine entries, by flap then position.
pub fn entry_keys(d: &CaterpillarDecomposition, n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut key = vec![(usize::MAX, 0, 0, 0); n];
    for (i, bag) in d.bags.iter().enumerate() {
        for v in bag {
            if key[v.index()].0 == usize::MAX {
                key[v.index()] = (i, 0, v.index(), 0);
            }
        }
    }
    for (f, flap) in d.flaps.iter().enumerate() {
        let mut q = flap.q.clone();
        q.sort();
        for (r, v) in q.iter().enumerate() {
            key[v.index()] = (flap.anchor, 1, f, r);
        }
    }
    key
}

/// Minimum weight over every choice of an earlier neighbour as parent.
pub fn brute_force_monotone(g: &WeightedGraph, d: &CaterpillarDecomposition) -> Option<Rational> {
    let n = g.vertex_count();
    let key = entry_keys(d, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| key[v]);
    let choices: Vec<Vec<Rational>> = order[1..]
        .iter()
        .map(|&v| {
            g.neighbors(VertexId(v as u32))
                .iter()
                .filter(|(u, _)| key[u.index()] < key[v])
                .map(|&(_, e)| g.weight(e))
                .collect()
        })
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return None;
    }
    // enumerate the full product rather than taking per-vertex minima
    let mut best: Option<Rational> = None;
    let mut pick = vec![0usize; choices.len()];
    loop {
        let total: Rational = pick.iter().zip(&choices).map(|(&i, c)| c[i]).sum();
        if best.is_none_or(|b| total < b) {
            best = Some(total);
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return best;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Lightest `(1+ε)`-spanner containing `tree`, by branch and bound over
/// subsets of the remaining edges. `upper` must be the weight of some
/// spanner containing `tree`; the result is at most `upper`.
pub fn optimal_spanner_weight(g: &WeightedGraph, tree: &[EdgeId], epsilon: Rational, upper: Rational) -> Rational {
    struct Search<'a> {
        g: &'a WeightedGraph,
        full: Table,
        epsilon: Rational,
        rest: Vec<EdgeId>,
        best: Rational,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, chosen: &mut BTreeSet<EdgeId>) {
            let w = weight_of(self.g, chosen);
            if w >= self.best {
                return;
            }
            if is_spanner(&self.full, &floyd_sub(self.g, chosen), self.epsilon) {
                self.best = w;
                return;
            }
            if i == self.rest.len() {
                return;
            }
            let mut widest = chosen.clone();
            widest.extend(self.rest[i..].iter().copied());
            if !is_spanner(&self.full, &floyd_sub(self.g, &widest), self.epsilon) {
                return;
            }
            let e = self.rest[i];
            chosen.insert(e);
            self.go(i + 1, chosen);
            chosen.remove(&e);
            self.go(i + 1, chosen);
        }
    }
    let base: BTreeSet<EdgeId> = tree.iter().copied().collect();
    let mut rest: Vec<EdgeId> = (0..g.edge_count() as u32).map(EdgeId).filter(|e| !base.contains(e)).collect();
    rest.sort_by(|&a, &b| g.weight(a).cmp(&g.weight(b)).then(a.cmp(&b)));
    let mut search = Search { g, full: floyd(g), epsilon, rest, best: upper };
    let mut chosen = base;
    search.go(0, &mut chosen);
    search.best
}

pub type IntTable = Vec<Vec<Option<i64>>>;

/// All-pairs distances by one textbook Dijkstra per source, on the edges
/// accepted by `keep`. Weights must be integers.
pub fn int_apsp_where(g: &WeightedGraph, keep: impl Fn(EdgeId) -> bool) -> IntTable {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (id, e) in g.edges().iter().enumerate() {
        if keep(EdgeId(id as u32)) {
            assert!(e.weight.is_integer(), "integer weights expected");
            let w = e.weight.to_integer();
            adj[e.u.index()].push((e.v.index(), w));
            adj[e.v.index()].push((e.u.index(), w));
        }
    }
    (0..n)
        .map(|s| {
            let mut dist = vec![None; n];
            let mut heap = BinaryHeap::from([Reverse((0i64, s))]);
            while let Some(Reverse((d, x))) = heap.pop() {
                if dist[x].is_some() {
                    continue;
                }
                dist[x] = Some(d);
                for &(y, w) in &adj[x] {
                    if dist[y].is_none() {
                        heap.push(Reverse((d + w, y)));
                    }
                }
            }
            dist
        })
        .collect()
}

pub fn int_apsp(g: &WeightedGraph) -> IntTable {
    int_apsp_where(g, |_| true)
}

/// Whether every connected pair has `sub ≤ (1+ε)·full`, exactly.
pub fn int_is_spanner(full: &IntTable, sub: &IntTable, epsilon: Rational) -> bool {
    let (num, den) = (*epsilon.numer() as i128, *epsilon.denom() as i128);
    full.iter().zip(sub).all(|(fr, sr)| {
        fr.iter().zip(sr).all(|(f, s)| match (f, s) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(f), Some(s)) => *s as i128 * den <= (den + num) * *f as i128,
        })
    })
}
