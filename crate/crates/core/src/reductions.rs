//! Preprocessing transforms and the inverse map for spanners.
//!
//! `degree_reduce` splits long-lived vertices into zero-weight-joined copies
//! so every vertex lives in a bounded number of bags; `complete` adds every
//! edge the interval layout permits, weighted by the current shortest-path
//! distance. Both record a [`ReductionTrace`] so that `lift_spanner` can map
//! a spanner of the transformed graph back to the input graph.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::decomposition::{validate, Bag, CaterpillarDecomposition, Flap, IntervalLayout};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, PathsTo, Rational, VertexId, WeightedGraph};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    /// Zero-weight edges joining a vertex to its next copy.
    pub contracted: BTreeSet<EdgeId>,
    /// Added edge → realizing shortest path in the input graph.
    pub completion: BTreeMap<EdgeId, Vec<EdgeId>>,
    /// Output vertex → input vertex it copies (identity when no copying).
    pub copy_of: Vec<VertexId>,
    /// Output edge → input edge it came from; `None` for added edges.
    pub edge_origin: Vec<Option<EdgeId>>,
}

impl ReductionTrace {
    /// Trace of a transform that changed nothing.
    pub fn identity(g: &WeightedGraph) -> Self {
        Self { copy_of: g.vertices().collect(), edge_origin: g.edge_ids().map(Some).collect(), ..Self::default() }
    }

    pub fn output_edge_count(&self) -> usize {
        self.edge_origin.len()
    }
}

/// Bounds how many bags any vertex occupies by replacing every vertex of
/// the bag closing each group of `k` bags with a fresh copy.
///
/// Each replacement takes two bags (`B + v'`, then `B + v' - v`), so the
/// output stays nice and its width is at most `k + 1`. Replacement happens
/// only at group boundaries that are followed by another input bag.
pub fn degree_reduce(
    g: &WeightedGraph,
    d: &CaterpillarDecomposition,
) -> Result<(WeightedGraph, CaterpillarDecomposition, ReductionTrace)> {
    if !d.is_nice() {
        let i = d.bags.windows(2).position(|w| w[0].symmetric_difference(&w[1]).count() != 1).unwrap_or(0);
        return Err(Error::NotNice(i, i + 1));
    }
    validate(g, d).into_result()?;

    let n = g.vertex_count();
    let group = d.width.max(1);
    let m = d.bags.len();

    // Spine edges are realized at the first bag holding both endpoints.
    let mut first_common: Vec<Vec<EdgeId>> = vec![Vec::new(); m];
    let mut flap_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); d.flaps.len()];
    let mut q_owner: Vec<Option<usize>> = vec![None; n];
    for (f, flap) in d.flaps.iter().enumerate() {
        for &q in &flap.q {
            q_owner[q.index()] = Some(f);
        }
    }
    let mut first_bag = vec![usize::MAX; n];
    for (i, bag) in d.bags.iter().enumerate().rev() {
        for v in bag {
            first_bag[v.index()] = i;
        }
    }
    for id in g.edge_ids() {
        let e = g.edge(id);
        match q_owner[e.u.index()].or(q_owner[e.v.index()]) {
            Some(f) => flap_edges[f].push(id),
            None => {
                let start = first_bag[e.u.index()].max(first_bag[e.v.index()]);
                first_common[start].push(id);
            }
        }
    }
    let mut flaps_at: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (f, flap) in d.flaps.iter().enumerate() {
        flaps_at[flap.anchor].push(f);
    }

    let mut cur: Vec<VertexId> = g.vertices().collect();
    let mut copy_of: Vec<VertexId> = g.vertices().collect();
    let mut new_edges: Vec<(VertexId, VertexId, Rational)> = Vec::with_capacity(g.edge_count());
    let mut edge_origin = Vec::with_capacity(g.edge_count());
    let mut contracted = BTreeSet::new();
    let mut bags: Vec<Bag> = Vec::with_capacity(m * 2);
    let mut flaps: Vec<Option<Flap>> = vec![None; d.flaps.len()];
    let mut previous_order: Vec<VertexId> = Vec::new();

    for (i, bag) in d.bags.iter().enumerate() {
        bags.push(bag.iter().map(|v| cur[v.index()]).collect());
        for &id in &first_common[i] {
            let e = g.edge(id);
            new_edges.push((cur[e.u.index()], cur[e.v.index()], e.weight));
            edge_origin.push(Some(id));
        }
        for &f in &flaps_at[i] {
            let flap = &d.flaps[f];
            let map = |v: VertexId| if q_owner[v.index()].is_some() { v } else { cur[v.index()] };
            flaps[f] =
                Some(Flap { p: flap.p.iter().map(|&v| map(v)).collect(), q: flap.q.clone(), anchor: bags.len() - 1 });
            for &id in &flap_edges[f] {
                let e = g.edge(id);
                new_edges.push((map(e.u), map(e.v), e.weight));
                edge_origin.push(Some(id));
            }
        }

        if (i + 1) % group == 0 && i + 1 < m {
            // survivors keep their previous relative order
            let mut order: Vec<VertexId> = previous_order.iter().copied().filter(|v| bag.contains(v)).collect();
            let seen: BTreeSet<VertexId> = order.iter().copied().collect();
            order.extend(bag.iter().copied().filter(|v| !seen.contains(v)));
            let mut current = bags.last().cloned().unwrap_or_default();
            for &v in &order {
                let copy = VertexId::from(copy_of.len());
                copy_of.push(v);
                contracted.insert(EdgeId::from(new_edges.len()));
                new_edges.push((cur[v.index()], copy, Rational::from_integer(0)));
                edge_origin.push(None);
                current.insert(copy);
                bags.push(current.clone());
                current.remove(&cur[v.index()]);
                bags.push(current.clone());
                cur[v.index()] = copy;
            }
            previous_order = order;
        }
    }

    let g2 = WeightedGraph::new(copy_of.len(), new_edges)?;
    let d2 = CaterpillarDecomposition {
        bags,
        flaps: flaps.into_iter().map(|f| f.expect("every flap anchor is visited")).collect(),
        width: if m > group { d.width + 1 } else { d.width },
    };
    let trace = ReductionTrace { contracted, completion: BTreeMap::new(), copy_of, edge_origin };
    Ok((g2, d2, trace))
}

/// Merges every copy back onto its original and drops the contracted
/// edges; parallel edges keep the lighter weight.
pub fn contract_copies(g: &WeightedGraph, trace: &ReductionTrace) -> Result<WeightedGraph> {
    let n = trace.copy_of.iter().map(|v| v.index() + 1).max().unwrap_or(0);
    let n = n.min(trace.copy_of.len());
    let mut best: BTreeMap<(VertexId, VertexId), (Rational, EdgeId)> = BTreeMap::new();
    for id in g.edge_ids() {
        if trace.contracted.contains(&id) {
            continue;
        }
        let e = g.edge(id);
        let (a, b) = (trace.copy_of[e.u.index()], trace.copy_of[e.v.index()]);
        if a == b {
            continue;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        let origin = trace.edge_origin[id.index()].unwrap_or(id);
        best.entry(key)
            .and_modify(|cur| {
                if e.weight < cur.0 {
                    *cur = (e.weight, origin)
                }
            })
            .or_insert((e.weight, origin));
    }
    let mut list: Vec<_> = best.into_iter().collect();
    list.sort_by_key(|(_, (_, origin))| *origin);
    WeightedGraph::new(n, list.into_iter().map(|((a, b), (w, _))| (a, b, w)))
}

/// Adds an edge for every pair the layout allows that is not yet adjacent,
/// weighted by its current shortest-path distance. Existing edges keep
/// their ids; new ones are appended in `(u, v)` order.
pub fn complete(g: &WeightedGraph, layout: &IntervalLayout) -> Result<(WeightedGraph, ReductionTrace)> {
    if layout.len() != g.vertex_count() {
        return Err(Error::Precondition(format!(
            "layout covers {} vertices, graph has {}",
            layout.len(),
            g.vertex_count()
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut pairs: BTreeSet<(VertexId, VertexId)> = layout.overlapping_spine_pairs().into_iter().collect();
    for f in 0..layout.flap_count() {
        let clique = layout.flap_clique(f);
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                pairs.insert(if a < b { (a, b) } else { (b, a) });
            }
        }
    }
    let missing: Vec<(VertexId, VertexId)> = pairs.into_iter().filter(|&(a, b)| g.find_edge(a, b).is_none()).collect();

    let mut by_target: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &(a, b) in &missing {
        by_target.entry(b).or_default().push(a);
    }
    let mut realized: BTreeMap<(VertexId, VertexId), (Rational, Vec<EdgeId>)> = BTreeMap::new();
    for (target, sources) in by_target {
        let to = PathsTo::new(g, target);
        for a in sources {
            let d = to.distance_units(a).ok_or(Error::Disconnected)?;
            let path = to.path_from(g, a).ok_or(Error::Disconnected)?;
            realized.insert((a, target), (Rational::new(d, g.scale()), path));
        }
    }

    let mut edges: Vec<(VertexId, VertexId, Rational)> = g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
    let mut completion = BTreeMap::new();
    let mut edge_origin: Vec<Option<EdgeId>> = g.edge_ids().map(Some).collect();
    for (&(a, b), (w, path)) in &realized {
        completion.insert(EdgeId::from(edges.len()), path.clone());
        edges.push((a, b, *w));
        edge_origin.push(None);
    }
    let out = WeightedGraph::new(g.vertex_count(), edges)?;
    let trace =
        ReductionTrace { contracted: BTreeSet::new(), completion, copy_of: g.vertices().collect(), edge_origin };
    Ok((out, trace))
}

/// Maps a spanner of a transformed graph back to the graph the trace
/// started from: completion edges expand to their paths, contracted edges
/// vanish, everything else follows its origin.
pub fn lift_spanner(spanner: &BTreeSet<EdgeId>, trace: &ReductionTrace) -> Result<BTreeSet<EdgeId>> {
    let mut out = BTreeSet::new();
    for &e in spanner {
        if e.index() >= trace.output_edge_count() {
            return Err(Error::TraceMismatch(format!("edge {e} is not in the transformed graph")));
        }
        if let Some(path) = trace.completion.get(&e) {
            out.extend(path.iter().copied());
        } else if trace.contracted.contains(&e) {
            continue;
        } else {
            match trace.edge_origin[e.index()] {
                Some(orig) => {
                    out.insert(orig);
                }
                None => return Err(Error::TraceMismatch(format!("edge {e} has no origin"))),
            }
        }
    }
    Ok(out)
}
