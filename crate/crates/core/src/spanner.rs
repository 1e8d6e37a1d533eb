//! Greedy spanner with forced tree edges, certification, and the full
//! reduce / construct / lift pipeline.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::charging::{build_scheme, verify_acyclic, verify_scheme, ChargingScheme};
use crate::decomposition::{interval_layout, nicify, validate, CaterpillarDecomposition, IntervalLayout};
use crate::error::{Error, Result};
use crate::graph::{
    all_pairs_distances, mst_weight, subgraph_distances, subgraph_weight, EdgeId, Rational, TreeEdges, VertexId,
    WeightedGraph, UNREACHED,
};
use crate::monotone::lightest_monotone_tree_with;
use crate::reductions::{complete, degree_reduce, lift_spanner, ReductionTrace};
use crate::toolkit::report::{opt_rational_str, rational_str};

fn check_epsilon(epsilon: Rational) -> Result<()> {
    if epsilon.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveEpsilon)
    }
}

/// Outcome of one greedy test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyDecision {
    pub edge: EdgeId,
    pub accepted: bool,
    /// Distance found in the partial spanner, or `None` when it exceeds
    /// `(1+ε)·w(e)` (the search stops there).
    pub distance: Option<Rational>,
}

/// Is `b·d(u,v) > (a+b)·w` in the current graph? Returns the distance when
/// it is small enough to reject.
fn within(adj: &[Vec<(u32, i64)>], u: usize, v: usize, w: i64, a: i64, b: i64) -> Option<i64> {
    let limit = (a as i128 + b as i128) * w as i128;
    let too_far = |d: i64| (b as i128) * (d as i128) > limit;
    let mut dist = vec![UNREACHED; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[u] = 0;
    heap.push(Reverse((0i64, u as u32)));
    while let Some(Reverse((d, x))) = heap.pop() {
        let xi = x as usize;
        if d > dist[xi] {
            continue;
        }
        if too_far(d) {
            return None;
        }
        if xi == v {
            return Some(d);
        }
        for &(y, ew) in &adj[xi] {
            let nd = d + ew;
            if nd < dist[y as usize] && !too_far(nd) {
                dist[y as usize] = nd;
                heap.push(Reverse((nd, y)));
            }
        }
    }
    None
}

/// Greedy spanner seeded with `t`, with every decision recorded.
pub fn greedy_spanner_traced(
    g: &WeightedGraph,
    t: &TreeEdges,
    epsilon: Rational,
) -> Result<(BTreeSet<EdgeId>, Vec<GreedyDecision>)> {
    check_epsilon(epsilon)?;
    t.check_spanning(g)?;
    let (a, b) = (*epsilon.numer(), *epsilon.denom());
    let mut spanner: BTreeSet<EdgeId> = t.edge_set();
    let mut adj: Vec<Vec<(u32, i64)>> = vec![Vec::new(); g.vertex_count()];
    for &e in &spanner {
        let edge = g.edge(e);
        adj[edge.u.index()].push((edge.v.0, g.units(e)));
        adj[edge.v.index()].push((edge.u.0, g.units(e)));
    }
    let mut rest: Vec<EdgeId> = g.edge_ids().filter(|e| !spanner.contains(e)).collect();
    rest.sort_by_key(|&e| (g.units(e), e));
    let mut decisions = Vec::with_capacity(rest.len());
    for e in rest {
        let edge = g.edge(e);
        let w = g.units(e);
        let found = within(&adj, edge.u.index(), edge.v.index(), w, a, b);
        let accepted = found.is_none();
        if accepted {
            spanner.insert(e);
            adj[edge.u.index()].push((edge.v.0, w));
            adj[edge.v.index()].push((edge.u.0, w));
        }
        decisions.push(GreedyDecision { edge: e, accepted, distance: found.map(|d| g.to_rational(d)) });
    }
    Ok((spanner, decisions))
}

/// Starts from `t` and scans the other edges by `(weight, id)`, adding `e`
/// when `(1+ε)·w(e)` is below the current spanner distance of its ends.
pub fn greedy_spanner(g: &WeightedGraph, t: &TreeEdges, epsilon: Rational) -> Result<BTreeSet<EdgeId>> {
    greedy_spanner_traced(g, t, epsilon).map(|(s, _)| s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StretchReport {
    /// `None` when some pair is reachable in the graph but not in the
    /// subgraph, or has distance zero only in the graph.
    #[serde(with = "opt_rational_str")]
    pub max: Option<Rational>,
    pub witness: Option<(VertexId, VertexId)>,
}

impl StretchReport {
    pub fn within(&self, epsilon: Rational) -> bool {
        self.max.is_some_and(|m| m <= Rational::from_integer(1) + epsilon)
    }
}

/// Ratio `d'/d` as `(numerator, denominator)`, `None` for infinity.
fn pair_ratio(d: i64, dp: i64) -> Option<(i64, i64)> {
    match (d, dp) {
        (_, UNREACHED) => None,
        (0, 0) => Some((1, 1)),
        (0, _) => None,
        _ => Some((dp, d)),
    }
}

/// Largest ratio `d_H(u,v)/d_G(u,v)` over connected pairs, by exact APSP.
pub fn max_stretch(g: &WeightedGraph, edges: &BTreeSet<EdgeId>) -> StretchReport {
    let full = all_pairs_distances(g);
    let sub = subgraph_distances(g, edges);
    let n = g.vertex_count();
    let mut best: Option<(i64, i64)> = Some((1, 1));
    let mut witness = None;
    'scan: for u in 0..n {
        for v in u + 1..n {
            let d = full.units(u, v);
            if d == UNREACHED {
                continue;
            }
            let pair = (VertexId::from(u), VertexId::from(v));
            match pair_ratio(d, sub.units(u, v)) {
                None => {
                    best = None;
                    witness = Some(pair);
                    break 'scan;
                }
                Some((p, q)) => {
                    let (bp, bq) = best.unwrap();
                    let cmp = (p as i128 * bq as i128).cmp(&(bp as i128 * q as i128));
                    if cmp == Ordering::Greater || witness.is_none() {
                        if cmp == Ordering::Greater {
                            best = Some((p, q));
                        }
                        witness = Some(pair);
                    }
                }
            }
        }
    }
    StretchReport { max: best.map(|(p, q)| Rational::new(p, q)), witness }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpannerCertificate {
    pub spanner: Vec<EdgeId>,
    #[serde(with = "rational_str")]
    pub epsilon: Rational,
    pub stretch: StretchReport,
    pub stretch_ok: bool,
    #[serde(with = "rational_str")]
    pub w_spanner: Rational,
    #[serde(with = "rational_str")]
    pub w_tree: Rational,
    #[serde(with = "rational_str")]
    pub w_mst: Rational,
    #[serde(with = "rational_str")]
    pub scheme_value: Rational,
    pub scheme_valid: bool,
    pub scheme_acyclic: bool,
    /// `ε·(w(G') − w(T)) ≤ v·w(T)`, equivalently `w(G') ≤ (1+v/ε)·w(T)`.
    pub bound_ok: bool,
    /// `w(G') / ((1+v/ε)·w(T))`.
    pub bound_ratio: f64,
    pub certified: bool,
    pub reason: Option<String>,
}

fn wide(r: Rational) -> Ratio<i128> {
    Ratio::new(*r.numer() as i128, *r.denom() as i128)
}

fn ratio_f64(num: Ratio<i128>, den: Ratio<i128>) -> f64 {
    if den.is_zero() {
        return if num.is_zero() { 1.0 } else { f64::INFINITY };
    }
    let r = num / den;
    *r.numer() as f64 / *r.denom() as f64
}

pub fn certify(
    g: &WeightedGraph,
    t: &TreeEdges,
    spanner: &BTreeSet<EdgeId>,
    epsilon: Rational,
    scheme: &ChargingScheme,
) -> Result<SpannerCertificate> {
    check_epsilon(epsilon)?;
    t.check_spanning(g)?;
    if let Some(e) = t.edges.iter().find(|e| !spanner.contains(e)) {
        return Err(Error::Precondition(format!("spanner is missing tree edge {e}")));
    }
    let stretch = max_stretch(g, spanner);
    let stretch_ok = stretch.within(epsilon);
    let w_spanner = subgraph_weight(g, spanner)?;
    let w_tree = subgraph_weight(g, &t.edges)?;
    let w_mst = mst_weight(g)?;
    let report = verify_scheme(g, scheme);
    let acyclic = verify_acyclic(scheme);
    let same_tree = scheme.tree.edges == t.edges;
    let v = report.value;

    let (eps, wg, wt, vw) = (wide(epsilon), wide(w_spanner), wide(w_tree), wide(v));
    let bound_ok = eps * (wg - wt) <= vw * wt;
    let bound = (Ratio::from_integer(1) + vw / eps) * wt;
    let bound_ratio = ratio_f64(wg, bound);

    let reason = if !report.valid {
        Some(format!("scheme invalid: {}", report.violations[0]))
    } else if !acyclic.acyclic {
        Some("scheme is not acyclic".to_string())
    } else if !same_tree {
        Some("scheme is over a different tree".to_string())
    } else if !stretch_ok {
        Some("stretch exceeds 1+epsilon".to_string())
    } else if !bound_ok {
        Some("weight bound fails".to_string())
    } else {
        None
    };
    Ok(SpannerCertificate {
        spanner: spanner.iter().copied().collect(),
        epsilon,
        stretch,
        stretch_ok,
        w_spanner,
        w_tree,
        w_mst,
        scheme_value: v,
        scheme_valid: report.valid,
        scheme_acyclic: acyclic.acyclic,
        bound_ok,
        bound_ratio,
        certified: reason.is_none(),
        reason,
    })
}

/// Everything the pipeline produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    /// Certificate on the reduced, completed working graph.
    pub certificate: SpannerCertificate,
    pub working_vertices: usize,
    pub working_edges: usize,
    /// Spanner mapped back to the input graph.
    pub lifted: Vec<EdgeId>,
    #[serde(with = "rational_str")]
    pub w_lifted: Rational,
    #[serde(with = "rational_str")]
    pub w_mst: Rational,
    pub lifted_stretch: StretchReport,
    pub lifted_stretch_ok: bool,
    /// `w(lifted) / MST(G)`.
    pub lightness: f64,
}

/// Intermediate objects of a pipeline run, for inspection and testing.
pub struct PipelineParts {
    pub reduced: WeightedGraph,
    pub reduced_decomposition: CaterpillarDecomposition,
    pub working: WeightedGraph,
    pub degree_trace: ReductionTrace,
    pub completion_trace: ReductionTrace,
    pub tree: crate::monotone::MonotoneTree,
    pub scheme: ChargingScheme,
    pub spanner: BTreeSet<EdgeId>,
    pub report: PipelineReport,
}

pub fn pipeline(g: &WeightedGraph, d: &CaterpillarDecomposition, epsilon: Rational) -> Result<PipelineReport> {
    pipeline_parts(g, d, epsilon).map(|p| p.report)
}

/// The pipeline up to the charging scheme: the reduced instance, its
/// completion with a lightest monotone tree, and the scheme on it.
pub struct Prepared {
    pub reduced: WeightedGraph,
    pub reduced_decomposition: CaterpillarDecomposition,
    pub layout: IntervalLayout,
    pub working: WeightedGraph,
    pub degree_trace: ReductionTrace,
    pub completion_trace: ReductionTrace,
    pub tree: crate::monotone::MonotoneTree,
    pub scheme: ChargingScheme,
}

pub fn prepare(g: &WeightedGraph, d: &CaterpillarDecomposition) -> Result<Prepared> {
    prepare_with(g, d, true)
}

/// As [`prepare`], optionally skipping the degree reduction. Without it the
/// scheme is still valid, but its value is no longer bounded in terms of `k`
/// alone.
pub fn prepare_with(g: &WeightedGraph, d: &CaterpillarDecomposition, reduce_degree: bool) -> Result<Prepared> {
    validate(g, d).into_result().map_err(Error::at("validate"))?;
    if !g.is_connected() {
        return Err(Error::at("validate")(Error::Disconnected));
    }
    let nice = nicify(d).map_err(Error::at("nicify"))?;
    let (reduced, reduced_d, degree_trace) = if reduce_degree {
        degree_reduce(g, &nice).map_err(Error::at("degree_reduce"))?
    } else {
        (g.clone(), nice, ReductionTrace::identity(g))
    };
    let layout = interval_layout(&reduced_d).map_err(Error::at("layout"))?;
    let (working, completion_trace) = complete(&reduced, &layout).map_err(Error::at("complete"))?;
    let tree = lightest_monotone_tree_with(&working, &layout).map_err(Error::at("monotone_tree"))?;
    let scheme = build_scheme(&working, &tree, &reduced_d, &layout).map_err(Error::at("scheme"))?;
    Ok(Prepared {
        reduced,
        reduced_decomposition: reduced_d,
        layout,
        working,
        degree_trace,
        completion_trace,
        tree,
        scheme,
    })
}

pub fn pipeline_parts(g: &WeightedGraph, d: &CaterpillarDecomposition, epsilon: Rational) -> Result<PipelineParts> {
    check_epsilon(epsilon)?;
    let Prepared {
        reduced,
        reduced_decomposition: reduced_d,
        working,
        degree_trace,
        completion_trace,
        tree,
        scheme,
        ..
    } = prepare(g, d)?;
    let spanner = greedy_spanner(&working, &tree.tree, epsilon).map_err(Error::at("greedy"))?;
    let certificate = certify(&working, &tree.tree, &spanner, epsilon, &scheme).map_err(Error::at("certify"))?;
    let lifted = lift_spanner(&spanner, &completion_trace)
        .and_then(|s| lift_spanner(&s, &degree_trace))
        .map_err(Error::at("lift"))?;
    let lifted_stretch = max_stretch(g, &lifted);
    let w_lifted = subgraph_weight(g, &lifted)?;
    let w_mst = mst_weight(g)?;
    let lightness = ratio_f64(wide(w_lifted), wide(w_mst));
    let report = PipelineReport {
        certificate,
        working_vertices: working.vertex_count(),
        working_edges: working.edge_count(),
        lifted: lifted.iter().copied().collect(),
        w_lifted,
        w_mst,
        lifted_stretch_ok: lifted_stretch.within(epsilon),
        lifted_stretch,
        lightness,
    };
    Ok(PipelineParts {
        reduced,
        reduced_decomposition: reduced_d,
        working,
        degree_trace,
        completion_trace,
        tree,
        scheme,
        spanner,
        report,
    })
}
