//! Path and caterpillar decompositions: validation, nice form, interval
//! layout.
//!
//! A [`CaterpillarDecomposition`] is a sequence of spine bags (a path
//! decomposition of the k-path part) plus flaps hanging off individual
//! bags. Flap `Q` vertices never appear in a spine bag.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId, WeightedGraph};

pub type Bag = BTreeSet<VertexId>;

/// A `(P, Q)` clique partition attached at spine bag `anchor`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flap {
    pub p: Vec<VertexId>,
    pub q: Vec<VertexId>,
    pub anchor: usize,
}

impl Flap {
    pub fn clique(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.p.iter().chain(self.q.iter()).copied()
    }

    pub fn size(&self) -> usize {
        self.p.len() + self.q.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaterpillarDecomposition {
    pub bags: Vec<Bag>,
    pub flaps: Vec<Flap>,
    /// Declared width `k`.
    pub width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownVertex(VertexId),
    VertexUncovered(VertexId),
    EdgeUncovered(EdgeId),
    NonContiguous { vertex: VertexId, first: usize, gap: usize },
    BagTooLarge { bag: usize, size: usize },
    AnchorOutOfRange { flap: usize },
    FlapPNotInAnchor { flap: usize, vertex: VertexId },
    FlapQInSpine { flap: usize, vertex: VertexId },
    FlapVertexReused { vertex: VertexId },
    FlapShape { flap: usize, p: usize, q: usize },
    FlapNotSeparated { flap: usize, reached: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownVertex(v) => write!(f, "vertex {v} is not in the graph"),
            Violation::VertexUncovered(v) => write!(f, "vertex {v} is in no bag"),
            Violation::EdgeUncovered(e) => write!(f, "edge {e} is covered by no bag or flap"),
            Violation::NonContiguous { vertex, first, gap } => {
                write!(f, "bags containing {vertex} are not contiguous (first {first}, gap at {gap})")
            }
            Violation::BagTooLarge { bag, size } => write!(f, "bag {bag} has {size} vertices"),
            Violation::AnchorOutOfRange { flap } => write!(f, "flap {flap} anchors outside the spine"),
            Violation::FlapPNotInAnchor { flap, vertex } => {
                write!(f, "flap {flap}: P vertex {vertex} missing from anchor bag")
            }
            Violation::FlapQInSpine { flap, vertex } => write!(f, "flap {flap}: Q vertex {vertex} is in a spine bag"),
            Violation::FlapVertexReused { vertex } => write!(f, "vertex {vertex} is in several flaps"),
            Violation::FlapShape { flap, p, q } => write!(f, "flap {flap} has shape ({p},{q})"),
            Violation::FlapNotSeparated { flap, reached } => {
                write!(f, "flap {flap}: Q reaches {reached} without passing through P")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidDecomposition(v.to_string())),
        }
    }
}

impl CaterpillarDecomposition {
    pub fn path(bags: Vec<Bag>, width: usize) -> Self {
        Self { bags, flaps: Vec::new(), width }
    }

    /// Builds a decomposition from plain vertex lists.
    pub fn from_lists(bags: &[&[u32]], width: usize) -> Self {
        Self::path(bags.iter().map(|b| b.iter().map(|&v| VertexId(v)).collect()).collect(), width)
    }

    pub fn spine_vertices(&self) -> BTreeSet<VertexId> {
        self.bags.iter().flatten().copied().collect()
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.bags.iter().flatten().chain(self.flaps.iter().flat_map(|f| f.q.iter())).max().copied()
    }

    /// First and last bag index per spine vertex.
    fn runs(&self, n: usize) -> Vec<Option<(usize, usize)>> {
        let mut runs = vec![None; n];
        for (i, bag) in self.bags.iter().enumerate() {
            for v in bag {
                if v.index() >= n {
                    continue;
                }
                let r: &mut Option<(usize, usize)> = &mut runs[v.index()];
                *r = Some(match *r {
                    None => (i, i),
                    Some((a, _)) => (a, i),
                });
            }
        }
        runs
    }

    fn first_gap(&self, v: VertexId, first: usize, last: usize) -> Option<usize> {
        (first..=last).find(|&i| !self.bags[i].contains(&v))
    }

    pub fn is_nice(&self) -> bool {
        self.bags.windows(2).all(|w| w[0].symmetric_difference(&w[1]).count() == 1)
    }

    fn check_structure(&self) -> Result<()> {
        let n = self.max_vertex().map_or(0, |v| v.index() + 1);
        for (v, run) in self.runs(n).iter().enumerate() {
            if let Some((a, b)) = *run {
                if let Some(gap) = self.first_gap(VertexId::from(v), a, b) {
                    return Err(Error::InvalidDecomposition(
                        Violation::NonContiguous { vertex: VertexId::from(v), first: a, gap }.to_string(),
                    ));
                }
            }
        }
        for (i, f) in self.flaps.iter().enumerate() {
            let bag = self
                .bags
                .get(f.anchor)
                .ok_or_else(|| Error::InvalidDecomposition(Violation::AnchorOutOfRange { flap: i }.to_string()))?;
            if let Some(&v) = f.p.iter().find(|v| !bag.contains(v)) {
                return Err(Error::InvalidDecomposition(
                    Violation::FlapPNotInAnchor { flap: i, vertex: v }.to_string(),
                ));
            }
        }
        Ok(())
    }
}

/// Checks the decomposition conditions against `g`; every violation is
/// reported with a witness.
pub fn validate(g: &WeightedGraph, d: &CaterpillarDecomposition) -> ValidationReport {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut unknown = BTreeSet::new();
    for v in d.bags.iter().flatten().copied().chain(d.flaps.iter().flat_map(|f| f.clique())) {
        if v.index() >= n {
            unknown.insert(v);
        }
    }
    out.extend(unknown.into_iter().map(Violation::UnknownVertex));

    for (i, bag) in d.bags.iter().enumerate() {
        if bag.len() > d.width + 1 {
            out.push(Violation::BagTooLarge { bag: i, size: bag.len() });
        }
    }

    let runs = d.runs(n);
    for (v, run) in runs.iter().enumerate() {
        if let Some((a, b)) = *run {
            if let Some(gap) = d.first_gap(VertexId::from(v), a, b) {
                out.push(Violation::NonContiguous { vertex: VertexId::from(v), first: a, gap });
            }
        }
    }

    let mut flap_of: Vec<Option<usize>> = vec![None; n];
    for (i, f) in d.flaps.iter().enumerate() {
        if f.p.is_empty() || f.q.is_empty() || f.size() > d.width + 1 {
            out.push(Violation::FlapShape { flap: i, p: f.p.len(), q: f.q.len() });
        }
        match d.bags.get(f.anchor) {
            None => out.push(Violation::AnchorOutOfRange { flap: i }),
            Some(bag) => {
                for &v in &f.p {
                    if !bag.contains(&v) {
                        out.push(Violation::FlapPNotInAnchor { flap: i, vertex: v });
                    }
                }
            }
        }
        for &v in &f.q {
            if v.index() >= n {
                continue;
            }
            if runs[v.index()].is_some() {
                out.push(Violation::FlapQInSpine { flap: i, vertex: v });
            }
            if flap_of[v.index()].replace(i).is_some() {
                out.push(Violation::FlapVertexReused { vertex: v });
            }
        }
    }

    for v in g.vertices() {
        if runs[v.index()].is_none() && flap_of[v.index()].is_none() {
            out.push(Violation::VertexUncovered(v));
        }
    }

    for (id, e) in g.edges().iter().enumerate() {
        let covered = match (flap_of[e.u.index()], flap_of[e.v.index()]) {
            (None, None) => match (runs[e.u.index()], runs[e.v.index()]) {
                (Some((ua, ub)), Some((va, vb))) => {
                    (ua.max(va)..=ub.min(vb)).any(|i| d.bags[i].contains(&e.u) && d.bags[i].contains(&e.v))
                }
                _ => false,
            },
            (Some(f), other) | (other, Some(f)) => {
                let flap = &d.flaps[f];
                let (a, b) = (e.u, e.v);
                other.is_none_or(|o| o == f) && flap.clique().any(|x| x == a) && flap.clique().any(|x| x == b)
            }
        };
        if !covered {
            out.push(Violation::EdgeUncovered(EdgeId::from(id)));
        }
    }

    if out.iter().all(|v| !matches!(v, Violation::UnknownVertex(_))) {
        for (i, f) in d.flaps.iter().enumerate() {
            if let Some(reached) = separation_witness(g, f) {
                out.push(Violation::FlapNotSeparated { flap: i, reached });
            }
        }
    }
    ValidationReport { violations: out }
}

/// Searches `g - P` from `Q`; returns a vertex outside `P ∪ Q` that is
/// reached, if any.
pub fn separation_witness(g: &WeightedGraph, f: &Flap) -> Option<VertexId> {
    let mut blocked = vec![false; g.vertex_count()];
    for &v in &f.p {
        blocked[v.index()] = true;
    }
    let inside: BTreeSet<VertexId> = f.clique().collect();
    let mut queue: VecDeque<VertexId> = f.q.iter().copied().collect();
    for &v in &f.q {
        blocked[v.index()] = true;
    }
    while let Some(x) = queue.pop_front() {
        for &(y, _) in g.neighbors(x) {
            if blocked[y.index()] {
                continue;
            }
            if !inside.contains(&y) {
                return Some(y);
            }
            blocked[y.index()] = true;
            queue.push_back(y);
        }
    }
    None
}

/// `(spine width, catwidth)`.
pub fn widths(d: &CaterpillarDecomposition) -> (usize, usize) {
    let spine = d.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1);
    let flaps = d.flaps.iter().map(|f| f.size().saturating_sub(1)).max().unwrap_or(0);
    (spine, spine.max(flaps))
}

/// Inserts intermediate bags so consecutive bags differ on exactly one
/// vertex: removals first (by id), then insertions (by id). Repeated bags
/// are collapsed. Flaps follow the original bag they were anchored at.
pub fn nicify(d: &CaterpillarDecomposition) -> Result<CaterpillarDecomposition> {
    d.check_structure()?;
    let mut bags: Vec<Bag> = Vec::with_capacity(d.bags.len() * 2);
    let mut position = Vec::with_capacity(d.bags.len());
    for bag in &d.bags {
        if let Some(prev) = bags.last() {
            if prev == bag {
                position.push(bags.len() - 1);
                continue;
            }
            let mut cur = prev.clone();
            let gone: Vec<VertexId> = prev.difference(bag).copied().collect();
            let new: Vec<VertexId> = bag.difference(prev).copied().collect();
            let steps = gone.len() + new.len();
            for (i, v) in gone.into_iter().chain(new).enumerate() {
                if !cur.remove(&v) {
                    cur.insert(v);
                }
                // the final step reproduces `bag` itself
                if i + 1 < steps {
                    bags.push(cur.clone());
                }
            }
        }
        bags.push(bag.clone());
        position.push(bags.len() - 1);
    }
    let flaps = d.flaps.iter().map(|f| Flap { p: f.p.clone(), q: f.q.clone(), anchor: position[f.anchor] }).collect();
    Ok(CaterpillarDecomposition { bags, flaps, width: d.width })
}

/// Exact position on the line. Points compare lexicographically:
/// `[bag boundary, phase, slot, tie]`.
///
/// Spine vertex `v` first in bag `i` and last in bag `j` gets
/// `[i,0,v,0]..[j+1,0,v,1]`. Flap `f` anchored at bag `a` places its `Q`
/// vertices at `[a,1,f,r]..[a,1,f,q+r]`, strictly inside the anchor bag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point(pub [u32; 4]);

impl Point {
    /// Approximate coordinate for drawing.
    pub fn coordinate(&self) -> f64 {
        let [b, phase, slot, tie] = self.0;
        let base = b as f64 + if phase == 1 { 0.35 } else { 0.0 };
        base + (slot as f64 % 97.0) * 1e-3 + tie as f64 * 1e-5
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalLayout {
    pub left: Vec<Point>,
    pub right: Vec<Point>,
    flap_of: Vec<Option<usize>>,
    flap_cliques: Vec<Vec<VertexId>>,
}

impl IntervalLayout {
    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn left(&self, v: VertexId) -> Point {
        self.left[v.index()]
    }

    pub fn right(&self, v: VertexId) -> Point {
        self.right[v.index()]
    }

    pub fn intersects(&self, a: VertexId, b: VertexId) -> bool {
        self.left(a) <= self.right(b) && self.left(b) <= self.right(a)
    }

    /// Flap index of a `Q` vertex.
    pub fn flap_of(&self, v: VertexId) -> Option<usize> {
        self.flap_of[v.index()]
    }

    pub fn is_flap_vertex(&self, v: VertexId) -> bool {
        self.flap_of[v.index()].is_some()
    }

    pub fn flap_clique(&self, f: usize) -> &[VertexId] {
        &self.flap_cliques[f]
    }

    pub fn flap_count(&self) -> usize {
        self.flap_cliques.len()
    }

    /// Whether completion may join `a` and `b`: spine pairs whose intervals
    /// meet, or two members of one flap clique.
    pub fn allows(&self, a: VertexId, b: VertexId) -> bool {
        match (self.flap_of(a), self.flap_of(b)) {
            (None, None) => self.intersects(a, b),
            (Some(f), _) | (_, Some(f)) => {
                let clique = &self.flap_cliques[f];
                clique.contains(&a) && clique.contains(&b)
            }
        }
    }

    /// Vertices sorted by left endpoint.
    pub fn order_by_left(&self) -> Vec<VertexId> {
        let mut order: Vec<VertexId> = (0..self.len()).map(VertexId::from).collect();
        order.sort_by_key(|&v| self.left(v));
        order
    }

    pub fn leftmost(&self) -> Option<VertexId> {
        (0..self.len()).map(VertexId::from).min_by_key(|&v| self.left(v))
    }

    /// All spine pairs with intersecting intervals, `a < b`.
    pub fn overlapping_spine_pairs(&self) -> Vec<(VertexId, VertexId)> {
        let mut events: Vec<(Point, bool, VertexId)> = Vec::new();
        for v in (0..self.len()).map(VertexId::from) {
            if !self.is_flap_vertex(v) {
                events.push((self.left(v), true, v));
                events.push((self.right(v), false, v));
            }
        }
        events.sort();
        let mut active: BTreeSet<VertexId> = BTreeSet::new();
        let mut pairs = Vec::new();
        for (_, open, v) in events {
            if open {
                for &u in &active {
                    pairs.push(if u < v { (u, v) } else { (v, u) });
                }
                active.insert(v);
            } else {
                active.remove(&v);
            }
        }
        pairs.sort();
        pairs
    }

    /// Maximum number of spine intervals covering one point.
    pub fn max_spine_coverage(&self) -> usize {
        let mut events: Vec<(Point, i32)> = Vec::new();
        for v in (0..self.len()).map(VertexId::from) {
            if !self.is_flap_vertex(v) {
                events.push((self.left(v), 1));
                events.push((self.right(v), -1));
            }
        }
        events.sort();
        let (mut cur, mut best) = (0i32, 0i32);
        for (_, delta) in events {
            cur += delta;
            best = best.max(cur);
        }
        best as usize
    }

    /// Layout invariants against `g`: distinct endpoints, every edge's
    /// intervals meet, spine coverage at most `width + 1`.
    pub fn check(&self, g: &WeightedGraph, width: usize) -> Vec<String> {
        let mut problems = Vec::new();
        let mut all: Vec<Point> = self.left.iter().chain(self.right.iter()).copied().collect();
        all.sort();
        if all.windows(2).any(|w| w[0] == w[1]) {
            problems.push("interval endpoints are not distinct".to_string());
        }
        for v in g.vertices() {
            if self.left(v) >= self.right(v) {
                problems.push(format!("interval of {v} is empty"));
            }
        }
        for (id, e) in g.edges().iter().enumerate() {
            if !self.intersects(e.u, e.v) {
                problems.push(format!("edge e{id} joins disjoint intervals"));
            }
        }
        let cover = self.max_spine_coverage();
        if cover > width + 1 {
            problems.push(format!("{cover} spine intervals overlap at one point"));
        }
        problems
    }
}

/// Interval layout of a nice decomposition.
pub fn interval_layout(d: &CaterpillarDecomposition) -> Result<IntervalLayout> {
    if let Some(i) = d.bags.windows(2).position(|w| w[0].symmetric_difference(&w[1]).count() != 1) {
        return Err(Error::NotNice(i, i + 1));
    }
    let n = d.max_vertex().map_or(0, |v| v.index() + 1);
    let runs = d.runs(n);
    let mut left = vec![None; n];
    let mut right = vec![None; n];
    let mut flap_of = vec![None; n];
    for (v, run) in runs.iter().enumerate() {
        if let Some((a, b)) = *run {
            left[v] = Some(Point([a as u32, 0, v as u32, 0]));
            right[v] = Some(Point([b as u32 + 1, 0, v as u32, 1]));
        }
    }
    let mut flap_cliques = Vec::with_capacity(d.flaps.len());
    for (f, flap) in d.flaps.iter().enumerate() {
        if flap.anchor >= d.bags.len() {
            return Err(Error::InvalidDecomposition(Violation::AnchorOutOfRange { flap: f }.to_string()));
        }
        let mut q = flap.q.clone();
        q.sort();
        let size = q.len() as u32;
        for (r, v) in q.iter().enumerate() {
            if left[v.index()].is_some() {
                return Err(Error::InvalidDecomposition(Violation::FlapQInSpine { flap: f, vertex: *v }.to_string()));
            }
            let a = flap.anchor as u32;
            left[v.index()] = Some(Point([a, 1, f as u32, r as u32]));
            right[v.index()] = Some(Point([a, 1, f as u32, size + r as u32]));
            flap_of[v.index()] = Some(f);
        }
        let mut clique: Vec<VertexId> = flap.clique().collect();
        clique.sort();
        flap_cliques.push(clique);
    }
    let unwrap = |pts: Vec<Option<Point>>| -> Result<Vec<Point>> {
        pts.into_iter()
            .enumerate()
            .map(|(v, p)| p.ok_or_else(|| Error::InvalidDecomposition(format!("vertex v{v} is in no bag"))))
            .collect()
    };
    Ok(IntervalLayout { left: unwrap(left)?, right: unwrap(right)?, flap_of, flap_cliques })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn single_bag_is_valid() {
        let g = WeightedGraph::from_int_edges(2, &[(0, 1, 1)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0, 1]], 1);
        assert!(validate(&g, &d).is_valid());
        assert_eq!(widths(&d), (1, 1));
    }

    #[test]
    fn gap_in_run_is_reported() {
        let g = WeightedGraph::from_int_edges(2, &[]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[1], &[0]], 1);
        let report = validate(&g, &d);
        assert_eq!(report.violations, vec![Violation::NonContiguous { vertex: v(0), first: 0, gap: 1 }]);
    }

    #[test]
    fn uncovered_edge_and_vertex() {
        let g = WeightedGraph::from_int_edges(3, &[(0, 1, 1)]).unwrap();
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[1]], 1);
        let report = validate(&g, &d);
        assert!(report.violations.contains(&Violation::EdgeUncovered(EdgeId(0))));
        assert!(report.violations.contains(&Violation::VertexUncovered(v(2))));
    }

    #[test]
    fn flap_checks() {
        // spine triangle 0,1,2 ; flap P={1,2}, Q={3}
        let g = WeightedGraph::from_int_edges(4, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)]).unwrap();
        let mut d = CaterpillarDecomposition::from_lists(&[&[0, 1, 2]], 2);
        d.flaps.push(Flap { p: vec![v(1), v(2)], q: vec![v(3)], anchor: 0 });
        assert!(validate(&g, &d).is_valid());
        assert_eq!(widths(&d), (2, 2));

        let leaky =
            WeightedGraph::from_int_edges(4, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1), (0, 3, 1)])
                .unwrap();
        let report = validate(&leaky, &d);
        assert!(report.violations.contains(&Violation::FlapNotSeparated { flap: 0, reached: v(0) }));
        assert!(report.violations.contains(&Violation::EdgeUncovered(EdgeId(5))));
    }

    #[test]
    fn spine_width_plus_flap_catwidth() {
        let mut d = CaterpillarDecomposition::from_lists(&[&[0, 1, 2], &[1, 2, 3]], 2);
        d.flaps.push(Flap { p: vec![v(1), v(2)], q: vec![v(4)], anchor: 1 });
        assert_eq!(widths(&d), (2, 2));
    }

    #[test]
    fn nicify_inserts_single_steps() {
        let d = CaterpillarDecomposition::from_lists(&[&[0, 1], &[2, 3]], 1);
        let nice = nicify(&d).unwrap();
        assert!(nice.is_nice());
        assert_eq!(nice.bags.len(), 5);
        assert_eq!(nice.bags[0], d.bags[0]);
        assert_eq!(nice.bags[4], d.bags[1]);
        assert!(nice.bags.iter().all(|b| b.len() <= 2));
    }

    #[test]
    fn nicify_is_idempotent_and_remaps_anchors() {
        let mut d = CaterpillarDecomposition::from_lists(&[&[0, 1, 2], &[2, 3, 4], &[4, 5]], 2);
        d.flaps.push(Flap { p: vec![v(3), v(4)], q: vec![v(6)], anchor: 1 });
        let nice = nicify(&d).unwrap();
        assert_eq!(nice, nicify(&nice).unwrap());
        let anchor = &nice.bags[nice.flaps[0].anchor];
        assert!(anchor.contains(&v(3)) && anchor.contains(&v(4)));
    }

    #[test]
    fn nicify_rejects_broken_runs() {
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[1], &[0]], 1);
        assert!(nicify(&d).is_err());
    }

    #[test]
    fn layout_of_overlapping_pair() {
        let d = CaterpillarDecomposition::from_lists(&[&[0], &[0, 1], &[1]], 1);
        let l = interval_layout(&d).unwrap();
        assert!(l.left(v(0)) < l.left(v(1)));
        assert!(l.left(v(1)) < l.right(v(0)));
        assert!(l.right(v(0)) < l.right(v(1)));
    }

    #[test]
    fn layout_of_one_bag() {
        let d = CaterpillarDecomposition::from_lists(&[&[0, 1, 2]], 2);
        let l = interval_layout(&d).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert!(l.intersects(v(a), v(b)));
            }
        }
        assert_eq!(l.max_spine_coverage(), 3);
        assert_eq!(l.overlapping_spine_pairs().len(), 3);
    }

    #[test]
    fn layout_rejects_non_nice() {
        let d = CaterpillarDecomposition::from_lists(&[&[0, 1], &[2, 3]], 1);
        assert!(matches!(interval_layout(&d), Err(Error::NotNice(0, 1))));
    }

    #[test]
    fn flap_intervals_sit_inside_anchor() {
        let mut d = CaterpillarDecomposition::from_lists(&[&[0, 1], &[1], &[1, 2]], 1);
        d.flaps.push(Flap { p: vec![v(1)], q: vec![v(3)], anchor: 1 });
        let l = interval_layout(&d).unwrap();
        assert!(l.left(v(1)) < l.left(v(3)) && l.right(v(3)) < l.right(v(1)));
        assert!(!l.intersects(v(0), v(3)));
        assert!(l.allows(v(1), v(3)));
        assert!(!l.allows(v(2), v(3)));
        assert_eq!(l.max_spine_coverage(), 2);
    }
}
