//! Charging schemes: detour moves against a spanning tree, the two
//! verifiers, shortcut composition and single-edge elimination.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Rational, TreeEdges, VertexId, WeightedGraph};

/// Edge `edge` sends `amount` units of charge to every edge of `path`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetourMove {
    pub edge: EdgeId,
    pub path: Vec<EdgeId>,
    #[serde(with = "crate::toolkit::report::rational_str")]
    pub amount: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargingScheme {
    /// Edge set of the graph the scheme lives on.
    pub support: BTreeSet<EdgeId>,
    pub tree: TreeEdges,
    pub moves: Vec<DetourMove>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Charge {
    pub out: Rational,
    pub inflow: Rational,
}

impl Charge {
    pub fn net(&self) -> Rational {
        self.inflow - self.out
    }
}

/// Walks `path` from one endpoint of `edge`; returns the vertex sequence if
/// `edge + path` is a simple cycle.
pub(crate) fn detour_walk(g: &WeightedGraph, edge: EdgeId, path: &[EdgeId]) -> Option<Vec<VertexId>> {
    let e = g.edge(edge);
    let first = g.edge(*path.first()?);
    let start = if first.touches(e.u) && !first.touches(e.v) {
        e.u
    } else if first.touches(e.v) && !first.touches(e.u) {
        e.v
    } else {
        return None;
    };
    let goal = e.other(start);
    let mut seen = BTreeSet::from([start]);
    let mut walk = vec![start];
    let mut x = start;
    for &p in path {
        if p == edge {
            return None;
        }
        let pe = g.edge(p);
        if !pe.touches(x) {
            return None;
        }
        x = pe.other(x);
        if !seen.insert(x) {
            return None;
        }
        walk.push(x);
    }
    (x == goal).then_some(walk)
}

/// Orients `path` to start at the smaller endpoint of `edge`.
pub(crate) fn canonical(g: &WeightedGraph, edge: EdgeId, mut path: Vec<EdgeId>) -> Vec<EdgeId> {
    if let Some(&first) = path.first() {
        if !g.edge(first).touches(g.edge(edge).u) {
            path.reverse();
        }
    }
    path
}

impl ChargingScheme {
    pub fn new(g: &WeightedGraph, tree: TreeEdges) -> Self {
        Self { support: g.edge_ids().collect(), tree, moves: Vec::new() }
    }

    pub fn aggregates(&self) -> BTreeMap<EdgeId, Charge> {
        let mut acc: BTreeMap<EdgeId, Charge> = self.support.iter().map(|&e| (e, Charge::default())).collect();
        for m in &self.moves {
            acc.entry(m.edge).or_default().out += m.amount;
            for &p in &m.path {
                acc.entry(p).or_default().inflow += m.amount;
            }
        }
        acc
    }

    /// Merges moves with identical edge and path and drops zero amounts.
    pub fn normalize(&mut self) {
        let mut merged: BTreeMap<(EdgeId, Vec<EdgeId>), Rational> = BTreeMap::new();
        for m in self.moves.drain(..) {
            *merged.entry((m.edge, m.path)).or_insert_with(Rational::zero) += m.amount;
        }
        self.moves = merged
            .into_iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|((edge, path), amount)| DetourMove { edge, path, amount })
            .collect();
    }

    /// Every amount multiplied by `factor`.
    pub fn scaled(&self, factor: Rational) -> Self {
        let mut out = self.clone();
        for m in &mut out.moves {
            m.amount *= factor;
        }
        out
    }

    /// Union of two schemes over the same tree.
    pub fn merged(mut self, other: ChargingScheme) -> Self {
        self.support.extend(other.support);
        self.moves.extend(other.moves);
        self.normalize();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeViolation {
    NegativeAmount { index: usize },
    EdgeOutsideSupport { index: usize, edge: EdgeId },
    TreeOutsideSupport(EdgeId),
    NotADetour { index: usize },
    InsufficientOut { edge: EdgeId, out: Rational },
    PositiveNet { edge: EdgeId, net: Rational },
}

impl fmt::Display for SchemeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeViolation::NegativeAmount { index } => write!(f, "move {index} has a negative amount"),
            SchemeViolation::EdgeOutsideSupport { index, edge } => {
                write!(f, "move {index} uses {edge}, which is not in the graph")
            }
            SchemeViolation::TreeOutsideSupport(e) => write!(f, "tree edge {e} is not in the graph"),
            SchemeViolation::NotADetour { index } => write!(f, "move {index}: edge plus path is not a simple cycle"),
            SchemeViolation::InsufficientOut { edge, out } => write!(f, "Out({edge}) = {out} < 1"),
            SchemeViolation::PositiveNet { edge, net } => write!(f, "Net({edge}) = {net} > 0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeReport {
    pub valid: bool,
    /// Largest net charge on a tree edge, floored at zero.
    pub value: Rational,
    pub violations: Vec<SchemeViolation>,
}

/// Checks every move is a detour inside the support, `Out(e) >= 1` and
/// `Net(e) <= 0` off the tree, and reports the value `max Net` on the tree.
pub fn verify_scheme(g: &WeightedGraph, s: &ChargingScheme) -> SchemeReport {
    let mut violations = Vec::new();
    for &e in &s.tree.edges {
        if !s.support.contains(&e) {
            violations.push(SchemeViolation::TreeOutsideSupport(e));
        }
    }
    for (index, m) in s.moves.iter().enumerate() {
        if m.amount.is_negative() {
            violations.push(SchemeViolation::NegativeAmount { index });
        }
        let outside = std::iter::once(&m.edge).chain(m.path.iter()).find(|e| !s.support.contains(e));
        if let Some(&edge) = outside {
            violations.push(SchemeViolation::EdgeOutsideSupport { index, edge });
            continue;
        }
        if detour_walk(g, m.edge, &m.path).is_none() {
            violations.push(SchemeViolation::NotADetour { index });
        }
    }
    let one = Rational::from_integer(1);
    let mut value = Rational::zero();
    for (edge, charge) in s.aggregates() {
        if s.tree.contains(edge) {
            value = value.max(charge.net());
        } else {
            if charge.out < one {
                violations.push(SchemeViolation::InsufficientOut { edge, out: charge.out });
            }
            if charge.net().is_positive() {
                violations.push(SchemeViolation::PositiveNet { edge, net: charge.net() });
            }
        }
    }
    SchemeReport { valid: violations.is_empty(), value, violations }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicReport {
    pub acyclic: bool,
    /// Tree edges that charge something.
    pub tree_chargers: Vec<EdgeId>,
    /// Topological order of the support when one exists.
    pub order: Option<Vec<EdgeId>>,
    /// Edges on one charging cycle otherwise.
    pub cycle: Option<Vec<EdgeId>>,
}

/// Only non-tree edges may charge, and "charges a path containing" must
/// admit a topological order. Ties in the order go to the smaller edge id.
pub fn verify_acyclic(s: &ChargingScheme) -> AcyclicReport {
    let mut tree_chargers: BTreeSet<EdgeId> = BTreeSet::new();
    let mut succ: BTreeMap<EdgeId, BTreeSet<EdgeId>> = BTreeMap::new();
    let mut nodes: BTreeSet<EdgeId> = s.support.clone();
    for m in s.moves.iter().filter(|m| m.amount.is_positive()) {
        if s.tree.contains(m.edge) {
            tree_chargers.insert(m.edge);
        }
        nodes.insert(m.edge);
        for &p in &m.path {
            nodes.insert(p);
            succ.entry(m.edge).or_default().insert(p);
        }
    }
    let mut indegree: HashMap<EdgeId, usize> = nodes.iter().map(|&e| (e, 0)).collect();
    for targets in succ.values() {
        for t in targets {
            *indegree.get_mut(t).unwrap() += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<EdgeId>> =
        indegree.iter().filter(|(_, &d)| d == 0).map(|(&e, _)| Reverse(e)).collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(Reverse(e)) = ready.pop() {
        order.push(e);
        if let Some(targets) = succ.get(&e) {
            for t in targets {
                let d = indegree.get_mut(t).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(Reverse(*t));
                }
            }
        }
    }
    let tree_chargers: Vec<EdgeId> = tree_chargers.into_iter().collect();
    if order.len() == nodes.len() {
        return AcyclicReport { acyclic: tree_chargers.is_empty(), tree_chargers, order: Some(order), cycle: None };
    }
    let placed: BTreeSet<EdgeId> = order.into_iter().collect();
    AcyclicReport { acyclic: false, tree_chargers, order: None, cycle: Some(find_cycle(&succ, &nodes, &placed)) }
}

/// Every unplaced node has an unplaced predecessor, so walking predecessors
/// must revisit a node.
fn find_cycle(
    succ: &BTreeMap<EdgeId, BTreeSet<EdgeId>>,
    nodes: &BTreeSet<EdgeId>,
    placed: &BTreeSet<EdgeId>,
) -> Vec<EdgeId> {
    let mut pred: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for (&a, targets) in succ {
        if placed.contains(&a) {
            continue;
        }
        for &b in targets {
            pred.entry(b).or_insert(a);
        }
    }
    let start = *nodes.iter().find(|e| !placed.contains(e)).unwrap();
    let mut seen: Vec<EdgeId> = Vec::new();
    let mut x = start;
    while !seen.contains(&x) {
        seen.push(x);
        x = pred[&x];
    }
    let from = seen.iter().position(|&e| e == x).unwrap();
    let mut cycle = seen[from..].to_vec();
    cycle.reverse();
    cycle
}

/// Replaces `m2.edge` inside `m1.path` by `m2.path` and erases loops from the
/// resulting walk. The returned move has amount zero; callers set it.
pub fn shortcut(g: &WeightedGraph, m1: &DetourMove, m2: &DetourMove) -> Result<DetourMove> {
    let pos = m1
        .path
        .iter()
        .position(|&e| e == m2.edge)
        .ok_or_else(|| Error::Precondition(format!("{} is not on the first path", m2.edge)))?;
    if m2.path.contains(&m1.edge) {
        return Err(Error::Precondition(format!("{} is on the second path", m1.edge)));
    }
    let outer =
        detour_walk(g, m1.edge, &m1.path).ok_or_else(|| Error::Precondition("first move is not a detour".into()))?;
    let inner =
        detour_walk(g, m2.edge, &m2.path).ok_or_else(|| Error::Precondition("second move is not a detour".into()))?;

    // splice, orienting the inner path to run from outer[pos] to outer[pos+1]
    let (a, b) = (outer[pos], outer[pos + 1]);
    let (inner_vs, inner_es): (Vec<VertexId>, Vec<EdgeId>) = if inner[0] == a {
        (inner.clone(), m2.path.clone())
    } else {
        debug_assert_eq!(inner[0], b);
        (inner.iter().rev().copied().collect(), m2.path.iter().rev().copied().collect())
    };
    let mut verts: Vec<VertexId> = outer[..=pos].to_vec();
    let mut edges: Vec<EdgeId> = m1.path[..pos].to_vec();
    verts.extend_from_slice(&inner_vs[1..]);
    edges.extend_from_slice(&inner_es);
    verts.extend_from_slice(&outer[pos + 2..]);
    edges.extend_from_slice(&m1.path[pos + 1..]);

    // loop erasure
    let mut kept_v: Vec<VertexId> = vec![verts[0]];
    let mut kept_e: Vec<EdgeId> = Vec::new();
    for (i, &e) in edges.iter().enumerate() {
        let next = verts[i + 1];
        if let Some(j) = kept_v.iter().position(|&x| x == next) {
            kept_v.truncate(j + 1);
            kept_e.truncate(j);
        } else {
            kept_v.push(next);
            kept_e.push(e);
        }
    }
    Ok(DetourMove { edge: m1.edge, path: canonical(g, m1.edge, kept_e), amount: Rational::zero() })
}

/// Removes non-tree edge `e` from an acyclic scheme while keeping it valid,
/// acyclic and no more valuable: every unit charged into `e` is rerouted by
/// shortcutting it with one of `e`'s own moves.
pub fn eliminate_edge(g: &WeightedGraph, s: &ChargingScheme, e: EdgeId) -> Result<ChargingScheme> {
    if s.tree.contains(e) {
        return Err(Error::Precondition(format!("{e} is a tree edge")));
    }
    if !s.support.contains(&e) {
        return Err(Error::Precondition(format!("{e} is not in the scheme's graph")));
    }
    let report = verify_scheme(g, s);
    if !report.valid {
        return Err(Error::InvalidScheme(report.violations[0].to_string()));
    }
    if !verify_acyclic(s).acyclic {
        return Err(Error::InvalidScheme("scheme is not acyclic".into()));
    }

    let mut moves = s.moves.clone();
    let mut index: HashMap<(EdgeId, Vec<EdgeId>), usize> =
        moves.iter().enumerate().map(|(i, m)| ((m.edge, m.path.clone()), i)).collect();
    while let Some(ci) = moves.iter().position(|m| m.amount.is_positive() && m.path.contains(&e)) {
        let oi = moves
            .iter()
            .position(|m| m.amount.is_positive() && m.edge == e)
            .ok_or_else(|| Error::InvalidScheme(format!("{e} is charged but charges nothing")))?;
        let alpha = moves[ci].amount.min(moves[oi].amount);
        let mut cut = shortcut(g, &moves[ci], &moves[oi])?;
        moves[ci].amount -= alpha;
        moves[oi].amount -= alpha;
        match index.get(&(cut.edge, cut.path.clone())) {
            Some(&i) => moves[i].amount += alpha,
            None => {
                cut.amount = alpha;
                index.insert((cut.edge, cut.path.clone()), moves.len());
                moves.push(cut);
            }
        }
    }
    let mut out = ChargingScheme {
        support: s.support.iter().copied().filter(|&x| x != e).collect(),
        tree: s.tree.clone(),
        moves: moves.into_iter().filter(|m| m.edge != e && m.amount.is_positive()).collect(),
    };
    out.normalize();
    Ok(out)
}
