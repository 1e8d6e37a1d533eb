//! Line-oriented text formats for graphs and spanners.
//!
//! ```text
//! catspan-graph 1
//! n 5
//! k 2
//! interval 0 0 1        vertex, first bag, last bag (spine vertices)
//! interval 4 flap 0     flap vertices name their flap
//! edge 0 1 17           u v weight, weight as integer or num/den
//! bag 0 1 2
//! flap 1 p 0 2 q 4      anchor bag, P list, Q list
//! end
//! ```
//!
//! Edge ids are the order of the `edge` lines. The interval table is
//! derived from the bags and flaps; a parsed file must agree with it.
//! Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeSet;

use crate::decomposition::{Bag, CaterpillarDecomposition, Flap};
use crate::error::{Error, Result};
use crate::graph::{format_rational, parse_rational, EdgeId, Rational, VertexId, WeightedGraph};

pub const GRAPH_HEADER: &str = "catspan-graph";
pub const SPANNER_HEADER: &str = "catspan-spanner";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: WeightedGraph,
    pub decomposition: CaterpillarDecomposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Interval {
    Spine(usize, usize),
    Flap(usize),
}

fn interval_table(n: usize, d: &CaterpillarDecomposition) -> Vec<Option<Interval>> {
    let mut table = vec![None; n];
    for (i, bag) in d.bags.iter().enumerate() {
        for v in bag {
            if v.index() < n {
                table[v.index()] = Some(match table[v.index()] {
                    Some(Interval::Spine(a, _)) => Interval::Spine(a, i),
                    _ => Interval::Spine(i, i),
                });
            }
        }
    }
    for (f, flap) in d.flaps.iter().enumerate() {
        for v in &flap.q {
            if v.index() < n {
                table[v.index()] = Some(Interval::Flap(f));
            }
        }
    }
    table
}

fn join(vs: impl IntoIterator<Item = VertexId>) -> String {
    vs.into_iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(" ")
}

impl GraphFile {
    pub fn to_text(&self) -> String {
        let g = &self.graph;
        let d = &self.decomposition;
        let mut out = format!("{GRAPH_HEADER} {FORMAT_VERSION}\nn {}\nk {}\n", g.vertex_count(), d.width);
        for (v, iv) in interval_table(g.vertex_count(), d).iter().enumerate() {
            match iv {
                Some(Interval::Spine(a, b)) => out.push_str(&format!("interval {v} {a} {b}\n")),
                Some(Interval::Flap(f)) => out.push_str(&format!("interval {v} flap {f}\n")),
                None => {}
            }
        }
        for e in g.edges() {
            out.push_str(&format!("edge {} {} {}\n", e.u.0, e.v.0, format_rational(&e.weight)));
        }
        for bag in &d.bags {
            out.push_str(&format!("bag {}\n", join(bag.iter().copied())));
        }
        for f in &d.flaps {
            out.push_str(&format!(
                "flap {} p {} q {}\n",
                f.anchor,
                join(f.p.iter().copied()),
                join(f.q.iter().copied())
            ));
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut k: Option<usize> = None;
        let mut header = false;
        let mut ended = false;
        let mut intervals: Vec<(usize, usize, Interval)> = Vec::new();
        let mut edges: Vec<(VertexId, VertexId, Rational)> = Vec::new();
        let mut bags: Vec<Bag> = Vec::new();
        let mut flaps: Vec<Flap> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| Error::Format { line, message };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if ended {
                return Err(err("content after `end`".into()));
            }
            let words: Vec<&str> = trimmed.split_whitespace().collect();
            let num = |w: &str| -> Result<usize> { w.parse().map_err(|_| err(format!("`{w}` is not a number"))) };
            let vertex = |w: &str| -> Result<VertexId> { num(w).map(VertexId::from) };
            if !header {
                if words.as_slice() != [GRAPH_HEADER, "1"] {
                    return Err(err(format!("expected `{GRAPH_HEADER} {FORMAT_VERSION}`")));
                }
                header = true;
                continue;
            }
            match words[0] {
                "n" if words.len() == 2 => n = Some(num(words[1])?),
                "k" if words.len() == 2 => k = Some(num(words[1])?),
                "interval" if words.len() == 4 && words[2] == "flap" => {
                    intervals.push((line, num(words[1])?, Interval::Flap(num(words[3])?)))
                }
                "interval" if words.len() == 4 => {
                    intervals.push((line, num(words[1])?, Interval::Spine(num(words[2])?, num(words[3])?)))
                }
                "edge" if words.len() == 4 => {
                    let w = parse_rational(words[3]).ok_or_else(|| err(format!("bad weight `{}`", words[3])))?;
                    edges.push((vertex(words[1])?, vertex(words[2])?, w));
                }
                "bag" => bags.push(words[1..].iter().map(|w| vertex(w)).collect::<Result<_>>()?),
                "flap" => {
                    let pi = words.iter().position(|&w| w == "p");
                    let qi = words.iter().position(|&w| w == "q");
                    let (Some(2), Some(qi)) = (pi, qi) else {
                        return Err(err("expected `flap <anchor> p ... q ...`".into()));
                    };
                    if words.len() < 3 {
                        return Err(err("flap without anchor".into()));
                    }
                    flaps.push(Flap {
                        anchor: num(words[1])?,
                        p: words[3..qi].iter().map(|w| vertex(w)).collect::<Result<_>>()?,
                        q: words[qi + 1..].iter().map(|w| vertex(w)).collect::<Result<_>>()?,
                    });
                }
                "end" if words.len() == 1 => ended = true,
                other => return Err(err(format!("unexpected record `{other}`"))),
            }
        }
        let last = text.lines().count();
        let missing = |what: &str| Error::Format { line: last, message: format!("missing {what}") };
        if !header {
            return Err(missing("header"));
        }
        if !ended {
            return Err(missing("`end`"));
        }
        let n = n.ok_or_else(|| missing("`n`"))?;
        let width = k.ok_or_else(|| missing("`k`"))?;
        let graph = WeightedGraph::new(n, edges).map_err(|e| Error::Format { line: last, message: e.to_string() })?;
        let decomposition = CaterpillarDecomposition { bags, flaps, width };
        let table = interval_table(n, &decomposition);
        let mut listed = BTreeSet::new();
        for (line, v, iv) in intervals {
            if v >= n || table[v] != Some(iv) || !listed.insert(v) {
                return Err(Error::Format { line, message: format!("interval of vertex {v} disagrees with bags") });
            }
        }
        if listed.len() != table.iter().filter(|x| x.is_some()).count() {
            return Err(missing("interval rows"));
        }
        Ok(Self { graph, decomposition })
    }
}

/// Spanner edge list; each row repeats the endpoints for readability and
/// is checked against the graph on load.
pub fn spanner_to_text(g: &WeightedGraph, edges: &BTreeSet<EdgeId>) -> String {
    let mut out = format!("{SPANNER_HEADER} {FORMAT_VERSION}\n");
    for &e in edges {
        let edge = g.edge(e);
        out.push_str(&format!("edge {} {} {}\n", e.0, edge.u.0, edge.v.0));
    }
    out.push_str("end\n");
    out
}

pub fn parse_spanner(g: &WeightedGraph, text: &str) -> Result<BTreeSet<EdgeId>> {
    let mut edges = BTreeSet::new();
    let mut header = false;
    let mut ended = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Format { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if ended {
            return Err(err("content after `end`".into()));
        }
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        if !header {
            if words.as_slice() != [SPANNER_HEADER, "1"] {
                return Err(err(format!("expected `{SPANNER_HEADER} {FORMAT_VERSION}`")));
            }
            header = true;
            continue;
        }
        match words.as_slice() {
            ["end"] => ended = true,
            ["edge", id, u, v] => {
                let nums: Vec<u32> = [id, u, v]
                    .iter()
                    .map(|w| w.parse().map_err(|_| err(format!("`{w}` is not a number"))))
                    .collect::<Result<_>>()?;
                let e = EdgeId(nums[0]);
                let edge = g.try_edge(e).map_err(|x| err(x.to_string()))?;
                if (edge.u.0, edge.v.0) != (nums[1].min(nums[2]), nums[1].max(nums[2])) {
                    return Err(err(format!("edge {e} does not join {} and {}", nums[1], nums[2])));
                }
                edges.insert(e);
            }
            _ => return Err(err(format!("unexpected record `{trimmed}`"))),
        }
    }
    if !header || !ended {
        return Err(Error::Format { line: text.lines().count(), message: "truncated spanner file".into() });
    }
    Ok(edges)
}
