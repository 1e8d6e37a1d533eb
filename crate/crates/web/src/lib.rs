//! Browser bindings: generate an instance, build a certified spanner, and
//! check the charging scheme. Every call takes and returns JSON or GraphFile
//! text so the page needs no generated type bindings.

use std::collections::BTreeSet;

use catspan::decomposition::CaterpillarDecomposition;
use catspan::graph::{format_rational, parse_rational, rational_to_f64};
use catspan::spanner::{pipeline, prepare_with};
use catspan::toolkit::format::GraphFile;
use catspan::toolkit::generate::{gen_kcaterpillar, InstanceSpec};
use catspan::toolkit::report::SchemeDocument;
use catspan::{EdgeId, WeightedGraph};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Where to draw a vertex: its bag span, or the anchor bag for flap vertices.
#[derive(Serialize)]
struct DrawnVertex {
    id: u32,
    first: usize,
    last: usize,
    flap: bool,
}

#[derive(Serialize)]
struct DrawnEdge {
    id: u32,
    u: u32,
    v: u32,
    weight: f64,
}

#[derive(Serialize)]
struct Drawing {
    bags: usize,
    vertices: Vec<DrawnVertex>,
    edges: Vec<DrawnEdge>,
}

fn drawing(g: &WeightedGraph, d: &CaterpillarDecomposition) -> Drawing {
    let mut span: Vec<Option<(usize, usize)>> = vec![None; g.vertex_count()];
    for (i, bag) in d.bags.iter().enumerate() {
        for v in bag {
            let s = &mut span[v.index()];
            *s = Some(s.map_or((i, i), |(a, _)| (a, i)));
        }
    }
    let mut flap = vec![false; g.vertex_count()];
    for f in &d.flaps {
        for q in &f.q {
            span[q.index()] = Some((f.anchor, f.anchor));
            flap[q.index()] = true;
        }
    }
    Drawing {
        bags: d.bags.len(),
        vertices: g
            .vertices()
            .map(|v| {
                let (first, last) = span[v.index()].unwrap_or((0, 0));
                DrawnVertex { id: v.0, first, last, flap: flap[v.index()] }
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| DrawnEdge { id: i as u32, u: e.u.0, v: e.v.0, weight: rational_to_f64(&e.weight) })
            .collect(),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn parse_graph(text: &str) -> Result<GraphFile, String> {
    GraphFile::parse(text).map_err(|e| e.to_string())
}

/// `flaps` is a space-separated list of `p:q:count` profiles.
pub fn generate_instance(n: usize, k: usize, seed: u64, flaps: &str, weights: &str) -> Result<String, String> {
    let mut spec = InstanceSpec::new(n, k, seed);
    spec.flaps =
        flaps.split_whitespace().map(str::parse).collect::<Result<_, catspan::Error>>().map_err(|e| e.to_string())?;
    spec.weights = weights.parse().map_err(|e: catspan::Error| e.to_string())?;
    let (graph, decomposition) = gen_kcaterpillar(&spec).map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct Generated {
        text: String,
        drawing: Drawing,
    }
    let drawing = drawing(&graph, &decomposition);
    json(&Generated { text: GraphFile { graph, decomposition }.to_text(), drawing })
}

pub fn build_spanner(graph_text: &str, epsilon: &str) -> Result<String, String> {
    let file = parse_graph(graph_text)?;
    let eps = parse_rational(epsilon).ok_or_else(|| format!("`{epsilon}` is not a number"))?;
    let report = pipeline(&file.graph, &file.decomposition, eps).map_err(|e| e.to_string())?;
    let cert = &report.certificate;
    #[derive(Serialize)]
    struct Built {
        spanner: Vec<EdgeId>,
        edges: usize,
        weight: String,
        mst: String,
        lightness: f64,
        stretch: String,
        value: String,
        certified: bool,
        bound_ok: bool,
    }
    json(&Built {
        spanner: report.lifted.clone(),
        edges: file.graph.edge_count(),
        weight: format_rational(&report.w_lifted),
        mst: format_rational(&report.w_mst),
        lightness: report.lightness,
        stretch: report.lifted_stretch.max.map_or("inf".into(), |s| format_rational(&s)),
        value: format_rational(&cert.scheme_value),
        certified: cert.certified && report.lifted_stretch_ok,
        bound_ok: cert.bound_ok,
    })
}

/// Scheme on the completed graph, returned with a drawing of that graph so
/// the page can highlight the tree and the busiest tree edges.
pub fn check_scheme(graph_text: &str, reduce_degree: bool) -> Result<String, String> {
    let file = parse_graph(graph_text)?;
    let prepared = prepare_with(&file.graph, &file.decomposition, reduce_degree).map_err(|e| e.to_string())?;
    let document = SchemeDocument::new(&prepared.working, &prepared.scheme);
    let charge = prepared.scheme.aggregates();
    let tree: BTreeSet<EdgeId> = prepared.tree.tree.edge_set();
    #[derive(Serialize)]
    struct Checked {
        value: String,
        valid: bool,
        acyclic: bool,
        moves: usize,
        tree: Vec<EdgeId>,
        /// Net charge received by each tree edge.
        load: Vec<(EdgeId, f64)>,
        drawing: Drawing,
    }
    json(&Checked {
        value: format_rational(&document.value),
        valid: document.valid,
        acyclic: document.acyclic,
        moves: document.moves.len(),
        load: tree.iter().map(|e| (*e, charge.get(e).map_or(0.0, |c| rational_to_f64(&c.net())))).collect(),
        tree: tree.into_iter().collect(),
        drawing: drawing(&prepared.working, &prepared.reduced_decomposition),
    })
}

#[wasm_bindgen(js_name = generateInstance)]
pub fn generate_instance_js(n: usize, k: usize, seed: u32, flaps: &str, weights: &str) -> Result<String, JsError> {
    generate_instance(n, k, seed as u64, flaps, weights).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = buildSpanner)]
pub fn build_spanner_js(graph_text: &str, epsilon: &str) -> Result<String, JsError> {
    build_spanner(graph_text, epsilon).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = checkScheme)]
pub fn check_scheme_js(graph_text: &str, reduce_degree: bool) -> Result<String, JsError> {
    check_scheme(graph_text, reduce_degree).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn generated() -> Value {
        serde_json::from_str(&generate_instance(40, 2, 5, "1:2:1 2:1:2", "uniform:100").unwrap()).unwrap()
    }

    #[test]
    fn generation_reports_text_and_drawing() {
        let g = generated();
        assert!(g["text"].as_str().unwrap().starts_with("catspan-graph 1"));
        let vertices = g["drawing"]["vertices"].as_array().unwrap();
        assert_eq!(vertices.len(), 40);
        assert_eq!(vertices.iter().filter(|v| v["flap"] == true).count(), 4);
        assert!(vertices.iter().all(|v| v["first"].as_u64() <= v["last"].as_u64()));
    }

    #[test]
    fn spanner_is_certified() {
        let text = generated()["text"].as_str().unwrap().to_string();
        let built: Value = serde_json::from_str(&build_spanner(&text, "0.5").unwrap()).unwrap();
        assert_eq!(built["certified"], true);
        assert!(built["lightness"].as_f64().unwrap() >= 1.0);
        assert!(built["spanner"].as_array().unwrap().len() < built["edges"].as_u64().unwrap() as usize);
    }

    #[test]
    fn scheme_is_valid_with_and_without_reduction() {
        let text = generated()["text"].as_str().unwrap().to_string();
        for reduce in [false, true] {
            let checked: Value = serde_json::from_str(&check_scheme(&text, reduce).unwrap()).unwrap();
            assert_eq!(checked["valid"], true);
            assert_eq!(checked["acyclic"], true);
            let max_load =
                checked["load"].as_array().unwrap().iter().map(|l| l[1].as_f64().unwrap()).fold(0.0, f64::max);
            assert_eq!(format!("{max_load}"), checked["value"].as_str().unwrap());
        }
    }

    #[test]
    fn errors_are_messages() {
        assert!(build_spanner("nonsense", "1").unwrap_err().contains("line 1"));
        let text = generated()["text"].as_str().unwrap().to_string();
        assert!(build_spanner(&text, "zero").is_err());
        assert!(generate_instance(10, 2, 1, "1:2", "unit").is_err());
    }
}
