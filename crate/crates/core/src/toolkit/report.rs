//! JSON documents written by the command-line tool.

use serde::{Deserialize, Serialize};

use crate::charging::{verify_acyclic, verify_scheme, ChargingScheme, DetourMove};
use crate::graph::{EdgeId, Rational, VertexId, WeightedGraph};
use crate::spanner::PipelineReport;

pub const REPORT_VERSION: u32 = 1;

/// Rationals as `"num/den"` strings (plain integers when `den = 1`).
pub mod rational_str {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::graph::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).ok_or_else(|| D::Error::custom(format!("bad rational `{text}`")))
    }
}

/// Like [`rational_str`], with `"inf"` for `None`.
pub mod opt_rational_str {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::graph::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_str("inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text = String::deserialize(d)?;
        if text == "inf" {
            return Ok(None);
        }
        parse_rational(&text).map(Some).ok_or_else(|| D::Error::custom(format!("bad rational `{text}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeDocument {
    pub format_version: u32,
    pub tree: Vec<EdgeId>,
    pub root: VertexId,
    #[serde(with = "rational_str")]
    pub value: Rational,
    pub valid: bool,
    pub acyclic: bool,
    pub violations: Vec<String>,
    pub moves: Vec<DetourMove>,
}

impl SchemeDocument {
    pub fn new(g: &WeightedGraph, scheme: &ChargingScheme) -> Self {
        let report = verify_scheme(g, scheme);
        let acyclic = verify_acyclic(scheme);
        let mut violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        if !acyclic.tree_chargers.is_empty() {
            violations.push(format!("tree edges charge: {:?}", acyclic.tree_chargers));
        }
        if let Some(cycle) = &acyclic.cycle {
            violations.push(format!("charging cycle through {cycle:?}"));
        }
        Self {
            format_version: REPORT_VERSION,
            tree: scheme.tree.edges.clone(),
            root: scheme.tree.root,
            value: report.value,
            valid: report.valid,
            acyclic: acyclic.acyclic,
            violations,
            moves: scheme.moves.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format_version: u32,
    #[serde(flatten)]
    pub report: PipelineReport,
}

impl CertificateDocument {
    pub fn new(report: PipelineReport) -> Self {
        Self { format_version: REPORT_VERSION, report }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> crate::error::Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}
