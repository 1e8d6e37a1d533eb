//! Charging schemes and their constructions.

mod flap;
mod scheme;
mod t2;

pub use flap::build_flap_scheme;
pub use scheme::{
    eliminate_edge, shortcut, verify_acyclic, verify_scheme, AcyclicReport, Charge, ChargingScheme, DetourMove,
    SchemeReport, SchemeViolation,
};
pub use t2::{build_kpath_scheme, build_t2_forest, edge_left, T2Forest, Triangle};

use crate::decomposition::{CaterpillarDecomposition, IntervalLayout};
use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::monotone::MonotoneTree;

/// Union of the spine and flap schemes on a completed graph.
pub fn build_scheme(
    g: &WeightedGraph,
    t: &MonotoneTree,
    d: &CaterpillarDecomposition,
    layout: &IntervalLayout,
) -> Result<ChargingScheme> {
    let spine = build_kpath_scheme(g, t, layout)?;
    let flaps = build_flap_scheme(g, t, d)?;
    Ok(spine.merged(flaps))
}
