//! Seeded k-path and k-caterpillar generators.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rng::Rng;
use crate::decomposition::{Bag, CaterpillarDecomposition, Flap};
use crate::error::{Error, Result};
use crate::graph::{Rational, VertexId, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlapProfile {
    pub p: usize,
    pub q: usize,
    pub count: usize,
}

impl FromStr for FlapProfile {
    type Err = Error;

    /// `p:q:count`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums: Option<Vec<usize>> = parts.iter().map(|x| x.trim().parse().ok()).collect();
        match nums.as_deref() {
            Some(&[p, q, count]) => Ok(Self { p, q, count }),
            _ => Err(Error::InvalidSpec(format!("flap profile `{s}` is not p:q:count"))),
        }
    }
}

impl fmt::Display for FlapProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.p, self.q, self.count)
    }
}

/// Edge weight distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightModel {
    /// Integers uniform in `1..=max`.
    Uniform(u32),
    Unit,
    /// `(1 + U[0,1024)) · 2^min(tz, 10) / 1024`, `tz` the trailing zeros of
    /// a fresh 64-bit draw: positive, heavy-tailed, exact in `1/1024` units.
    Exp,
}

impl Default for WeightModel {
    fn default() -> Self {
        WeightModel::Uniform(1000)
    }
}

impl FromStr for WeightModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(WeightModel::Unit),
            "exp" => Ok(WeightModel::Exp),
            _ => s
                .strip_prefix("uniform:")
                .and_then(|w| w.parse().ok())
                .filter(|&w: &u32| w >= 1)
                .map(WeightModel::Uniform)
                .ok_or_else(|| Error::InvalidSpec(format!("unknown weight model `{s}`"))),
        }
    }
}

impl fmt::Display for WeightModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightModel::Uniform(w) => write!(f, "uniform:{w}"),
            WeightModel::Unit => write!(f, "unit"),
            WeightModel::Exp => write!(f, "exp"),
        }
    }
}

impl WeightModel {
    fn draw(&self, rng: &mut Rng) -> Rational {
        match *self {
            WeightModel::Uniform(max) => Rational::from_integer(1 + rng.below(max as u64) as i64),
            WeightModel::Unit => Rational::from_integer(1),
            WeightModel::Exp => {
                let base = 1 + rng.below(1024) as i64;
                let shift = rng.next_u64().trailing_zeros().min(10);
                Rational::new(base << shift, 1024)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    /// Total vertex count, flap vertices included.
    pub n: usize,
    pub k: usize,
    pub flaps: Vec<FlapProfile>,
    pub weights: WeightModel,
    pub seed: u64,
    /// Each optional edge is kept with probability `density_permille/1000`;
    /// every new vertex keeps at least one edge back.
    pub density_permille: u32,
}

impl InstanceSpec {
    pub fn new(n: usize, k: usize, seed: u64) -> Self {
        Self { n, k, flaps: Vec::new(), weights: WeightModel::default(), seed, density_permille: 1000 }
    }

    pub fn flap_vertex_count(&self) -> usize {
        self.flaps.iter().map(|f| f.q * f.count).sum()
    }

    pub fn check(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidSpec("k must be at least 1".into()));
        }
        for f in &self.flaps {
            if f.p == 0 || f.q == 0 || f.p + f.q != self.k + 1 {
                return Err(Error::InvalidSpec(format!("flap {f} needs p, q >= 1 and p + q = {}", self.k + 1)));
            }
        }
        if self.n < self.k + 1 + self.flap_vertex_count() {
            return Err(Error::InvalidSpec(format!(
                "n = {} leaves fewer than k + 1 = {} spine vertices",
                self.n,
                self.k + 1
            )));
        }
        if !(1..=1000).contains(&self.density_permille) {
            return Err(Error::InvalidSpec("density must be in 1..=1000 per mille".into()));
        }
        Ok(())
    }
}

/// Adds edges from `v` to `earlier`, one of them forced.
fn attach(rng: &mut Rng, density: u32, v: VertexId, earlier: &[VertexId], out: &mut Vec<(VertexId, VertexId)>) {
    let forced = rng.index(earlier.len());
    for (i, &u) in earlier.iter().enumerate() {
        if i == forced || rng.chance(density) {
            out.push((u.min(v), u.max(v)));
        }
    }
}

fn finish(
    spec: &InstanceSpec,
    rng: &mut Rng,
    n: usize,
    pairs: Vec<(VertexId, VertexId)>,
    bags: Vec<Bag>,
    flaps: Vec<Flap>,
) -> Result<(WeightedGraph, CaterpillarDecomposition)> {
    let edges: Vec<(VertexId, VertexId, Rational)> =
        pairs.into_iter().map(|(a, b)| (a, b, spec.weights.draw(rng))).collect();
    let g = WeightedGraph::new(n, edges)?;
    Ok((g, CaterpillarDecomposition { bags, flaps, width: spec.k }))
}

/// Spine of `n_spine` vertices: a `(k+1)`-clique, then each new vertex
/// replaces a random member of the last bag and joins the remaining `k`.
fn spine(spec: &InstanceSpec, rng: &mut Rng, n_spine: usize) -> (Vec<(VertexId, VertexId)>, Vec<Bag>) {
    let k = spec.k;
    let mut pairs = Vec::new();
    for i in 1..=k {
        let earlier: Vec<VertexId> = (0..i).map(VertexId::from).collect();
        attach(rng, spec.density_permille, VertexId::from(i), &earlier, &mut pairs);
    }
    let mut bag: Bag = (0..=k).map(VertexId::from).collect();
    let mut bags = vec![bag.clone()];
    for v in k + 1..n_spine {
        let members: Vec<VertexId> = bag.iter().copied().collect();
        let drop = members[rng.index(members.len())];
        bag.remove(&drop);
        let earlier: Vec<VertexId> = bag.iter().copied().collect();
        attach(rng, spec.density_permille, VertexId::from(v), &earlier, &mut pairs);
        bag.insert(VertexId::from(v));
        bags.push(bag.clone());
    }
    (pairs, bags)
}

pub fn gen_kpath(spec: &InstanceSpec) -> Result<(WeightedGraph, CaterpillarDecomposition)> {
    if !spec.flaps.is_empty() {
        return Err(Error::InvalidSpec("a k-path has no flaps".into()));
    }
    gen_kcaterpillar(spec)
}

/// Spine as in [`gen_kpath`], then every flap picks a random bag and `p` of
/// its vertices and adds `q` new vertices joined to them and each other.
/// Flap vertices are numbered after the spine.
pub fn gen_kcaterpillar(spec: &InstanceSpec) -> Result<(WeightedGraph, CaterpillarDecomposition)> {
    spec.check()?;
    let mut rng = Rng::new(spec.seed);
    let n_spine = spec.n - spec.flap_vertex_count();
    let (mut pairs, bags) = spine(spec, &mut rng, n_spine);
    let mut flaps = Vec::new();
    let mut next = n_spine;
    for profile in &spec.flaps {
        for _ in 0..profile.count {
            let anchor = rng.index(bags.len());
            let members: Vec<VertexId> = bags[anchor].iter().copied().collect();
            let p: BTreeSet<VertexId> = rng.sample(&members, profile.p).into_iter().collect();
            let mut clique: Vec<VertexId> = p.iter().copied().collect();
            let mut q = Vec::with_capacity(profile.q);
            for _ in 0..profile.q {
                let v = VertexId::from(next);
                next += 1;
                attach(&mut rng, spec.density_permille, v, &clique, &mut pairs);
                clique.push(v);
                q.push(v);
            }
            flaps.push(Flap { p: p.into_iter().collect(), q, anchor });
        }
    }
    finish(spec, &mut rng, spec.n, pairs, bags, flaps)
}

/// Instance family used by the sweep and the acceptance tests: a spine
/// with flaps of every shape `(p, k+1-p)` when `with_flaps` is set.
pub fn corpus_spec(k: usize, n: usize, seed: u64, with_flaps: bool, density_permille: u32) -> InstanceSpec {
    let mut spec = InstanceSpec::new(n, k, seed);
    spec.density_permille = density_permille;
    if with_flaps {
        for p in 1..=k {
            let q = k + 1 - p;
            spec.flaps.push(FlapProfile { p, q, count: (n / (10 * k * q)).max(1) });
        }
    }
    spec
}
