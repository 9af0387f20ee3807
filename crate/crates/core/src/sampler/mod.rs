//! Seeded samplers for consistent random vertex orderings.
//!
//! A sampler produces one real key per vertex; the ordering is the ascending
//! sort of the keys with ties broken by vertex index.

pub mod mod1;
pub mod spectral;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bernoulli::{auto_alpha, bernoulli_poly, bernoulli_zeros};
use crate::error::{Error, Result};
use crate::graph::named::cycle;
use crate::graph::{Graph, enumerate_embeddings_with_cap};

pub use mod1::{ConstraintSet, Mod1Constraint, frac};
pub use spectral::{default_epsilon, embed_spectral};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    Uniform,
    Block,
    Spectral,
    Mod1Edge,
    DisjointCopies,
    DoubleBroom,
    Flower,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 7] = [
        SamplerKind::Uniform,
        SamplerKind::Block,
        SamplerKind::Spectral,
        SamplerKind::Mod1Edge,
        SamplerKind::DisjointCopies,
        SamplerKind::DoubleBroom,
        SamplerKind::Flower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Uniform => "uniform",
            SamplerKind::Block => "block",
            SamplerKind::Spectral => "spectral",
            SamplerKind::Mod1Edge => "mod1_edge",
            SamplerKind::DisjointCopies => "disjoint_copies",
            SamplerKind::DoubleBroom => "double_broom",
            SamplerKind::Flower => "flower",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().replace('_', "-") == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown sampler `{s}`")))
    }

    fn uses_alpha(self) -> bool {
        matches!(
            self,
            SamplerKind::Mod1Edge | SamplerKind::DisjointCopies | SamplerKind::DoubleBroom | SamplerKind::Flower
        )
    }
}

/// A real parameter or a request to pick a default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Auto,
    Value(f64),
}

impl std::str::FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Param::Auto);
        }
        s.parse::<f64>()
            .map(Param::Value)
            .map_err(|_| Error::InvalidArgument(format!("expected a number or `auto`, got `{s}`")))
    }
}

impl Serialize for Param {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Param::Auto => s.serialize_str("auto"),
            Param::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Param {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Param::Value(v)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// The pattern `H` for the disjoint-copies sampler, optionally with its
/// copies in the host graph (checked against a full enumeration).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyPattern {
    pub pattern: Graph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copies: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Param>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy_pattern: Option<CopyPattern>,
    #[serde(default)]
    pub seed: u64,
}

impl SamplerSpec {
    fn bare(kind: SamplerKind, seed: u64) -> Self {
        SamplerSpec {
            kind,
            alpha: None,
            epsilon: None,
            copy_pattern: None,
            seed,
        }
    }

    pub fn uniform(seed: u64) -> Self {
        Self::bare(SamplerKind::Uniform, seed)
    }

    pub fn block(seed: u64) -> Self {
        Self::bare(SamplerKind::Block, seed)
    }

    pub fn spectral(epsilon: Param, seed: u64) -> Self {
        SamplerSpec {
            epsilon: Some(epsilon),
            ..Self::bare(SamplerKind::Spectral, seed)
        }
    }

    pub fn mod1_edge(alpha: Param, seed: u64) -> Self {
        SamplerSpec {
            alpha: Some(alpha),
            ..Self::bare(SamplerKind::Mod1Edge, seed)
        }
    }

    pub fn disjoint_copies(pattern: Graph, alpha: Param, seed: u64) -> Self {
        SamplerSpec {
            alpha: Some(alpha),
            copy_pattern: Some(CopyPattern {
                pattern,
                copies: None,
            }),
            ..Self::bare(SamplerKind::DisjointCopies, seed)
        }
    }

    pub fn double_broom(alpha: Param, seed: u64) -> Self {
        SamplerSpec {
            alpha: Some(alpha),
            ..Self::bare(SamplerKind::DoubleBroom, seed)
        }
    }

    pub fn flower(alpha: Param, seed: u64) -> Self {
        SamplerSpec {
            alpha: Some(alpha),
            ..Self::bare(SamplerKind::Flower, seed)
        }
    }

    /// A kind with every parameter it needs set to `auto`.
    pub fn with_defaults(kind: SamplerKind, seed: u64) -> Self {
        let mut s = Self::bare(kind, seed);
        if kind.uses_alpha() {
            s.alpha = Some(Param::Auto);
        }
        if kind == SamplerKind::Spectral {
            s.epsilon = Some(Param::Auto);
        }
        s
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Parameters are present exactly when the kind uses them.
    pub fn validate(&self) -> Result<()> {
        let k = self.kind;
        let check = |present: bool, needed: bool, what: &str| {
            if present == needed {
                Ok(())
            } else if needed {
                Err(Error::InvalidArgument(format!("sampler {} requires {what}", k.name())))
            } else {
                Err(Error::InvalidArgument(format!("sampler {} does not take {what}", k.name())))
            }
        };
        check(self.alpha.is_some(), k.uses_alpha(), "alpha")?;
        check(self.epsilon.is_some(), k == SamplerKind::Spectral, "epsilon")?;
        check(
            self.copy_pattern.is_some(),
            k == SamplerKind::DisjointCopies,
            "copy_pattern",
        )?;
        if let Some(Param::Value(a)) = self.alpha {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::InvalidArgument(format!("alpha must lie in [0,1], got {a}")));
            }
        }
        Ok(())
    }
}

/// `rank[v]` is the position of `v` in the ordering (0 = smallest).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexOrdering {
    pub rank: Vec<usize>,
}

impl VertexOrdering {
    pub fn from_keys(keys: &[f64]) -> Self {
        let order = argsort(keys);
        let mut rank = vec![0; keys.len()];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        VertexOrdering { rank }
    }

    /// Vertices from smallest to largest.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.rank.len()];
        for (v, &r) in self.rank.iter().enumerate() {
            order[r] = v;
        }
        order
    }

    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }
}

/// Indices sorted by key, ties broken by index.
pub fn argsort(keys: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    idx
}

/// Number of adjacent equal keys after sorting.
pub fn count_ties(keys: &[f64]) -> usize {
    let mut k = keys.to_vec();
    k.sort_by(f64::total_cmp);
    k.windows(2).filter(|w| w[0] == w[1]).count()
}

/// Latent values of one draw together with the constraints imposed on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentValues {
    pub x: Vec<f64>,
    pub constraints: Vec<Mod1Constraint>,
}

#[derive(Debug, Clone)]
enum Engine {
    Constrained(ConstraintSet),
    Block(Vec<Vec<usize>>),
    Spectral(DMatrix<f64>),
}

/// A sampler bound to a graph, with every `auto` parameter resolved.
#[derive(Debug, Clone)]
pub struct PreparedSampler {
    spec: SamplerSpec,
    n: usize,
    engine: Engine,
    alpha: Option<f64>,
    epsilon: Option<f64>,
    notes: Vec<String>,
}

impl PreparedSampler {
    pub fn prepare(spec: &SamplerSpec, g: &Graph) -> Result<Self> {
        spec.validate()?;
        let n = g.n();
        let mut notes = Vec::new();
        let (engine, alpha, epsilon) = match spec.kind {
            SamplerKind::Uniform => (Engine::Constrained(ConstraintSet::new(n, vec![])?), None, None),
            SamplerKind::Block => (Engine::Block(blocks(g)?), None, None),
            SamplerKind::Spectral => {
                let eps = match spec.epsilon.expect("validated") {
                    Param::Auto => default_epsilon(g),
                    Param::Value(e) => e,
                };
                (Engine::Spectral(embed_spectral(g, eps)?), None, Some(eps))
            }
            SamplerKind::Mod1Edge => {
                let edges = g.edges();
                if edges.is_empty() {
                    return Err(Error::Precondition("mod1_edge needs at least one edge".into()));
                }
                let alpha = resolve_alpha(spec.alpha, n.saturating_sub(1).max(1))?;
                let all: Vec<usize> = g.vertices().collect();
                let group = edges
                    .iter()
                    .map(|&e| edge_constraint(&all, e, alpha))
                    .collect::<Result<Vec<_>>>()?;
                (
                    Engine::Constrained(ConstraintSet::new(n, vec![group])?),
                    Some(alpha),
                    None,
                )
            }
            SamplerKind::DisjointCopies => {
                let cp = spec.copy_pattern.as_ref().expect("validated");
                let (set, alpha, copies) = disjoint_copies(g, cp, spec.alpha.expect("validated"))?;
                notes.push(format!("{copies} copies of the pattern"));
                (Engine::Constrained(set), Some(alpha), None)
            }
            SamplerKind::DoubleBroom => {
                let path = broom_path(g)?;
                let len = path.len();
                let alpha = match spec.alpha.expect("validated") {
                    Param::Auto => bernoulli_zeros(len)?[if len % 2 == 1 { 1 } else { 0 }],
                    Param::Value(a) => a,
                };
                if bernoulli_poly(len, alpha)?.abs() > 1e-12 {
                    return Err(Error::Precondition(format!(
                        "alpha = {alpha} is not a zero of B_{len}"
                    )));
                }
                let pivot = *path.last().expect("path has >= 3 vertices");
                let c = Mod1Constraint::new(path.iter().map(|&v| (v, 1)).collect(), pivot, alpha)?;
                (
                    Engine::Constrained(ConstraintSet::new(n, vec![vec![c]])?),
                    Some(alpha),
                    None,
                )
            }
            SamplerKind::Flower => {
                let alpha = resolve_alpha(spec.alpha, 4)?;
                let groups = four_cycle_constraints(g, alpha)?;
                notes.push(format!("{} conditioned 4-cycles", groups.len()));
                (
                    Engine::Constrained(ConstraintSet::new(n, groups)?),
                    Some(alpha),
                    None,
                )
            }
        };
        Ok(PreparedSampler {
            spec: spec.clone(),
            n,
            engine,
            alpha,
            epsilon,
            notes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> &SamplerSpec {
        &self.spec
    }

    pub fn kind(&self) -> SamplerKind {
        self.spec.kind
    }

    pub fn resolved_alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn resolved_epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Fill `keys` (length `n`) with one draw.
    pub fn sample_keys<R: Rng + ?Sized>(&self, rng: &mut R, keys: &mut [f64]) {
        debug_assert_eq!(keys.len(), self.n);
        match &self.engine {
            Engine::Constrained(set) => set.sample_into(rng, keys, None),
            Engine::Block(blocks) => {
                let mut order: Vec<usize> = (0..blocks.len()).collect();
                order.shuffle(rng);
                for (pos, &b) in order.iter().enumerate() {
                    for &v in &blocks[b] {
                        keys[v] = pos as f64 + rng.random::<f64>();
                    }
                }
            }
            Engine::Spectral(b) => {
                let mut u = DVector::from_fn(self.n, |_, _| rng.sample::<f64, _>(StandardNormal));
                let norm = u.norm();
                if norm > 0.0 {
                    u /= norm;
                }
                let p = b * u;
                keys.copy_from_slice(p.as_slice());
            }
        }
    }

    /// One draw with its latent values and the constraints it satisfies.
    pub fn sample_latent<R: Rng + ?Sized>(&self, rng: &mut R) -> LatentValues {
        let mut x = vec![0.0; self.n];
        let constraints = match &self.engine {
            Engine::Constrained(set) => {
                let chosen = set.sample(rng, &mut x);
                set.groups()
                    .iter()
                    .zip(chosen)
                    .map(|(g, i)| g[i].clone())
                    .collect()
            }
            _ => {
                self.sample_keys(rng, &mut x);
                Vec::new()
            }
        };
        LatentValues { x, constraints }
    }

    pub fn sample_ordering<R: Rng + ?Sized>(&self, rng: &mut R) -> VertexOrdering {
        let mut keys = vec![0.0; self.n];
        self.sample_keys(rng, &mut keys);
        VertexOrdering::from_keys(&keys)
    }

    /// `count` orderings from the stream keyed by the spec's seed.
    pub fn orderings(&self, count: usize) -> Vec<VertexOrdering> {
        let mut rng: ChaCha8Rng = crate::rng::stream(self.spec.seed, "orderings", 0);
        (0..count).map(|_| self.sample_ordering(&mut rng)).collect()
    }
}

fn resolve_alpha(p: Option<Param>, degree: usize) -> Result<f64> {
    match p.expect("validated") {
        Param::Auto => auto_alpha(degree),
        Param::Value(a) => Ok(a),
    }
}

/// Components of `g`, or of its complement when `g` is complete multipartite.
fn blocks(g: &Graph) -> Result<Vec<Vec<usize>>> {
    if g.is_clique_union() {
        Ok(g.components())
    } else if g.is_complete_multipartite() {
        Ok(g.complement().components())
    } else {
        Err(Error::Precondition(
            "block sampler needs a disjoint union of cliques or a complete multipartite graph".into(),
        ))
    }
}

/// Signs −1 on the edge endpoints, +1 elsewhere on `verts`; pivot is
/// `verts[0]` unless it is an endpoint, then the first vertex off the edge.
fn edge_constraint(verts: &[usize], (a, b): (usize, usize), alpha: f64) -> Result<Mod1Constraint> {
    let terms = verts
        .iter()
        .map(|&v| (v, if v == a || v == b { -1 } else { 1 }))
        .collect();
    let pivot = if verts[0] != a && verts[0] != b {
        verts[0]
    } else {
        verts.iter().copied().find(|&v| v != a && v != b).unwrap_or(a)
    };
    Mod1Constraint::new(terms, pivot, alpha)
}

fn disjoint_copies(g: &Graph, cp: &CopyPattern, alpha: Param) -> Result<(ConstraintSet, f64, usize)> {
    let h = &cp.pattern;
    if h.n() < 2 {
        return Err(Error::Precondition("copy pattern needs at least 2 vertices".into()));
    }
    let embs = enumerate_embeddings_with_cap(h, g, g.n())?;
    // one representative map per image set
    let mut copies: Vec<Vec<usize>> = Vec::new();
    let mut images: Vec<Vec<usize>> = Vec::new();
    for e in embs {
        let img = e.image();
        if !images.contains(&img) {
            images.push(img);
            copies.push(e.map);
        }
    }
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i].iter().any(|v| images[j].contains(v)) {
                return Err(Error::Precondition(format!(
                    "copies {:?} and {:?} of the pattern overlap",
                    images[i], images[j]
                )));
            }
        }
    }
    if let Some(given) = &cp.copies {
        let mut g_sets: Vec<Vec<usize>> = given
            .iter()
            .map(|c| {
                let mut s = c.clone();
                s.sort_unstable();
                s
            })
            .collect();
        g_sets.sort();
        let mut found = images.clone();
        found.sort();
        if g_sets != found {
            return Err(Error::Precondition(
                "given copies do not match the induced copies of the pattern".into(),
            ));
        }
    }
    let homogeneous = h.is_homogeneous();
    let degree = if homogeneous { h.n() } else { h.n() - 1 };
    let alpha = resolve_alpha(Some(alpha), degree)?;
    let mut groups = Vec::new();
    for map in &copies {
        if homogeneous {
            groups.push(vec![Mod1Constraint::new(
                map.iter().map(|&v| (v, 1)).collect(),
                map[0],
                alpha,
            )?]);
        } else {
            let group = h
                .edges()
                .into_iter()
                .map(|(a, b)| edge_constraint(map, (map[a], map[b]), alpha))
                .collect::<Result<Vec<_>>>()?;
            groups.push(group);
        }
    }
    let count = groups.len();
    Ok((ConstraintSet::new(g.n(), groups)?, alpha, count))
}

/// The central path of a double broom, in path order from the lower-index end.
fn broom_path(g: &Graph) -> Result<Vec<usize>> {
    let err = || Error::Precondition("graph is not a double broom with central path of >= 3 vertices".into());
    if !g.is_forest() || !g.is_connected() {
        return Err(err());
    }
    let inner: Vec<usize> = g.vertices().filter(|&v| g.degree(v) >= 2).collect();
    if inner.len() < 3 {
        return Err(err());
    }
    let inner_deg = |v: usize| g.neighbors(v).filter(|w| inner.contains(w)).count();
    let ends: Vec<usize> = inner.iter().copied().filter(|&v| inner_deg(v) == 1).collect();
    if ends.len() != 2 || inner.iter().any(|&v| inner_deg(v) > 2) {
        return Err(err());
    }
    // leaves may hang only off the two ends
    if inner
        .iter()
        .any(|&v| !ends.contains(&v) && g.degree(v) != inner_deg(v))
    {
        return Err(err());
    }
    let mut path = vec![ends[0]];
    while path.len() < inner.len() {
        let last = *path.last().expect("nonempty");
        let next = g
            .neighbors(last)
            .find(|w| inner.contains(w) && !path.contains(w))
            .ok_or_else(err)?;
        path.push(next);
    }
    Ok(path)
}

/// One all-plus constraint per induced 4-cycle, pivoting on its largest
/// vertex that lies on no other 4-cycle.
fn four_cycle_constraints(g: &Graph, alpha: f64) -> Result<Vec<Vec<Mod1Constraint>>> {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    if g.n() >= 4 {
        for e in enumerate_embeddings_with_cap(&cycle(4), g, g.n())? {
            let img = e.image();
            if !cycles.contains(&img) {
                cycles.push(img);
            }
        }
    }
    let mut groups = Vec::new();
    for (i, c) in cycles.iter().enumerate() {
        let pivot = c
            .iter()
            .rev()
            .copied()
            .find(|v| cycles.iter().enumerate().all(|(j, d)| j == i || !d.contains(v)))
            .ok_or_else(|| {
                Error::Precondition(format!("4-cycle {c:?} has no private vertex"))
            })?;
        groups.push(vec![Mod1Constraint::new(
            c.iter().map(|&v| (v, 1)).collect(),
            pivot,
            alpha,
        )?]);
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn spec_json() {
        let s = SamplerSpec::spectral(Param::Auto, 7);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"kind":"spectral","epsilon":"auto","seed":7}"#);
        assert_eq!(serde_json::from_str::<SamplerSpec>(&j).unwrap(), s);
        let m: SamplerSpec = serde_json::from_str(r#"{"kind":"mod1_edge","alpha":0.3}"#).unwrap();
        assert_eq!(m.alpha, Some(Param::Value(0.3)));
    }

    #[test]
    fn parameters_match_kind() {
        assert!(SamplerSpec::uniform(0).validate().is_ok());
        let mut s = SamplerSpec::uniform(0);
        s.alpha = Some(Param::Auto);
        assert!(s.validate().is_err());
        let mut s = SamplerSpec::mod1_edge(Param::Auto, 0);
        s.alpha = None;
        assert!(s.validate().is_err());
        assert!(SamplerSpec::mod1_edge(Param::Value(1.5), 0).validate().is_err());
        for k in SamplerKind::ALL {
            let mut s = SamplerSpec::with_defaults(k, 0);
            if k == SamplerKind::DisjointCopies {
                s.copy_pattern = Some(CopyPattern {
                    pattern: complete(2),
                    copies: None,
                });
            }
            assert!(s.validate().is_ok(), "{k:?}");
            assert_eq!(SamplerKind::from_name(k.name()).unwrap(), k);
        }
    }

    #[test]
    fn ordering_from_keys() {
        let o = VertexOrdering::from_keys(&[0.5, 0.1, 0.5, 0.3]);
        assert_eq!(o.order(), vec![1, 3, 0, 2]);
        assert_eq!(o.rank, vec![2, 0, 3, 1]);
        assert!(o.precedes(0, 2));
        assert_eq!(count_ties(&[0.5, 0.1, 0.5, 0.3]), 1);
    }

    #[test]
    fn preconditions() {
        let p3 = path(3);
        assert!(PreparedSampler::prepare(&SamplerSpec::block(0), &p3).is_ok());
        assert!(matches!(
            PreparedSampler::prepare(&SamplerSpec::block(0), &path(4)),
            Err(Error::Precondition(_))
        ));
        assert!(PreparedSampler::prepare(&SamplerSpec::mod1_edge(Param::Auto, 0), &Graph::empty(3)).is_err());
        assert!(PreparedSampler::prepare(&SamplerSpec::spectral(Param::Value(0.5), 0), &p3).is_err());
        assert!(PreparedSampler::prepare(&SamplerSpec::double_broom(Param::Value(0.3), 0), &double_broom(3, 2, 2)).is_err());
        assert!(PreparedSampler::prepare(&SamplerSpec::double_broom(Param::Auto, 0), &path(4)).is_err());
        let overlapping = SamplerSpec::disjoint_copies(Graph::empty(2), Param::Auto, 0);
        assert!(PreparedSampler::prepare(&overlapping, &Graph::empty(3)).is_err());
    }

    #[test]
    fn resolved_defaults() {
        let db = PreparedSampler::prepare(&SamplerSpec::double_broom(Param::Auto, 0), &double_broom(3, 10, 10)).unwrap();
        assert_eq!(db.resolved_alpha(), Some(0.5));
        let sp = PreparedSampler::prepare(&SamplerSpec::spectral(Param::Auto, 0), &path(3)).unwrap();
        assert_eq!(sp.resolved_epsilon(), Some(0.25));
        let m = PreparedSampler::prepare(&SamplerSpec::mod1_edge(Param::Auto, 0), &path(3)).unwrap();
        assert_eq!(m.resolved_alpha(), Some(auto_alpha(2).unwrap()));
    }

    #[test]
    fn seed_determinism() {
        let g = bull();
        for k in [SamplerKind::Uniform, SamplerKind::Spectral, SamplerKind::Mod1Edge] {
            let s = SamplerSpec::with_defaults(k, 99);
            let a = PreparedSampler::prepare(&s, &g).unwrap().orderings(50);
            let b = PreparedSampler::prepare(&s, &g).unwrap().orderings(50);
            assert_eq!(a, b);
            let c = PreparedSampler::prepare(&s.clone().with_seed(100), &g).unwrap().orderings(50);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn congruences_hold_on_every_draw() {
        let cases = [
            (SamplerSpec::mod1_edge(Param::Value(0.3), 0), path(4)),
            (SamplerSpec::mod1_edge(Param::Auto, 0), complete(2)),
            (SamplerSpec::disjoint_copies(complete(2), Param::Value(0.0), 0), complete(2).disjoint_union(&Graph::empty(1))),
            (SamplerSpec::disjoint_copies(path(3), Param::Auto, 0), path(3).disjoint_union(&path(3))),
            (SamplerSpec::double_broom(Param::Auto, 0), double_broom(4, 2, 3)),
            (SamplerSpec::flower(Param::Value(0.2), 0), flower(3)),
        ];
        let mut r = rng(1);
        for (spec, g) in cases {
            let s = PreparedSampler::prepare(&spec, &g).unwrap();
            for _ in 0..2000 {
                let lv = s.sample_latent(&mut r);
                assert!(!lv.constraints.is_empty());
                for c in &lv.constraints {
                    assert!(c.residual(&lv.x) < 1e-12, "{spec:?}");
                }
                assert!(lv.x.iter().all(|v| (0.0..1.0).contains(v)));
            }
        }
    }

    #[test]
    fn block_contiguity() {
        let g = complete(2).disjoint_union(&Graph::empty(1));
        let s = PreparedSampler::prepare(&SamplerSpec::block(0), &g).unwrap();
        let mut r = rng(3);
        for _ in 0..1000 {
            let o = s.sample_ordering(&mut r);
            assert_ne!(o.rank[2], 1, "b between a1 and a2");
        }
    }

    #[test]
    fn flower_pivots_avoid_center() {
        let groups = four_cycle_constraints(&flower(2), 0.1).unwrap();
        assert_eq!(groups.len(), 2);
        assert!(groups.iter().all(|g| g[0].pivot != 0));
        assert!(four_cycle_constraints(&path(3).disjoint_union(&path(3)), 0.1).unwrap().is_empty());
        assert!(four_cycle_constraints(&complete_multipartite(&[2, 3]), 0.1).is_err());
    }

    #[test]
    fn broom_path_detection() {
        assert_eq!(broom_path(&double_broom(3, 2, 1)).unwrap(), vec![0, 1, 2]);
        assert_eq!(broom_path(&double_broom(5, 1, 1)).unwrap().len(), 5);
        assert!(broom_path(&star(3)).is_err());
        assert!(broom_path(&cycle(5)).is_err());
    }
}
