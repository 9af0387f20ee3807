//! Finite simple undirected graphs on dense vertex indices `0..n`.
//!
//! Adjacency is stored as one bitset row per vertex so edge tests are
//! constant time. A [`Graph`] is immutable once built; all constructions
//! return new graphs.

mod embed;
mod io;
pub mod named;
mod structure;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use embed::{
    are_isomorphic, canonical_form, has_induced_copy, enumerate_embeddings, enumerate_embeddings_with_cap,
    isomorphisms, Embedding, DEFAULT_EMBEDDING_CAP,
};
pub use io::{parse_graph, to_edge_list, GraphFormat, ParseWarning, Parsed};
pub use structure::{structure_report, twin_status, StructureReport, TwinStatus};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(WORD).max(1);
        Graph {
            n,
            words,
            rows: vec![0; words * n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&w| self.has_edge(v, w))
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        debug_assert!(u != v);
        for (a, b) in [(u, v), (v, u)] {
            let idx = a * self.words + b / WORD;
            let bit = 1u64 << (b % WORD);
            if present {
                self.rows[idx] |= bit;
            } else {
                self.rows[idx] &= !bit;
            }
        }
    }

    /// `G[S]` with vertices relabeled `0..|S|` in ascending original order.
    /// Returns the graph and the relabeling map (new index -> original).
    pub fn induced_subgraph(&self, subset: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        for &v in subset.members() {
            self.check_vertex(v)?;
        }
        let map = subset.members().to_vec();
        Ok((self.induced_unchecked(&map), map))
    }

    /// Induced subgraph on `vertices` in the given order (new index `i` is `vertices[i]`).
    pub(crate) fn induced_unchecked(&self, vertices: &[usize]) -> Graph {
        let mut h = Graph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    h.set_edge(i, j, true);
                }
            }
        }
        h
    }

    pub fn complement(&self) -> Graph {
        let mut h = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    h.set_edge(u, v, true);
                }
            }
        }
        h
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut h = Graph::empty(self.n + other.n);
        for (u, v) in self.edges() {
            h.set_edge(u, v, true);
        }
        for (u, v) in other.edges() {
            h.set_edge(u + self.n, v + self.n, true);
        }
        h
    }

    /// Identify `v1` in `self` with `v2` in `other`.
    ///
    /// The glued vertex keeps index `v1`; the remaining vertices of `other`
    /// follow those of `self` in ascending order.
    pub fn glue_at_vertex(&self, v1: usize, other: &Graph, v2: usize) -> Result<Graph> {
        self.check_vertex(v1)?;
        other.check_vertex(v2)?;
        let map: Vec<usize> = {
            let mut next = self.n;
            (0..other.n)
                .map(|w| {
                    if w == v2 {
                        v1
                    } else {
                        next += 1;
                        next - 1
                    }
                })
                .collect()
        };
        let mut h = Graph::empty(self.n + other.n - 1);
        for (u, v) in self.edges() {
            h.set_edge(u, v, true);
        }
        for (u, v) in other.edges() {
            h.set_edge(map[u], map[v], true);
        }
        Ok(h)
    }

    /// `[G]^copies_H`: `copies` copies of this graph glued along the common
    /// induced subgraph on `shared`.
    ///
    /// Vertices of `shared` keep their original indices relative order and
    /// come first; copy `c` of the private vertices follows in ascending order.
    pub fn replicate_over_subgraph(
        &self,
        shared: &VertexSet,
        copies: usize,
        cap: usize,
    ) -> Result<Graph> {
        for &v in shared.members() {
            self.check_vertex(v)?;
        }
        let h = shared.len();
        if h == 0 || h >= self.n {
            return Err(Error::InvalidArgument(
                "shared subgraph must be a proper nonempty subset".into(),
            ));
        }
        if copies == 0 {
            return Err(Error::InvalidArgument("copies must be at least 1".into()));
        }
        let private: Vec<usize> = (0..self.n).filter(|v| !shared.contains(*v)).collect();
        let size = copies * private.len() + h;
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        let mut index = vec![0usize; self.n];
        for (i, &v) in shared.members().iter().enumerate() {
            index[v] = i;
        }
        let mut out = Graph::empty(size);
        for c in 0..copies {
            for (i, &v) in private.iter().enumerate() {
                index[v] = h + c * private.len() + i;
            }
            for (u, v) in self.edges() {
                out.set_edge(index[u], index[v], true);
            }
        }
        Ok(out)
    }

    /// Replace `v` by `copies` pairwise twin vertices (adjacent or not).
    /// The extra copies are appended after the existing vertices.
    pub fn replace_by_twins(&self, v: usize, copies: usize, adjacent: bool) -> Result<Graph> {
        self.check_vertex(v)?;
        if copies == 0 {
            return Err(Error::InvalidArgument("copies must be at least 1".into()));
        }
        let extra = copies - 1;
        let mut g = Graph::empty(self.n + extra);
        for (a, b) in self.edges() {
            g.set_edge(a, b, true);
        }
        let twins: Vec<usize> = std::iter::once(v).chain(self.n..self.n + extra).collect();
        for &t in &twins[1..] {
            for w in self.neighbors(v) {
                g.set_edge(t, w, true);
            }
        }
        if adjacent {
            for (i, &a) in twins.iter().enumerate() {
                for &b in &twins[i + 1..] {
                    g.set_edge(a, b, true);
                }
            }
        }
        Ok(g)
    }

    /// Connected components, each sorted ascending, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for y in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|u| {
                (0..self.n)
                    .map(|v| if self.has_edge(u, v) { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect()
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            edges: self.edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        Graph::from_edges(repr.n, &repr.edges).map_err(serde::de::Error::custom)
    }
}

/// A sorted, duplicate-free set of vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    /// Construct and check every member is a vertex of `graph`.
    pub fn within(graph: &Graph, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set = VertexSet::new(members);
        for &v in &set.0 {
            graph.check_vertex(v)?;
        }
        Ok(set)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn induced_subgraph_relabels_ascending() {
        let c4 = cycle(4);
        let (h, map) = c4.induced_subgraph(&VertexSet::new([2, 0, 1])).unwrap();
        assert_eq!(map, vec![0, 1, 2]);
        assert!(are_isomorphic(&h, &path(3)));

        let (k1, _) = complete(3).induced_subgraph(&VertexSet::new([0])).unwrap();
        assert_eq!(k1.n(), 1);

        let (leaves, _) = star(3).induced_subgraph(&VertexSet::new([1, 2, 3])).unwrap();
        assert_eq!(leaves, Graph::empty(3));
    }

    #[test]
    fn induced_subgraph_rejects_out_of_range() {
        let err = path(3).induced_subgraph(&VertexSet::new([0, 5])).unwrap_err();
        assert_eq!(err, Error::VertexOutOfRange { vertex: 5, n: 3 });
    }

    #[test]
    fn complement_of_p3() {
        let c = path(3).complement();
        assert!(are_isomorphic(&c, &complete(2).disjoint_union(&Graph::empty(1))));
    }

    #[test]
    fn glue_and_union() {
        let g = complete(2).glue_at_vertex(0, &complete(2), 0).unwrap();
        assert!(are_isomorphic(&g, &path(3)));
        assert_eq!(Graph::empty(1).disjoint_union(&Graph::empty(1)), Graph::empty(2));
    }

    #[test]
    fn replicate_examples() {
        let u = VertexSet::new([0]);
        let two_petals = cycle(4).replicate_over_subgraph(&u, 2, 12).unwrap();
        assert_eq!(two_petals.n(), 7);
        assert_eq!(two_petals.edge_count(), 8);
        assert!(are_isomorphic(&two_petals, &flower(2)));

        let claw = complete(2).replicate_over_subgraph(&u, 3, 12).unwrap();
        assert!(are_isomorphic(&claw, &star(3)));

        let g = bull();
        let same = g.replicate_over_subgraph(&VertexSet::new([1, 2]), 1, 12).unwrap();
        assert!(are_isomorphic(&same, &g));
    }

    #[test]
    fn replicate_errors() {
        let g = cycle(4);
        assert!(matches!(
            g.replicate_over_subgraph(&VertexSet::new([]), 2, 12),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            g.replicate_over_subgraph(&VertexSet::new([0, 1, 2, 3]), 2, 12),
            Err(Error::InvalidArgument(_))
        ));
        assert_eq!(
            g.replicate_over_subgraph(&VertexSet::new([0]), 5, 12),
            Err(Error::CapExceeded { size: 16, cap: 12 })
        );
    }

    #[test]
    fn twin_replacement() {
        let g = complete(2).replace_by_twins(0, 2, false).unwrap();
        assert!(are_isomorphic(&g, &path(3)));
        let g = complete(2).replace_by_twins(0, 2, true).unwrap();
        assert!(are_isomorphic(&g, &complete(3)));
    }

    #[test]
    fn serde_roundtrip() {
        let g = bull();
        let s = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn wide_graphs_use_multiple_words() {
        let g = path(130);
        assert_eq!(g.edge_count(), 129);
        assert!(g.has_edge(64, 65) && g.has_edge(128, 129));
        assert_eq!(g.degree(127), 2);
    }
}
