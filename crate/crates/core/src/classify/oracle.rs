//! Membership oracles for hereditary properties.

use std::fmt;

use rustworkx_core::petgraph::graph::UnGraph;
use rustworkx_core::planar::is_planar;

use crate::error::{Error, Result};
use crate::graph::{Graph, has_induced_copy, named};

/// Largest graph an oracle is asked about unless it says otherwise.
pub const DEFAULT_ORACLE_CAP: usize = 64;

/// Decides membership in a hereditary property for graphs up to a size cap.
/// Implementations must be re-entrant; checks may run in parallel.
pub trait MembershipOracle: Send + Sync {
    fn name(&self) -> String;

    fn contains(&self, g: &Graph) -> bool;

    fn cap(&self) -> usize {
        DEFAULT_ORACLE_CAP
    }

    /// A degree bound every member satisfies, when the property declares one.
    fn max_degree(&self) -> Option<usize> {
        None
    }
}

impl fmt::Debug for dyn MembershipOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MembershipOracle({})", self.name())
    }
}

/// Membership with the oracle's size cap enforced.
pub fn member(oracle: &dyn MembershipOracle, g: &Graph) -> Result<bool> {
    if g.n() > oracle.cap() {
        return Err(Error::CapExceeded {
            size: g.n(),
            cap: oracle.cap(),
        });
    }
    Ok(oracle.contains(g))
}

#[derive(Debug, Clone, Copy)]
pub struct AllGraphs;

impl MembershipOracle for AllGraphs {
    fn name(&self) -> String {
        "all-graphs".into()
    }
    fn contains(&self, _: &Graph) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Forests;

impl MembershipOracle for Forests {
    fn name(&self) -> String {
        "forests".into()
    }
    fn contains(&self, g: &Graph) -> bool {
        g.is_forest()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TriangleFree;

impl MembershipOracle for TriangleFree {
    fn name(&self) -> String {
        "triangle-free".into()
    }
    fn contains(&self, g: &Graph) -> bool {
        !has_induced_copy(&named::complete(3), g)
    }
}

pub fn is_bipartite(g: &Graph) -> bool {
    let mut side: Vec<Option<bool>> = vec![None; g.n()];
    for s in g.vertices() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            let sx = side[x].expect("colored");
            for y in g.neighbors(x) {
                match side[y] {
                    None => {
                        side[y] = Some(!sx);
                        stack.push(y);
                    }
                    Some(sy) if sy == sx => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy)]
pub struct Bipartite;

impl MembershipOracle for Bipartite {
    fn name(&self) -> String {
        "bipartite".into()
    }
    fn contains(&self, g: &Graph) -> bool {
        is_bipartite(g)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Planar;

impl MembershipOracle for Planar {
    fn name(&self) -> String {
        "planar".into()
    }
    fn contains(&self, g: &Graph) -> bool {
        let mut pg = UnGraph::<(), ()>::with_capacity(g.n(), g.edge_count());
        let nodes: Vec<_> = g.vertices().map(|_| pg.add_node(())).collect();
        for (u, v) in g.edges() {
            pg.add_edge(nodes[u], nodes[v], ());
        }
        is_planar(&pg)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BoundedDegree(pub usize);

impl MembershipOracle for BoundedDegree {
    fn name(&self) -> String {
        format!("bounded-degree:{}", self.0)
    }
    fn contains(&self, g: &Graph) -> bool {
        g.max_degree() <= self.0
    }
    fn max_degree(&self) -> Option<usize> {
        Some(self.0)
    }
}

/// Whether every component of `g - c` is a piece of a four-cycle petal
/// through `c`: a single vertex, an edge with exactly one end adjacent to
/// `c`, or a three-vertex path whose ends (only) are adjacent to `c`.
fn petals_around(g: &Graph, c: usize) -> bool {
    let rest: Vec<usize> = g.vertices().filter(|&v| v != c).collect();
    let h = g.induced_unchecked(&rest);
    h.components().iter().all(|comp| {
        let adj: Vec<bool> = comp.iter().map(|&i| g.has_edge(c, rest[i])).collect();
        match comp.len() {
            1 => true,
            2 => adj[0] != adj[1],
            3 => {
                let mid = comp.iter().position(|&i| h.degree(i) == 2);
                comp.iter().map(|&i| h.degree(i)).sum::<usize>() == 4
                    && mid.is_some_and(|m| adj.iter().enumerate().all(|(i, &a)| a == (i != m)))
            }
            _ => false,
        }
    })
}

/// Induced subgraphs of some flower: four-cycles sharing one vertex.
pub fn is_flower_subgraph(g: &Graph) -> bool {
    let paths = g.components().iter().all(|c| {
        c.len() <= 3 && g.induced_unchecked(c).edge_count() == c.len() - 1
    });
    paths || g.vertices().any(|c| petals_around(g, c))
}

#[derive(Debug, Clone, Copy)]
pub struct Flowers;

impl MembershipOracle for Flowers {
    fn name(&self) -> String {
        "flowers".into()
    }
    fn contains(&self, g: &Graph) -> bool {
        is_flower_subgraph(g)
    }
}

/// Disjoint unions of induced subgraphs of flowers.
#[derive(Debug, Clone, Copy)]
pub struct FlowerUnions;

impl MembershipOracle for FlowerUnions {
    fn name(&self) -> String {
        "flower-unions".into()
    }
    fn contains(&self, g: &Graph) -> bool {
        g.components()
            .iter()
            .all(|c| is_flower_subgraph(&g.induced_unchecked(c)))
    }
}

/// Induced subgraphs of stars: stars `K_{1,n}` and edgeless graphs.
#[derive(Debug, Clone, Copy)]
pub struct Stars;

impl MembershipOracle for Stars {
    fn name(&self) -> String {
        "stars".into()
    }
    fn contains(&self, g: &Graph) -> bool {
        g.edge_count() == 0
            || g.vertices()
                .any(|c| g.degree(c) == g.n() - 1 && g.edge_count() == g.n() - 1)
    }
}

/// `K_{1,n} ∪ K̄_m`: every edge shares one common vertex.
#[derive(Debug, Clone, Copy)]
pub struct StarPlusEmpty;

impl MembershipOracle for StarPlusEmpty {
    fn name(&self) -> String {
        "star-plus-empty".into()
    }
    fn contains(&self, g: &Graph) -> bool {
        let edges = g.edges();
        edges.is_empty() || g.vertices().any(|c| edges.iter().all(|&(a, b)| a == c || b == c))
    }
}

/// Graphs on at most `k` vertices.
#[derive(Debug, Clone, Copy)]
pub struct MaxOrder(pub usize);

impl MembershipOracle for MaxOrder {
    fn name(&self) -> String {
        format!("max-order:{}", self.0)
    }
    fn contains(&self, g: &Graph) -> bool {
        g.n() <= self.0
    }
}

/// Graphs with no induced subgraph isomorphic to a member of the family.
#[derive(Debug, Clone)]
pub struct FamilyFree {
    pub family: Vec<Graph>,
    pub cap: usize,
}

impl FamilyFree {
    pub fn new(family: Vec<Graph>) -> Self {
        let largest = family.iter().map(Graph::n).max().unwrap_or(0);
        FamilyFree {
            family,
            cap: DEFAULT_ORACLE_CAP.max(largest),
        }
    }
}

impl MembershipOracle for FamilyFree {
    fn name(&self) -> String {
        format!("free-of-{}", self.family.len())
    }
    fn contains(&self, g: &Graph) -> bool {
        !self.family.iter().any(|h| has_induced_copy(h, g))
    }
    fn cap(&self) -> usize {
        self.cap
    }
}

/// An oracle from a closure.
pub struct FnOracle<F> {
    pub name: String,
    pub cap: usize,
    pub f: F,
}

impl<F: Fn(&Graph) -> bool + Send + Sync> FnOracle<F> {
    pub fn new(name: &str, cap: usize, f: F) -> Self {
        FnOracle {
            name: name.to_string(),
            cap,
            f,
        }
    }
}

impl<F: Fn(&Graph) -> bool + Send + Sync> MembershipOracle for FnOracle<F> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn contains(&self, g: &Graph) -> bool {
        (self.f)(g)
    }
    fn cap(&self) -> usize {
        self.cap
    }
}

pub const BUILTIN_ORACLES: [&str; 11] = [
    "all-graphs",
    "forests",
    "triangle-free",
    "bipartite",
    "planar",
    "bounded-degree:D",
    "flowers",
    "flower-unions",
    "stars",
    "star-plus-empty",
    "max-order:K",
];

/// Look up a built-in oracle by name.
pub fn builtin_oracle(name: &str) -> Result<Box<dyn MembershipOracle>> {
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("bad number in oracle name `{name}`")))
    };
    Ok(match name {
        "all-graphs" => Box::new(AllGraphs),
        "forests" => Box::new(Forests),
        "triangle-free" => Box::new(TriangleFree),
        "bipartite" => Box::new(Bipartite),
        "planar" => Box::new(Planar),
        "flowers" => Box::new(Flowers),
        "flower-unions" => Box::new(FlowerUnions),
        "stars" => Box::new(Stars),
        "star-plus-empty" => Box::new(StarPlusEmpty),
        _ => {
            if let Some(d) = name.strip_prefix("bounded-degree:") {
                Box::new(BoundedDegree(num(d)?))
            } else if let Some(k) = name.strip_prefix("max-order:") {
                Box::new(MaxOrder(num(k)?))
            } else {
                return Err(Error::InvalidArgument(format!(
                    "unknown oracle `{name}`; known: {}",
                    BUILTIN_ORACLES.join(", ")
                )));
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn flower_membership() {
        assert!(is_flower_subgraph(&flower(3)));
        assert!(is_flower_subgraph(&cycle(4)));
        assert!(is_flower_subgraph(&path(3).disjoint_union(&path(3))));
        assert!(is_flower_subgraph(&flower(2).disjoint_union(&Graph::empty(3))));
        assert!(!is_flower_subgraph(&flower(1).disjoint_union(&flower(1))));
        assert!(is_flower_subgraph(&path(4).disjoint_union(&Graph::empty(1))));
        assert!(!is_flower_subgraph(&path(6)));
        assert!(!is_flower_subgraph(&complete(3)));
        assert!(!is_flower_subgraph(&cycle(5)));
        assert!(!is_flower_subgraph(&complete_multipartite(&[2, 3])));
        // every induced subgraph of a flower is accepted
        let f = flower(2);
        for mask in 0u32..(1 << f.n()) {
            let s: Vec<usize> = (0..f.n()).filter(|i| mask >> i & 1 == 1).collect();
            assert!(is_flower_subgraph(&f.induced_unchecked(&s)), "{s:?}");
        }
        assert!(FlowerUnions.contains(&flower(1).disjoint_union(&flower(2))));
    }

    #[test]
    fn simple_oracles() {
        assert!(Bipartite.contains(&cycle(6)));
        assert!(!Bipartite.contains(&cycle(5)));
        assert!(Planar.contains(&complete(4)));
        assert!(!Planar.contains(&complete(5)));
        assert!(!Planar.contains(&complete_multipartite(&[3, 3])));
        assert!(TriangleFree.contains(&cycle(4)));
        assert!(Stars.contains(&star(4)) && Stars.contains(&Graph::empty(3)));
        assert!(!Stars.contains(&star(2).disjoint_union(&Graph::empty(1))));
        assert!(StarPlusEmpty.contains(&star(2).disjoint_union(&Graph::empty(1))));
        assert!(!StarPlusEmpty.contains(&path(4)));
        assert_eq!(BoundedDegree(2).max_degree(), Some(2));
        assert!(matches!(member(&MaxOrder(3), &Graph::empty(70)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn builtin_names() {
        for name in ["forests", "triangle-free", "bipartite", "planar", "bounded-degree:3", "flowers"] {
            assert_eq!(builtin_oracle(name).unwrap().name(), name);
        }
        assert!(builtin_oracle("bounded-degree:x").is_err());
        assert!(builtin_oracle("chordal").is_err());
    }
}
