use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwinStatus {
    AdjacentTwins,
    NonadjacentTwins,
    NotTwins,
}

/// Whether `u` and `v` have the same neighbourhood outside `{u, v}`.
pub fn twin_status(g: &Graph, u: usize, v: usize) -> Result<TwinStatus> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::InvalidArgument("twin_status needs distinct vertices".into()));
    }
    let same = g
        .vertices()
        .filter(|&w| w != u && w != v)
        .all(|w| g.has_edge(u, w) == g.has_edge(v, w));
    Ok(match (same, g.has_edge(u, v)) {
        (false, _) => TwinStatus::NotTwins,
        (true, true) => TwinStatus::AdjacentTwins,
        (true, false) => TwinStatus::NonadjacentTwins,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    /// Complete or edgeless.
    pub homogeneous: bool,
    /// Every connected component is a clique.
    pub clique_union: bool,
    /// The complement is a clique union.
    pub complete_multipartite: bool,
    /// At least 3 vertices, connected, no cut vertex.
    pub two_connected: bool,
    pub forest: bool,
    pub max_degree: usize,
    /// Vertices adjacent to a leaf.
    pub leaf_support: Vec<usize>,
}

impl Graph {
    pub fn is_clique_union(&self) -> bool {
        self.components().iter().all(|c| {
            c.iter()
                .enumerate()
                .all(|(i, &a)| c[i + 1..].iter().all(|&b| self.has_edge(a, b)))
        })
    }

    pub fn is_complete_multipartite(&self) -> bool {
        self.complement().is_clique_union()
    }

    pub fn is_homogeneous(&self) -> bool {
        let m = self.edge_count();
        m == 0 || m == self.n() * self.n().saturating_sub(1) / 2
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.n()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_two_connected(&self) -> bool {
        self.n() >= 3 && self.is_connected() && self.articulation_points().is_empty()
    }

    /// Cut vertices by the DFS lowpoint method.
    pub fn articulation_points(&self) -> Vec<usize> {
        let n = self.n();
        let adj: Vec<Vec<usize>> = self.vertices().map(|v| self.neighbors(v).collect()).collect();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut time = 0usize;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, parent, next neighbour index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            let mut root_children = 0;
            while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
                if *next < adj[v].len() {
                    let w = adj[v][*next];
                    *next += 1;
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, v, 0));
                    } else if w != parent {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[v]);
                        if parent != root && low[v] >= disc[parent] {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }

    pub fn leaf_support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .vertices()
            .filter(|&v| self.degree(v) == 1)
            .flat_map(|leaf| self.neighbors(leaf).collect::<Vec<_>>())
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.vertices().filter(|&v| self.degree(v) == 1).collect()
    }
}

pub fn structure_report(g: &Graph) -> StructureReport {
    StructureReport {
        homogeneous: g.is_homogeneous(),
        clique_union: g.is_clique_union(),
        complete_multipartite: g.is_complete_multipartite(),
        two_connected: g.is_two_connected(),
        forest: g.is_forest(),
        max_degree: g.max_degree(),
        leaf_support: g.leaf_support(),
    }
}
