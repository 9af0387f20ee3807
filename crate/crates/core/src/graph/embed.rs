//! Induced-subgraph embeddings by backtracking.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Default bound on the target order for [`enumerate_embeddings`].
pub const DEFAULT_EMBEDDING_CAP: usize = 12;

/// An injective map `source vertex -> target vertex` realising the source
/// as an induced subgraph of the target.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img
    }

    /// Check injectivity and the induced-edge condition.
    pub fn is_valid(&self, source: &Graph, target: &Graph) -> bool {
        if self.map.len() != source.n() || self.map.iter().any(|&v| v >= target.n()) {
            return false;
        }
        for i in 0..self.map.len() {
            for j in i + 1..self.map.len() {
                if self.map[i] == self.map[j]
                    || source.has_edge(i, j) != target.has_edge(self.map[i], self.map[j])
                {
                    return false;
                }
            }
        }
        true
    }
}

pub fn enumerate_embeddings(pattern: &Graph, target: &Graph) -> Result<Vec<Embedding>> {
    enumerate_embeddings_with_cap(pattern, target, DEFAULT_EMBEDDING_CAP)
}

/// Every induced embedding of `pattern` into `target`, each exactly once,
/// in lexicographic order of the map.
pub fn enumerate_embeddings_with_cap(
    pattern: &Graph,
    target: &Graph,
    cap: usize,
) -> Result<Vec<Embedding>> {
    if target.n() > cap {
        return Err(Error::CapExceeded {
            size: target.n(),
            cap,
        });
    }
    let mut out = Vec::new();
    search(pattern, target, false, &mut |m| {
        out.push(Embedding { map: m.to_vec() });
        true
    });
    Ok(out)
}

/// All isomorphisms `a -> b` (empty if the graphs are not isomorphic).
pub fn isomorphisms(a: &Graph, b: &Graph) -> Vec<Embedding> {
    if !same_invariants(a, b) {
        return Vec::new();
    }
    let mut out = Vec::new();
    search(a, b, true, &mut |m| {
        out.push(Embedding { map: m.to_vec() });
        true
    });
    out
}

/// Whether `target` has an induced subgraph isomorphic to `pattern`.
pub fn has_induced_copy(pattern: &Graph, target: &Graph) -> bool {
    let mut found = false;
    search(pattern, target, false, &mut |_| {
        found = true;
        false
    });
    found
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if !same_invariants(a, b) {
        return false;
    }
    let mut found = false;
    search(a, b, true, &mut |_| {
        found = true;
        false
    });
    found
}

fn degree_sequence(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d
}

fn same_invariants(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && degree_sequence(a) == degree_sequence(b)
}

/// Backtracking over pattern vertices in index order. `visit` returns
/// `false` to stop the search.
fn search(
    pattern: &Graph,
    target: &Graph,
    degree_match: bool,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let k = pattern.n();
    if k > target.n() {
        return;
    }
    let mut map = Vec::with_capacity(k);
    let mut used = vec![false; target.n()];
    fn go(
        pattern: &Graph,
        target: &Graph,
        degree_match: bool,
        map: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let i = map.len();
        if i == pattern.n() {
            return visit(map);
        }
        for cand in 0..target.n() {
            if used[cand] {
                continue;
            }
            if degree_match && pattern.degree(i) != target.degree(cand) {
                continue;
            }
            let consistent = map
                .iter()
                .enumerate()
                .all(|(j, &m)| pattern.has_edge(i, j) == target.has_edge(cand, m));
            if !consistent {
                continue;
            }
            used[cand] = true;
            map.push(cand);
            let keep_going = go(pattern, target, degree_match, map, used, visit);
            map.pop();
            used[cand] = false;
            if !keep_going {
                return false;
            }
        }
        true
    }
    go(pattern, target, degree_match, &mut map, &mut used, visit);
}

/// A canonical code for graphs of order at most 11: the lexicographically
/// smallest upper-triangle adjacency word over all relabelings that list
/// vertices by non-increasing degree.
pub fn canonical_form(g: &Graph) -> Result<u64> {
    let n = g.n();
    if n > 11 {
        return Err(Error::CapExceeded { size: n, cap: 11 });
    }
    let deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut best = u64::MAX;
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn code(g: &Graph, perm: &[usize]) -> u64 {
        let mut c = 0u64;
        for j in 1..perm.len() {
            for i in 0..j {
                c = c << 1 | g.has_edge(perm[i], perm[j]) as u64;
            }
        }
        c
    }
    fn go(g: &Graph, deg: &[usize], perm: &mut Vec<usize>, used: &mut [bool], best: &mut u64) {
        if perm.len() == g.n() {
            *best = (*best).min(code(g, perm));
            return;
        }
        let target = (0..g.n())
            .filter(|&v| !used[v])
            .map(|v| deg[v])
            .max()
            .expect("unused vertex remains");
        for v in 0..g.n() {
            if used[v] || deg[v] != target {
                continue;
            }
            used[v] = true;
            perm.push(v);
            go(g, deg, perm, used, best);
            perm.pop();
            used[v] = false;
        }
    }
    if n == 0 {
        return Ok(0);
    }
    go(g, &deg, &mut perm, &mut used, &mut best);
    // distinguish orders: the code alone does not encode n
    Ok(best | (n as u64) << 58)
}
