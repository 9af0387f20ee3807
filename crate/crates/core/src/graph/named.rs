//! Small named graph families and a compact name syntax for them.

use super::Graph;
use crate::error::{Error, Result};

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.set_edge(u, v, true);
        }
    }
    g
}

pub fn path(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for v in 1..n {
        g.set_edge(v - 1, v, true);
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let mut g = path(n);
    g.set_edge(n - 1, 0, true);
    g
}

/// `K_{1,k}` with center 0.
pub fn star(k: usize) -> Graph {
    let mut g = Graph::empty(k + 1);
    for v in 1..=k {
        g.set_edge(0, v, true);
    }
    g
}

pub fn complete_multipartite(parts: &[usize]) -> Graph {
    let n = parts.iter().sum();
    let mut label = Vec::with_capacity(n);
    for (i, &p) in parts.iter().enumerate() {
        label.extend(std::iter::repeat_n(i, p));
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if label[u] != label[v] {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// Triangle 0-1-2 with pendant vertices 3 (on 1) and 4 (on 2).
pub fn bull() -> Graph {
    Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (1, 3), (2, 4)]).expect("static edges")
}

/// Path `u_1..u_n` on vertices `0..n`, `left` leaves on vertex 0 and
/// `right` leaves on vertex `n - 1`. Leaves follow the path in that order.
pub fn double_broom(path_len: usize, left: usize, right: usize) -> Graph {
    assert!(path_len >= 2);
    let mut g = Graph::empty(path_len + left + right);
    for v in 1..path_len {
        g.set_edge(v - 1, v, true);
    }
    for i in 0..left {
        g.set_edge(0, path_len + i, true);
    }
    for i in 0..right {
        g.set_edge(path_len - 1, path_len + left + i, true);
    }
    g
}

/// `[C4]^k_{u}`: `k` four-cycles sharing the center vertex 0. Petal `i` is
/// `0 - (3i+1) - (3i+2) - (3i+3) - 0`.
pub fn flower(petals: usize) -> Graph {
    let mut g = Graph::empty(1 + 3 * petals);
    for i in 0..petals {
        let (a, b, c) = (3 * i + 1, 3 * i + 2, 3 * i + 3);
        g.set_edge(0, a, true);
        g.set_edge(a, b, true);
        g.set_edge(b, c, true);
        g.set_edge(c, 0, true);
    }
    g
}

/// Parse a graph name.
///
/// Terms are joined by `+` for disjoint union; a `co-` prefix complements a
/// term. Recognised terms: `Pn`, `Cn`, `Kn`, `En` (edgeless), `Sk` (star
/// `K_{1,k}`), `Ka,b,..` (complete multipartite), `bull`, `flowerK`,
/// `broomN:L:R`.
pub fn from_name(name: &str) -> Result<Graph> {
    let mut out: Option<Graph> = None;
    for term in name.split('+') {
        let g = parse_term(term.trim())?;
        out = Some(match out {
            None => g,
            Some(acc) => acc.disjoint_union(&g),
        });
    }
    out.ok_or_else(|| bad(name))
}

fn bad(name: &str) -> Error {
    Error::InvalidArgument(format!("unknown graph name `{name}`"))
}

fn parse_term(term: &str) -> Result<Graph> {
    if let Some(rest) = term.strip_prefix("co-") {
        return Ok(parse_term(rest)?.complement());
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad(term));
    if term == "bull" {
        return Ok(bull());
    }
    if let Some(k) = term.strip_prefix("flower") {
        return Ok(flower(num(k)?));
    }
    if let Some(spec) = term.strip_prefix("broom") {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(term));
        }
        let n = num(parts[0])?;
        if n < 2 {
            return Err(bad(term));
        }
        return Ok(double_broom(n, num(parts[1])?, num(parts[2])?));
    }
    let (head, tail) = term.split_at(term.chars().next().map_or(0, char::len_utf8));
    match head {
        "P" => Ok(path(num(tail)?)),
        "C" => {
            let n = num(tail)?;
            if n < 3 {
                return Err(bad(term));
            }
            Ok(cycle(n))
        }
        "E" => Ok(Graph::empty(num(tail)?)),
        "S" => Ok(star(num(tail)?)),
        "K" if tail.contains(',') => {
            let parts = tail.split(',').map(num).collect::<Result<Vec<_>>>()?;
            Ok(complete_multipartite(&parts))
        }
        "K" => Ok(complete(num(tail)?)),
        _ => Err(bad(term)),
    }
}
