//! Edge-list and graph6 text formats.
//!
//! Edge-list is the canonical format: a header line with the vertex count
//! followed by one `u v` pair per line, 0-indexed. Blank lines and lines
//! starting with `#` are ignored. graph6 is accepted on input only.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    EdgeList,
    Graph6,
}

impl GraphFormat {
    /// Edge-list if the first meaningful line is an integer, graph6 otherwise.
    pub fn detect(text: &str) -> GraphFormat {
        match meaningful_lines(text).next() {
            Some((_, line)) if line.parse::<usize>().is_ok() => GraphFormat::EdgeList,
            Some(_) => GraphFormat::Graph6,
            None => GraphFormat::EdgeList,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    DuplicateEdge { line: usize, u: usize, v: usize },
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub graph: Graph,
    pub warnings: Vec<ParseWarning>,
}

fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Parsed> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Graph6 => parse_graph6(text).map(|graph| Parsed {
            graph,
            warnings: Vec::new(),
        }),
    }
}

fn parse_edge_list(text: &str) -> Result<Parsed> {
    let mut lines = meaningful_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing vertex-count header".into(),
    })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line: hline,
        message: format!("malformed header `{header}`"),
    })?;
    let mut graph = Graph::empty(n);
    let mut seen = BTreeSet::new();
    let mut warnings = Vec::new();
    for (lineno, line) in lines {
        let mut it = line.split_whitespace();
        let parse_idx = |tok: Option<&str>| -> Result<usize> {
            tok.and_then(|t| t.parse().ok()).ok_or(Error::Parse {
                line: lineno,
                message: format!("expected `u v`, got `{line}`"),
            })
        };
        let u = parse_idx(it.next())?;
        let v = parse_idx(it.next())?;
        if it.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("trailing tokens in `{line}`"),
            });
        }
        graph.check_vertex(u)?;
        graph.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            warnings.push(ParseWarning::DuplicateEdge { line: lineno, u, v });
            continue;
        }
        graph.set_edge(u, v, true);
    }
    Ok(Parsed { graph, warnings })
}

fn parse_graph6(text: &str) -> Result<Graph> {
    let (lineno, line) = meaningful_lines(text).next().ok_or(Error::Parse {
        line: 1,
        message: "empty graph6 input".into(),
    })?;
    let body = line.strip_prefix(">>graph6<<").unwrap_or(line).as_bytes();
    let err = |message: String| Error::Parse { line: lineno, message };
    let (&first, rest) = body.split_first().ok_or_else(|| err("empty graph6 string".into()))?;
    if first == b'~' {
        return Err(err("graph6 orders above 62 are not supported".into()));
    }
    if !(63..=126).contains(&first) {
        return Err(err(format!("invalid graph6 size byte {first}")));
    }
    let n = (first - 63) as usize;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if rest.len() != expected {
        return Err(err(format!(
            "graph6 body has {} bytes, expected {expected} for n={n}",
            rest.len()
        )));
    }
    let mut graph = Graph::empty(n);
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = rest[k / 6];
            if !(63..=126).contains(&byte) {
                return Err(err(format!("invalid graph6 byte {byte}")));
            }
            if (byte - 63) >> (5 - k % 6) & 1 == 1 {
                graph.set_edge(i, j, true);
            }
            k += 1;
        }
    }
    Ok(graph)
}

pub fn to_edge_list(graph: &Graph) -> String {
    let mut s = format!("{}\n", graph.n());
    for (u, v) in graph.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}
