//! Graphs, families, templates and sampler specs from files or short names.

use std::path::Path;

use ordlab_core::graph::{Graph, GraphFormat, named, parse_graph};
use ordlab_core::sampler::{Param, SamplerKind, SamplerSpec};
use ordlab_core::template::Template;

use crate::CliError;
use crate::args::{Common, SamplerArgs};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// A graph file (edge-list or graph6, detected) or a graph name.
pub fn load_graph(arg: &str) -> Result<Graph, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        return Ok(parse_graph(&text, GraphFormat::detect(&text))?.graph);
    }
    Ok(named::from_name(arg)?)
}

/// Split a family file into graphs. Edge-list blocks start at a line holding
/// only the vertex count; in graph6 files every line is one graph.
pub fn parse_family(text: &str) -> Result<Vec<Graph>, CliError> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if GraphFormat::detect(text) == GraphFormat::Graph6 {
        return lines
            .iter()
            .map(|l| Ok(parse_graph(l, GraphFormat::Graph6)?.graph))
            .collect();
    }
    let mut blocks: Vec<Vec<&str>> = Vec::new();
    for l in lines {
        if l.parse::<usize>().is_ok() {
            blocks.push(vec![l]);
        } else if let Some(b) = blocks.last_mut() {
            b.push(l);
        } else {
            return Err(CliError::Config(format!("edge `{l}` before any vertex count")));
        }
    }
    blocks
        .iter()
        .map(|b| Ok(parse_graph(&b.join("\n"), GraphFormat::EdgeList)?.graph))
        .collect()
}

/// A family file, or comma-separated graph names.
pub fn load_family(arg: &str) -> Result<Vec<Graph>, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return parse_family(&read(path)?);
    }
    arg.split(',')
        .map(|name| Ok(named::from_name(name.trim())?))
        .collect()
}

/// Compact template form: one `f` (full) or `e` (empty) mark per vertex,
/// optionally followed by `:` and comma-separated edges `u-v`.
pub fn parse_template(s: &str) -> Result<Template, CliError> {
    let (marks, edges) = s.split_once(':').unwrap_or((s, ""));
    let full = marks
        .chars()
        .map(|c| match c {
            'f' | 'F' => Ok(true),
            'e' | 'E' => Ok(false),
            _ => Err(CliError::Config(format!("template mark `{c}` is not f or e"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut list = Vec::new();
    for e in edges.split(',').filter(|e| !e.is_empty()) {
        let (u, v) = e
            .split_once('-')
            .ok_or_else(|| CliError::Config(format!("template edge `{e}` is not u-v")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("bad vertex `{x}` in template edge")))
        };
        list.push((parse(u)?, parse(v)?));
    }
    Ok(Template::new(Graph::from_edges(full.len(), &list)?, full)?)
}

/// A template JSON file, inline JSON, or the compact form.
pub fn load_template(arg: &str) -> Result<Template, CliError> {
    let path = Path::new(arg);
    let json = if path.is_file() {
        Some(read(path)?)
    } else if arg.trim_start().starts_with('{') {
        Some(arg.to_string())
    } else {
        None
    };
    match json {
        Some(text) => serde_json::from_str(&text).map_err(|e| CliError::Config(format!("template JSON: {e}"))),
        None => parse_template(arg),
    }
}

/// Build a sampler spec from a kind name and the shared flags.
pub fn sampler_spec(kind: &str, pattern: Option<&str>, common: &Common) -> Result<SamplerSpec, CliError> {
    let kind = SamplerKind::from_name(kind)?;
    let alpha = common.alpha.unwrap_or(Param::Auto);
    let epsilon = common.epsilon.unwrap_or(Param::Auto);
    let seed = common.seed;
    Ok(match kind {
        SamplerKind::Uniform => SamplerSpec::uniform(seed),
        SamplerKind::Block => SamplerSpec::block(seed),
        SamplerKind::Spectral => SamplerSpec::spectral(epsilon, seed),
        SamplerKind::Mod1Edge => SamplerSpec::mod1_edge(alpha, seed),
        SamplerKind::DoubleBroom => SamplerSpec::double_broom(alpha, seed),
        SamplerKind::Flower => SamplerSpec::flower(alpha, seed),
        SamplerKind::DisjointCopies => {
            let p = pattern.ok_or_else(|| CliError::Config("disjoint_copies needs --pattern".into()))?;
            SamplerSpec::disjoint_copies(load_graph(p)?, alpha, seed)
        }
    })
}

/// The spec named by `--spec` or by `--sampler`/`--pattern`.
pub fn resolve_sampler(args: &SamplerArgs, common: &Common) -> Result<SamplerSpec, CliError> {
    match &args.spec {
        Some(path) => {
            let spec: SamplerSpec =
                serde_json::from_str(&read(path)?).map_err(|e| CliError::Config(format!("sampler spec: {e}")))?;
            spec.validate()?;
            Ok(spec.with_seed(common.seed))
        }
        None => sampler_spec(&args.sampler, args.pattern.as_deref(), common),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_blocks() {
        let text = "# two graphs\n3\n0 1\n1 2\n0 2\n\n4\n0 1\n1 2\n2 3\n3 0\n";
        let fam = parse_family(text).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!((fam[0].n(), fam[0].edge_count()), (3, 3));
        assert_eq!((fam[1].n(), fam[1].edge_count()), (4, 4));
        assert_eq!(parse_family("Bw\nCF\n").unwrap().len(), 2);
        assert!(parse_family("0 1\n").is_err());
    }

    #[test]
    fn names_and_templates() {
        assert_eq!(load_family("K3, C4").unwrap().len(), 2);
        let t = parse_template("fe:0-1").unwrap();
        assert!(t.is_full(0) && !t.is_full(1) && t.base().has_edge(0, 1));
        assert_eq!(parse_template("ff").unwrap().base().edge_count(), 0);
        assert!(parse_template("fx").is_err());
        assert!(parse_template("ff:0-5").is_err());
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(load_template(&json).unwrap(), t);
    }
}
