//! Verdicts for properties given by a membership oracle.
//!
//! Only the exact rules (homogeneity, clique unions and their complements)
//! are decided outright; every other hypothesis is checked on the members
//! with at most `max_order` vertices and reported with that bound.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::closure::{GlueForm, LeavesOutcome, check_leaves_condition, check_twin_closure, find_glue_subgraph};
use super::oracle::{MembershipOracle, member};
use crate::error::Result;
use crate::graph::{Graph, canonical_form, enumerate_embeddings, named};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Largest member order inspected.
    pub max_order: usize,
    /// Successive twin replacements and leaf replications.
    pub reps: usize,
    /// Isolated vertices added in the twin and leaf checks.
    pub pad: usize,
    /// Largest number of glued copies.
    pub n_max: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_order: 5,
            reps: 2,
            pad: 2,
            n_max: 3,
        }
    }
}

/// All graphs on `n ≤ 7` vertices up to isomorphism.
pub fn graphs_of_order(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "graph enumeration is limited to 7 vertices");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).expect("valid edges");
        if seen.insert(canonical_form(&g).expect("small graph")) {
            out.push(g);
        }
    }
    out
}

/// Members with `1..=max_order` vertices, up to isomorphism, by order.
pub fn members_up_to(oracle: &dyn MembershipOracle, max_order: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        for g in graphs_of_order(n) {
            if member(oracle, &g)? {
                out.push(g);
            }
        }
    }
    Ok(out)
}

fn neither_union_nor_multipartite(g: &Graph) -> bool {
    !g.is_clique_union() && !g.is_complete_multipartite()
}

fn twin_rule(oracle: &dyn MembershipOracle, members: &[Graph], b: &SearchBounds) -> Result<bool> {
    if !members.iter().any(neither_union_nor_multipartite) {
        return Ok(false);
    }
    for g in members {
        for v in g.vertices() {
            if !check_twin_closure(oracle, g, v, b.reps, b.pad)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn joins_rule(oracle: &dyn MembershipOracle, members: &[Graph]) -> Result<bool> {
    for g1 in members {
        for g2 in members {
            for v1 in g1.vertices() {
                for v2 in g2.vertices() {
                    if !member(oracle, &g1.glue_at_vertex(v1, g2, v2)?)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn glue_rule(oracle: &dyn MembershipOracle, members: &[Graph], b: &SearchBounds) -> Result<bool> {
    for g in members.iter().filter(|g| g.n() >= 2) {
        if find_glue_subgraph(oracle, g, b.n_max, GlueForm::Doubled)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn leaves_rule(oracle: &dyn MembershipOracle, members: &[Graph], b: &SearchBounds) -> Result<bool> {
    if !members.iter().all(Graph::is_forest) {
        return Ok(false);
    }
    for f in members.iter().filter(|f| f.edge_count() > 0) {
        if check_leaves_condition(oracle, f, b.reps, b.pad)? == LeavesOutcome::Neither {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A pattern whose induced copies are vertex disjoint in every inspected
/// member, with a non-homogeneous member containing it (properly, when the
/// pattern is homogeneous). Two overlapping copies of a `k`-vertex pattern
/// span at most `2k - 1` vertices, so only patterns that small relative to
/// `max_order` are considered.
fn disjoint_rule(members: &[Graph], max_order: usize) -> Result<Option<(Graph, Graph)>> {
    for h in members.iter().filter(|h| h.n() >= 2 && 2 * h.n() - 1 <= max_order) {
        let mut disjoint = true;
        let mut witness = None;
        for g in members.iter().filter(|g| g.n() >= h.n()) {
            let mut images: Vec<Vec<usize>> = enumerate_embeddings(h, g)?.iter().map(|e| e.image()).collect();
            images.sort();
            images.dedup();
            let mut used = vec![false; g.n()];
            for v in images.iter().flatten() {
                if used[*v] {
                    disjoint = false;
                }
                used[*v] = true;
            }
            if !disjoint {
                break;
            }
            let proper = g.n() > h.n() || !h.is_homogeneous();
            if witness.is_none() && !images.is_empty() && proper && !g.is_homogeneous() {
                witness = Some(g.clone());
            }
        }
        if disjoint {
            if let Some(w) = witness {
                return Ok(Some((h.clone(), w)));
            }
        }
    }
    Ok(None)
}

/// Classify the property decided by `oracle`.
pub fn classify_oracle(oracle: &dyn MembershipOracle, bounds: &SearchBounds) -> Result<Verdict> {
    let p3 = named::path(3);
    let co_p3 = p3.complement();
    let has_p3 = member(oracle, &p3)?;
    let has_co_p3 = member(oracle, &co_p3)?;
    if !has_p3 && !has_co_p3 {
        return Ok(Verdict::uniform("homogeneous").with_detail("every member is complete or edgeless"));
    }
    if let Some(d) = oracle.max_degree() {
        let g = if has_p3 { p3 } else { co_p3 };
        return Ok(Verdict::non_uniform("t:bounded", "spectral", g)
            .with_detail(format!("maximum degree at most {d}")));
    }
    if !has_p3 {
        return Ok(Verdict::non_uniform("x:unionKn", "block", co_p3)
            .with_detail("members are disjoint unions of cliques"));
    }
    if !has_co_p3 {
        return Ok(Verdict::non_uniform("x:unionKn", "block", p3)
            .with_detail("complement: members are complete multipartite"));
    }
    let b = bounds;
    let members = members_up_to(oracle, b.max_order)?;
    let bound_note = format!("verified up to order {}", b.max_order);
    if twin_rule(oracle, &members, b)? {
        return Ok(Verdict::uniform("t:twin")
            .with_detail(format!("{bound_note}, {} twin replacements, padding {}", b.reps, b.pad))
            .with_bound(b.max_order));
    }
    if joins_rule(oracle, &members)? {
        return Ok(Verdict::uniform("t:joins")
            .with_detail(format!("{bound_note}, closed under gluing at a vertex"))
            .with_bound(b.max_order));
    }
    if glue_rule(oracle, &members, b)? {
        return Ok(Verdict::uniform("t:glue")
            .with_detail(format!("{bound_note}, up to {} glued copies", b.n_max))
            .with_bound(b.max_order));
    }
    if leaves_rule(oracle, &members, b)? {
        return Ok(Verdict::uniform("t:leaves")
            .with_detail(format!("{bound_note}, {} replications, padding {}", b.reps, b.pad))
            .with_bound(b.max_order));
    }
    if let Some((h, g)) = disjoint_rule(&members, b.max_order)? {
        return Ok(Verdict::non_uniform("t:disjoint", "disjoint_copies", g)
            .with_detail(format!(
                "{bound_note}; copies of the pattern on {} vertices with edges {:?} are vertex disjoint",
                h.n(),
                h.edges()
            ))
            .with_bound(b.max_order));
    }
    Ok(Verdict::unknown()
        .with_detail(format!("no hypothesis holds up to order {}", b.max_order))
        .with_bound(b.max_order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::oracle::*;
    use crate::verdict::Label;

    #[test]
    fn graph_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| graphs_of_order(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34]);
    }

    fn verdict(o: &dyn MembershipOracle) -> Verdict {
        classify_oracle(o, &SearchBounds::default()).unwrap()
    }

    #[test]
    fn builtin_verdicts() {
        assert_eq!(verdict(&AllGraphs).certificate, "t:twin");
        assert_eq!(verdict(&TriangleFree).certificate, "t:twin");
        assert_eq!(verdict(&Bipartite).certificate, "t:twin");
        assert_eq!(verdict(&Forests).certificate, "t:joins");
        assert_eq!(verdict(&Planar).label, Label::Uniform);
        let v = verdict(&BoundedDegree(3));
        assert_eq!((v.label, v.certificate.as_str()), (Label::NonUniform, "t:bounded"));
        assert_eq!(verdict(&BoundedDegree(0)).certificate, "homogeneous");
        let v = verdict(&Stars);
        assert_eq!((v.label, v.certificate.as_str()), (Label::NonUniform, "x:unionKn"));
        assert_eq!(verdict(&StarPlusEmpty).certificate, "t:leaves");
        assert_eq!(verdict(&FlowerUnions).certificate, "t:glue");
        assert_eq!(verdict(&Flowers).label, Label::Unknown);
        let v = verdict(&MaxOrder(3));
        assert_eq!((v.label, v.certificate.as_str()), (Label::NonUniform, "t:disjoint"));
    }
}
