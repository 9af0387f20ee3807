//! Bounded surrogates of the closure hypotheses: twin replacement, gluing
//! along a common subgraph, and leaf replication in forests. Each check
//! quantifies only up to the given bounds.

use serde::{Deserialize, Serialize};

use super::oracle::{MembershipOracle, member};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

fn pad(g: &Graph, isolated: usize) -> Graph {
    if isolated == 0 {
        g.clone()
    } else {
        g.disjoint_union(&Graph::empty(isolated))
    }
}

/// Whether `v` can be replaced by twins `reps` times in succession, some
/// twin variant (adjacent or not) staying in the property at every step.
/// The check is repeated on `G ∪ K̄_p` for every `p ≤ pad` that is itself a
/// member. Vacuously true when `G` is not a member.
pub fn check_twin_closure(
    oracle: &dyn MembershipOracle,
    g: &Graph,
    v: usize,
    reps: usize,
    pad_max: usize,
) -> Result<bool> {
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    for p in 0..=pad_max {
        let base = pad(g, p);
        if !member(oracle, &base)? {
            continue;
        }
        let mut frontier = vec![base];
        for _ in 0..reps {
            let mut next = Vec::new();
            for f in &frontier {
                for adjacent in [false, true] {
                    let h = f.replace_by_twins(v, 2, adjacent)?;
                    if member(oracle, &h)? {
                        next.push(h);
                    }
                }
            }
            if next.is_empty() {
                return Ok(false);
            }
            frontier = next;
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlueForm {
    /// `[G]^n_H ∪ [G]^n_H ∪ K̄_n`.
    Doubled,
    /// `[G]^n_H ∪ K̄_n`.
    Single,
}

pub fn glue_graph(g: &Graph, h: &VertexSet, n: usize, form: GlueForm, cap: usize) -> Result<Graph> {
    let r = g.replicate_over_subgraph(h, n, cap)?;
    let out = match form {
        GlueForm::Doubled => r.disjoint_union(&r),
        GlueForm::Single => r,
    };
    Ok(pad(&out, n))
}

/// `[G]^n_H ∪ [G]^n_H ∪ K̄_n` lies in the property for every `n ≤ n_max`.
pub fn check_glue_closure(oracle: &dyn MembershipOracle, g: &Graph, h: &VertexSet, n_max: usize) -> Result<bool> {
    check_glue_closure_form(oracle, g, h, n_max, GlueForm::Doubled)
}

pub fn check_glue_closure_form(
    oracle: &dyn MembershipOracle,
    g: &Graph,
    h: &VertexSet,
    n_max: usize,
    form: GlueForm,
) -> Result<bool> {
    for n in 1..=n_max {
        if !member(oracle, &glue_graph(g, h, n, form, oracle.cap())?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first proper nonempty vertex subset `H` (by size, then
/// lexicographically) passing the glue check.
pub fn find_glue_subgraph(
    oracle: &dyn MembershipOracle,
    g: &Graph,
    n_max: usize,
    form: GlueForm,
) -> Result<Option<VertexSet>> {
    let n = g.n();
    if n < 2 {
        return Ok(None);
    }
    let mut subsets: Vec<Vec<usize>> = (1u64..(1u64 << n) - 1)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    for s in subsets {
        let h = VertexSet::new(s);
        if check_glue_closure_form(oracle, g, &h, n_max, form)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum LeavesOutcome {
    /// Replicating `leaf` and adding isolated vertices stays in the property.
    ConditionI { leaf: usize },
    /// Replicating both leaves (with distinct neighbours) stays in the property.
    ConditionII { leaves: (usize, usize) },
    Neither,
}

/// The first satisfied leaf condition for the forest `f`, with replication
/// counts up to `reps` and paddings up to `pad`.
pub fn check_leaves_condition(
    oracle: &dyn MembershipOracle,
    f: &Graph,
    reps: usize,
    pad_max: usize,
) -> Result<LeavesOutcome> {
    if !f.is_forest() {
        return Err(Error::InvalidArgument("leaf conditions need a forest".into()));
    }
    let leaves: Vec<usize> = f.vertices().filter(|&v| f.degree(v) == 1).collect();
    for &u in &leaves {
        let mut ok = true;
        'outer: for r in 1..=reps.max(1) {
            let g = f.replace_by_twins(u, r, false)?;
            for p in 0..=pad_max {
                if !member(oracle, &pad(&g, p))? {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            return Ok(LeavesOutcome::ConditionI { leaf: u });
        }
    }
    let support = |v: usize| f.neighbors(v).next().expect("leaf has a neighbour");
    for (i, &u1) in leaves.iter().enumerate() {
        for &u2 in &leaves[i + 1..] {
            if support(u1) == support(u2) {
                continue;
            }
            let mut ok = true;
            'pairs: for r1 in 1..=reps.max(1) {
                let g1 = f.replace_by_twins(u1, r1, false)?;
                for r2 in 1..=reps.max(1) {
                    if !member(oracle, &g1.replace_by_twins(u2, r2, false)?)? {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            if ok {
                return Ok(LeavesOutcome::ConditionII { leaves: (u1, u2) });
            }
        }
    }
    Ok(LeavesOutcome::Neither)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::oracle::*;
    use crate::graph::named::*;

    #[test]
    fn twin_closure_examples() {
        assert!(check_twin_closure(&AllGraphs, &bull(), 2, 3, 1).unwrap());
        assert!(check_twin_closure(&TriangleFree, &complete(2), 0, 3, 1).unwrap());
        assert!(!check_twin_closure(&MaxOrder(3), &complete(3), 0, 1, 0).unwrap());
        assert!(!check_twin_closure(&Forests, &path(3), 1, 1, 0).unwrap());
        assert!(check_twin_closure(&Forests, &path(3), 0, 2, 2).unwrap());
        assert!(check_twin_closure(&MaxOrder(3), &Graph::empty(70), 0, 1, 0).is_err());
    }

    #[test]
    fn glue_closure_examples() {
        let end = VertexSet::new([0]);
        assert!(check_glue_closure(&Forests, &path(3), &end, 4).unwrap());
        assert!(check_glue_closure(&AllGraphs, &bull(), &VertexSet::new([0, 1]), 3).unwrap());
        // flowers: the single form works at the centre, the doubled form never does
        let c4 = cycle(4);
        assert!(check_glue_closure_form(&Flowers, &c4, &VertexSet::new([0]), 3, GlueForm::Single).unwrap());
        assert_eq!(find_glue_subgraph(&Flowers, &c4, 3, GlueForm::Doubled).unwrap(), None);
        assert!(find_glue_subgraph(&FlowerUnions, &c4, 3, GlueForm::Doubled).unwrap().is_some());
        let glued = glue_graph(&path(3), &end, 2, GlueForm::Doubled, 64).unwrap();
        assert_eq!(glued.n(), 2 * 5 + 2);
        assert!(glued.is_forest());
    }

    #[test]
    fn leaves_examples() {
        assert!(matches!(
            check_leaves_condition(&StarPlusEmpty, &complete(2), 3, 3).unwrap(),
            LeavesOutcome::ConditionI { .. }
        ));
        assert_eq!(check_leaves_condition(&Stars, &path(3), 3, 3).unwrap(), LeavesOutcome::Neither);
        assert_eq!(
            check_leaves_condition(&Forests, &path(4), 2, 2).unwrap(),
            LeavesOutcome::ConditionI { leaf: 0 }
        );
        // no isolated vertices allowed: only replication of two leaves survives
        let no_isolated = FnOracle::new("forests without isolated vertices", 64, |g: &Graph| {
            g.is_forest() && g.vertices().all(|v| g.degree(v) > 0)
        });
        assert_eq!(
            check_leaves_condition(&no_isolated, &path(4), 2, 1).unwrap(),
            LeavesOutcome::ConditionII { leaves: (0, 3) }
        );
        assert!(check_leaves_condition(&Forests, &cycle(3), 1, 1).is_err());
    }
}
