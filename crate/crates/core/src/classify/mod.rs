//! Uniform / non-uniform / unknown verdicts for hereditary properties.

pub mod closure;
pub mod family;
pub mod oracle;
pub mod search;

use std::sync::Arc;

pub use closure::{
    GlueForm, LeavesOutcome, check_glue_closure, check_glue_closure_form, check_leaves_condition,
    check_twin_closure, find_glue_subgraph,
};
pub use family::classify_forbidden_family;
pub use oracle::{MembershipOracle, builtin_oracle};
pub use search::{SearchBounds, classify_oracle, graphs_of_order};

use crate::error::{Error, Result};
use crate::graph::{Graph, are_isomorphic};
use crate::template::{Template, classify_template};
use crate::verdict::Verdict;

/// A hereditary property in one of the three supported presentations.
#[derive(Debug, Clone)]
pub enum PropertySpec {
    /// Graphs with no induced subgraph from a finite family.
    ForbiddenFamily(Vec<Graph>),
    Oracle(Arc<dyn MembershipOracle>),
    /// Induced subgraphs of blow-ups of a template.
    Template(Template),
}

impl PropertySpec {
    /// A forbidden family; members must be pairwise non-isomorphic.
    pub fn forbidden(family: Vec<Graph>) -> Result<Self> {
        for (i, a) in family.iter().enumerate() {
            if family[i + 1..].iter().any(|b| are_isomorphic(a, b)) {
                return Err(Error::InvalidArgument(format!(
                    "forbidden graph {i} is repeated up to isomorphism"
                )));
            }
        }
        Ok(PropertySpec::ForbiddenFamily(family))
    }
}

pub fn classify(spec: &PropertySpec, bounds: &SearchBounds) -> Result<Verdict> {
    Ok(match spec {
        PropertySpec::ForbiddenFamily(f) => classify_forbidden_family(f),
        PropertySpec::Oracle(o) => classify_oracle(o.as_ref(), bounds)?,
        PropertySpec::Template(t) => classify_template(t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::verdict::Label;

    #[test]
    fn dispatch() {
        assert!(PropertySpec::forbidden(vec![path(3), path(3)]).is_err());
        let b = SearchBounds::default();
        let f = PropertySpec::forbidden(vec![complete(3)]).unwrap();
        assert_eq!(classify(&f, &b).unwrap().certificate, "t:free");
        let o = PropertySpec::Oracle(Arc::new(oracle::Forests));
        assert_eq!(classify(&o, &b).unwrap().label, Label::Uniform);
        let t = Template::new(Graph::empty(2), vec![true, true]).unwrap();
        assert_eq!(classify(&PropertySpec::Template(t), &b).unwrap().label, Label::NonUniform);
    }
}
