use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    Uniform,
    NonUniform,
    Unknown,
}

/// A sampler kind together with a graph on which it realises a non-uniform
/// consistent ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub sampler: String,
    pub graph: Graph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: Label,
    pub certificate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Present when the certificate was only checked up to this graph order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
}

impl Verdict {
    pub fn new(label: Label, certificate: impl Into<String>) -> Self {
        Verdict {
            label,
            certificate: certificate.into(),
            detail: None,
            witness: None,
            bound: None,
        }
    }

    pub fn uniform(certificate: impl Into<String>) -> Self {
        Self::new(Label::Uniform, certificate)
    }

    pub fn unknown() -> Self {
        Self::new(Label::Unknown, "none")
    }

    pub fn non_uniform(certificate: impl Into<String>, sampler: &str, graph: Graph) -> Self {
        Verdict {
            witness: Some(Witness {
                sampler: sampler.to_string(),
                graph,
            }),
            ..Self::new(Label::NonUniform, certificate)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = Some(bound);
        self
    }
}
