//! Coxeter diagrams, their Gram matrices and Vinberg's arithmeticity
//! criterion.

mod diagram;
mod gram;
mod vinberg;

use thiserror::Error;

use crate::exactnum::ExprError;
use crate::linalg::SignatureTriple;

pub use diagram::{CoxeterDiagram, Edge, Label, SUPPORTED_FINITE_LABELS};
pub use gram::{cyc_products, gram_entry, gram_from_diagram, neg_cos_pi_over, GramMatrix};
pub use vinberg::{
    classify_simplex_vertices, odd_cycle_check, vinberg_check, vinberg_check_gram, EmbeddingCheck,
    OddCycleResult, Verdict, VertexClass, VertexKind, VinbergReport,
};

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("node names must be non-empty")]
    EmptyName,
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("edge references unknown node `{0}`")]
    UnknownNode(String),
    #[error("self-loop at node `{0}`")]
    SelfLoop(String),
    #[error("more than one edge between `{0}` and `{1}`")]
    DuplicateEdge(String, String),
    #[error("unsupported label {0}: supported labels are 2, 3, 4, 5, 6, inf and dotted weights")]
    UnsupportedLabel(String),
    #[error("dotted edge {u}-{v} needs a weight below -1, got {weight}")]
    DottedWeight { u: String, v: String, weight: String },
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{0}")]
    Malformed(String),
    #[error("invalid expression: {0}")]
    Expr(#[from] ExprError),
    #[error("Gram matrix has signature {0}; exactly one negative eigenvalue is required")]
    NotLorentzian(SignatureTriple),
    #[error("{nodes} facets with Gram signature {signature} do not bound a hyperbolic simplex")]
    NotSimplex { nodes: usize, signature: SignatureTriple },
}

impl DiagramError {
    /// True when the input is well formed but outside the supported domain.
    pub fn is_unsupported(&self) -> bool {
        matches!(self, DiagramError::UnsupportedLabel(_))
    }
}
