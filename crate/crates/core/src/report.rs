//! End-to-end analyses of a Coxeter diagram: arithmeticity, and the fixed
//! subspace of a diagram symmetry together with its centralizer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxgram::{
    classify_simplex_vertices, odd_cycle_check, vinberg_check_gram, gram_from_diagram, CoxeterDiagram,
    DiagramError, OddCycleResult, Verdict, VertexClass, VertexKind, VinbergReport,
};
use crate::coxgroup::{
    centralizer_search, diagram_automorphism, element_order, induced_action, triangle_signature, GeometricRep,
    GroupError, OrderResult, Permutation, DEFAULT_CENTRALIZER_MAXLEN, DEFAULT_ORDER_CAP,
};
use crate::exactnum::{start_precision, Embedding, FieldElement, MQField};
use crate::linalg::{Matrix, SignatureTriple};
use crate::lorentz::{fixed_subspace, restricted_form, FormError, QuadraticSpace};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("generator `{word}` does not preserve the fixed subspace")]
    NotInvariant { word: String },
}

impl ReportError {
    pub fn is_unsupported(&self) -> bool {
        match self {
            ReportError::Diagram(e) => e.is_unsupported(),
            ReportError::Group(GroupError::Diagram(e)) => e.is_unsupported(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSignature {
    pub embedding: Embedding,
    pub signature: SignatureTriple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// SHA-256 of the input bytes, filled in by the caller.
    pub input_digest: String,
    pub nodes: Vec<String>,
    pub gram: Matrix,
    pub big_field: MQField,
    pub ground_field: MQField,
    pub signatures: Vec<EmbeddingSignature>,
    pub vinberg: VinbergReport,
    pub verdict: Verdict,
    pub summary: String,
    pub odd_cycles: OddCycleResult,
    /// Present when the diagram describes a simplex.
    pub vertices: Option<Vec<VertexClass>>,
    pub ideal_vertices: Option<usize>,
    /// Starting precision of the interval sign computations.
    pub precision_bits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

pub fn analyze(d: &CoxeterDiagram) -> Result<AnalysisReport, ReportError> {
    let gram = gram_from_diagram(d)?;
    let vinberg = vinberg_check_gram(&gram)?;
    let big_field = gram.entry_field();
    let signatures = big_field
        .embeddings()
        .into_iter()
        .map(|e| {
            let signature = gram.signature_at(&e).expect("embedding of the entry field");
            EmbeddingSignature { embedding: e, signature }
        })
        .collect();
    let vertices = match classify_simplex_vertices(d) {
        Ok(v) => Some(v),
        Err(DiagramError::NotSimplex { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let ideal_vertices = vertices
        .as_ref()
        .map(|v| v.iter().filter(|c| c.kind == VertexKind::Ideal).count());
    Ok(AnalysisReport {
        input_digest: String::new(),
        nodes: d.nodes().to_vec(),
        gram: gram.matrix().clone(),
        big_field,
        ground_field: vinberg.ground_field.clone(),
        signatures,
        verdict: vinberg.verdict,
        summary: vinberg.summary(),
        vinberg,
        odd_cycles: odd_cycle_check(d),
        vertices,
        ideal_vertices,
        precision_bits: start_precision(),
        elapsed_ms: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixsubOptions {
    /// Cycle notation over node names; empty for the identity.
    pub perm: String,
    pub generators: Vec<String>,
    pub centralizer_maxlen: usize,
    pub order_cap: u32,
}

impl Default for FixsubOptions {
    fn default() -> Self {
        Self {
            perm: String::new(),
            generators: Vec::new(),
            centralizer_maxlen: DEFAULT_CENTRALIZER_MAXLEN,
            order_cap: DEFAULT_ORDER_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerEntry {
    pub word: String,
    /// Order of the action on the fixed subspace.
    pub induced_order: OrderResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedGenerator {
    pub word: String,
    pub matrix: Matrix,
    pub order: OrderResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductOrder {
    pub product: String,
    pub order: OrderResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FcReport {
    pub input_digest: String,
    pub nodes: Vec<String>,
    /// The automorphism in cycle notation, `()` for the identity.
    pub permutation: String,
    pub automorphism: Matrix,
    pub fixed_dim: usize,
    /// Basis vectors in the coordinates of the facet normals.
    pub fixed_basis: Vec<Vec<FieldElement>>,
    pub restricted_gram: Matrix,
    pub restricted_signature: SignatureTriple,
    /// Restricted signature is `(d−1, 1)`: the fixed set is a copy of
    /// `H^{d−1}`.
    pub hyperbolic: bool,
    pub centralizer_maxlen: usize,
    pub order_cap: u32,
    pub centralizer: Vec<CentralizerEntry>,
    pub generators: Vec<InducedGenerator>,
    /// Orders of `g1·g2`, `g2·g3`, `g1·g3` for exactly three generators.
    pub product_orders: Option<Vec<ProductOrder>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl FcReport {
    pub fn orders(&self) -> Option<Vec<u32>> {
        self.product_orders.as_ref()?.iter().map(|p| p.order.finite()).collect()
    }
}

pub fn fixsub(d: &CoxeterDiagram, opts: &FixsubOptions) -> Result<FcReport, ReportError> {
    let rep = GeometricRep::from_diagram(d)?;
    let perm = if opts.perm.trim().is_empty() {
        Permutation::identity(d.len())
    } else {
        Permutation::parse_cycles(&opts.perm, d.nodes())?
    };
    let auto = diagram_automorphism(d, &perm)?;
    let n = d.len();
    let fix = fixed_subspace(n, std::slice::from_ref(&auto));
    let space = QuadraticSpace::over_generated_field(rep.gram().matrix().clone())?;
    let rf = restricted_form(&space, &fix);
    let dim = fix.dim();
    let hyperbolic = dim > 0 && rf.signature == SignatureTriple::new(dim - 1, 1, 0);

    let centralizer = centralizer_search(&rep, auto.matrix(), opts.centralizer_maxlen)
        .into_iter()
        .map(|c| {
            let word = c.word.to_string();
            let induced = induced_action(&c.matrix, &fix).map_err(|_| ReportError::NotInvariant { word: word.clone() })?;
            Ok(CentralizerEntry { word, induced_order: element_order(&induced, opts.order_cap) })
        })
        .collect::<Result<Vec<_>, ReportError>>()?;

    let mut generators = Vec::with_capacity(opts.generators.len());
    for text in &opts.generators {
        let word = rep.word(text)?;
        let m = rep.evaluate(&word)?;
        let induced = match induced_action(&m, &fix) {
            Ok(a) => a,
            Err(GroupError::NotInvariant) => return Err(ReportError::NotInvariant { word: text.clone() }),
            Err(e) => return Err(e.into()),
        };
        let order = element_order(&induced, opts.order_cap);
        generators.push(InducedGenerator { word: word.to_string(), matrix: induced, order });
    }
    let product_orders = match generators.as_slice() {
        [g1, g2, g3] => {
            let orders = triangle_signature(&g1.matrix, &g2.matrix, &g3.matrix, opts.order_cap);
            let names = [(g1, g2), (g2, g3), (g1, g3)];
            Some(
                names
                    .iter()
                    .zip(orders)
                    .map(|((x, y), order)| ProductOrder { product: format!("({})({})", x.word, y.word), order })
                    .collect(),
            )
        }
        _ => None,
    };

    let cycles = perm.to_cycles(d.nodes());
    Ok(FcReport {
        input_digest: String::new(),
        nodes: d.nodes().to_vec(),
        permutation: if cycles.is_empty() { "()".into() } else { cycles },
        automorphism: auto.matrix().clone(),
        fixed_dim: dim,
        fixed_basis: fix.basis().to_vec(),
        restricted_gram: rf.gram,
        restricted_signature: rf.signature,
        hyperbolic,
        centralizer_maxlen: opts.centralizer_maxlen,
        order_cap: opts.order_cap,
        centralizer,
        generators,
        product_orders,
        elapsed_ms: None,
    })
}
