//! Subcommand implementations. Each returns a serializable report.

use std::fs;
use std::path::Path;
use std::time::Instant;

use hyplat::catalog;
use hyplat::coxgram::CoxeterDiagram;
use hyplat::coxgroup::{element_order, GeometricRep, OrderResult};
use hyplat::exactnum::{parse_expr, parse_field_expr, FieldElement, MQField};
use hyplat::linalg::{Matrix, SignatureTriple};
use hyplat::lorentz::{check_admissible, involution_from_subspace, rational_isotropy, IsotropyReport, Subspace};
use hyplat::quat::{DivisionVerdict, EmbeddingSplit, Quaternion, QuaternionAlgebra};
use hyplat::report::{self, AnalysisReport, EmbeddingSignature, FcReport, FixsubOptions};
use hyplat::skewherm::{self, AssociatedForm, DVector, QMatrix, SkewError, SkewHermitianForm};
use hyplat::QuadraticSpace;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::{AlgebraArgs, FixsubArgs, FormArgs, OrderArgs};
use crate::error::CliError;

pub const BUILTIN_PREFIX: &str = "builtin:";

/// Input text and the SHA-256 of its bytes.
pub struct Input {
    pub text: String,
    pub digest: String,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read_path(path: &Path) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::from(e).context(&path.display().to_string()))?;
    let digest = digest(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|e| CliError::validation(format!("{}: not UTF-8: {e}", path.display())))?;
    Ok(Input { text, digest })
}

/// A file path, or `builtin:NAME` for a bundled diagram.
pub fn read_diagram_input(spec: &str) -> Result<Input, CliError> {
    match spec.strip_prefix(BUILTIN_PREFIX) {
        Some(name) => {
            let entry = catalog::lookup(name).ok_or_else(|| {
                let names: Vec<_> = catalog::ALL.iter().map(|e| e.name).collect();
                CliError::validation(format!("unknown builtin `{name}`; available: {}", names.join(", ")))
            })?;
            Ok(Input { text: entry.json.to_string(), digest: digest(entry.json.as_bytes()) })
        }
        None => read_path(Path::new(spec)),
    }
}

fn load_diagram(spec: &str) -> Result<(CoxeterDiagram, String), CliError> {
    let input = read_diagram_input(spec)?;
    let d = CoxeterDiagram::from_json_str(&input.text).map_err(|e| CliError::from(e).context(spec))?;
    Ok((d, input.digest))
}

fn elapsed(start: Instant, timing: bool) -> Option<u64> {
    timing.then(|| start.elapsed().as_millis() as u64)
}

pub fn analyze(spec: &str, timing: bool) -> Result<AnalysisReport, CliError> {
    let start = Instant::now();
    let (d, input_digest) = load_diagram(spec)?;
    let mut r = report::analyze(&d)?;
    r.input_digest = input_digest;
    r.elapsed_ms = elapsed(start, timing);
    Ok(r)
}

pub fn fixsub(a: &FixsubArgs, timing: bool) -> Result<FcReport, CliError> {
    let start = Instant::now();
    let (d, input_digest) = load_diagram(&a.diagram)?;
    let opts = FixsubOptions {
        perm: a.perm.clone(),
        generators: a.generators.iter().filter(|g| !g.is_empty()).cloned().collect(),
        centralizer_maxlen: a.centralizer_maxlen,
        order_cap: a.order_cap,
    };
    let mut r = report::fixsub(&d, &opts)?;
    r.input_digest = input_digest;
    r.elapsed_ms = elapsed(start, timing);
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    pub input_digest: String,
    pub nodes: Vec<String>,
    pub word: String,
    pub matrix: Matrix,
    pub order_cap: u32,
    pub order: OrderResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

pub fn order(a: &OrderArgs, timing: bool) -> Result<OrderReport, CliError> {
    let start = Instant::now();
    let (d, input_digest) = load_diagram(&a.diagram)?;
    let rep = GeometricRep::from_diagram(&d)?;
    let word = rep.word(&a.word)?;
    let matrix = rep.evaluate(&word)?;
    let order = element_order(&matrix, a.order_cap);
    Ok(OrderReport {
        input_digest,
        nodes: d.nodes().to_vec(),
        word: word.to_string(),
        matrix,
        order_cap: a.order_cap,
        order,
        elapsed_ms: elapsed(start, timing),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FormAdmissibility {
    pub identity: SignatureTriple,
    pub conjugates: Vec<EmbeddingSignature>,
    pub admissible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeOneSummary {
    pub subspace_digest: String,
    pub subspace_dim: usize,
    pub matrix: Matrix,
    pub restricted_signature: SignatureTriple,
    pub hyperbolic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormReport {
    pub input_digest: String,
    pub field: MQField,
    pub dim: usize,
    pub matrix: Matrix,
    pub signature: SignatureTriple,
    pub admissibility: FormAdmissibility,
    pub isotropy_height: u64,
    pub isotropy: IsotropyReport,
    pub involution: Option<TypeOneSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// `[["1", "0", "sqrt(2)"], ...]` over the field of the form.
fn read_subspace(path: &Path, q: &QuadraticSpace) -> Result<(Subspace, String), CliError> {
    let input = read_path(path)?;
    let ctx = path.display().to_string();
    let rows: Vec<Vec<String>> = serde_json::from_str(&input.text).map_err(|e| {
        CliError::validation(format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column())).context(&ctx)
    })?;
    let mut basis = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let v = row
            .iter()
            .enumerate()
            .map(|(j, t)| {
                parse_field_expr(t, q.field())
                    .map_err(|e| CliError::validation(format!("[{i}][{j}]: {e}")).context(&ctx))
            })
            .collect::<Result<Vec<_>, _>>()?;
        basis.push(v);
    }
    let s = Subspace::new(q.dim(), basis).map_err(|e| CliError::from(e).context(&ctx))?;
    Ok((s, input.digest))
}

pub fn form(a: &FormArgs, timing: bool) -> Result<FormReport, CliError> {
    let start = Instant::now();
    let input = read_path(&a.form)?;
    let ctx = a.form.display().to_string();
    let q = QuadraticSpace::from_json_str(&input.text).map_err(|e| CliError::from(e).context(&ctx))?;
    let adm = check_admissible(&q);
    let admissibility = FormAdmissibility {
        identity: adm.identity,
        conjugates: adm
            .conjugates
            .into_iter()
            .map(|(embedding, signature)| EmbeddingSignature { embedding, signature })
            .collect(),
        admissible: adm.admissible,
    };
    let isotropy = rational_isotropy(&q, a.isotropy_height);
    let involution = match &a.subspace {
        Some(path) => {
            let (s, subspace_digest) = read_subspace(path, &q)?;
            let inv = involution_from_subspace(&q, &s)?;
            Some(TypeOneSummary {
                subspace_digest,
                subspace_dim: s.dim(),
                matrix: inv.isometry.into_matrix(),
                restricted_signature: inv.restricted_signature,
                hyperbolic: inv.hyperbolic,
            })
        }
        None => None,
    };
    Ok(FormReport {
        input_digest: input.digest,
        field: q.field().clone(),
        dim: q.dim(),
        matrix: q.form().clone(),
        signature: q.signature(),
        admissibility,
        isotropy_height: a.isotropy_height,
        isotropy,
        involution,
        elapsed_ms: elapsed(start, timing),
    })
}

fn algebra_from(a: &AlgebraArgs) -> Result<QuaternionAlgebra, CliError> {
    match (&a.algebra, &a.a, &a.b) {
        (Some(text), _, _) => Ok(QuaternionAlgebra::parse(text)?),
        (None, Some(x), Some(y)) => {
            let x = parse_expr(x).map_err(|e| CliError::validation(format!("-a: {e}")))?;
            let y = parse_expr(y).map_err(|e| CliError::validation(format!("-b: {e}")))?;
            Ok(QuaternionAlgebra::new(x, y)?)
        }
        _ => Err(CliError::validation("give the algebra as -a A -b B or --algebra \"D(A,B)\"")),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceSymbol {
    /// `inf` or a prime.
    pub place: String,
    pub symbol: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolReport {
    pub algebra: String,
    pub a: FieldElement,
    pub b: FieldElement,
    pub field: MQField,
    /// Local Hilbert symbols, for rational parameters.
    pub symbols: Option<Vec<PlaceSymbol>>,
    pub embeddings: Vec<EmbeddingSplit>,
    pub verdict: DivisionVerdict,
    pub zero_divisor: Option<Quaternion>,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

pub fn quat_symbol(a: &AlgebraArgs, timing: bool) -> Result<SymbolReport, CliError> {
    let start = Instant::now();
    let alg = algebra_from(a)?;
    let s = alg.is_division();
    Ok(SymbolReport {
        algebra: alg.to_string(),
        a: alg.a().clone(),
        b: alg.b().clone(),
        field: alg.field().clone(),
        symbols: s.symbols.map(|v| {
            v.into_iter().map(|(p, symbol)| PlaceSymbol { place: p.to_string(), symbol }).collect()
        }),
        embeddings: s.embeddings,
        verdict: s.verdict,
        zero_divisor: s.zero_divisor,
        reason: s.reason,
        elapsed_ms: elapsed(start, timing),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PslReport {
    pub algebra: String,
    pub quaternion: Quaternion,
    pub trace: FieldElement,
    pub norm: FieldElement,
    pub psl_involution: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

pub fn quat_psl_involution(a: &AlgebraArgs, q: &str, timing: bool) -> Result<PslReport, CliError> {
    let start = Instant::now();
    let alg = algebra_from(a)?;
    let q = Quaternion::parse(q)?;
    let alg = alg.extended_to(alg.field_with(&q))?;
    Ok(PslReport {
        algebra: alg.to_string(),
        trace: alg.trace(&q),
        norm: alg.norm(&q),
        psl_involution: alg.is_psl_involution(&q),
        quaternion: q,
        elapsed_ms: elapsed(start, timing),
    })
}

fn load_skew_form(path: &Path) -> Result<(SkewHermitianForm, String), CliError> {
    let input = read_path(path)?;
    let f = SkewHermitianForm::from_json_str(&input.text)
        .map_err(|e| CliError::from(e).context(&path.display().to_string()))?;
    Ok((f, input.digest))
}

#[derive(Clone, Debug, Serialize)]
pub struct SkewAnalyzeReport {
    pub input_digest: String,
    pub algebra: String,
    pub field: MQField,
    pub rank: usize,
    pub realified_rank: usize,
    pub division_verdict: DivisionVerdict,
    pub gram: QMatrix,
    /// At the identity embedding; absent when the algebra is ramified there.
    pub associated_form: Option<AssociatedForm>,
    pub embeddings: Vec<skewherm::EmbeddingSignature>,
    pub admissible: bool,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

pub fn skew_analyze(path: &Path, timing: bool) -> Result<SkewAnalyzeReport, CliError> {
    let start = Instant::now();
    let (f, input_digest) = load_skew_form(path)?;
    let v = f.validate()?;
    let associated_form = match f.associated_symmetric_form() {
        Ok(a) => Some(a),
        Err(SkewError::Ramified(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let adm = f.admissibility()?;
    Ok(SkewAnalyzeReport {
        input_digest,
        algebra: f.algebra().to_string(),
        field: v.field,
        rank: v.rank,
        realified_rank: v.realified_rank,
        division_verdict: f.algebra().is_division().verdict,
        gram: f.gram().clone(),
        associated_form,
        embeddings: adm.embeddings,
        admissible: adm.admissible,
        reason: adm.reason,
        elapsed_ms: elapsed(start, timing),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SkewInvolutionReport {
    pub input_digest: String,
    pub submodule_digest: String,
    pub algebra: String,
    pub rank: usize,
    pub submodule_rank: usize,
    pub submodule: Vec<DVector>,
    pub complement: Vec<DVector>,
    pub theta: QMatrix,
    /// Absent when the algebra is ramified at the identity embedding.
    pub restricted_signature: Option<SignatureTriple>,
    pub hyperbolic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

pub fn skew_involution(path: &Path, submodule: &Path, timing: bool) -> Result<SkewInvolutionReport, CliError> {
    let start = Instant::now();
    let (f, input_digest) = load_skew_form(path)?;
    let sub = read_path(submodule)?;
    let ctx = submodule.display().to_string();
    let vs = skewherm::vectors_from_json_str(&sub.text).map_err(|e| CliError::from(e).context(&ctx))?;
    let f = f.extended_for(&vs)?;
    let decomposition = f.orthogonal_complement(&vs)?;
    let inv = f.involution_from_submodule(&vs)?;
    Ok(SkewInvolutionReport {
        input_digest,
        submodule_digest: sub.digest,
        algebra: f.algebra().to_string(),
        rank: f.rank(),
        submodule_rank: inv.submodule_rank,
        submodule: decomposition.basis1,
        complement: decomposition.basis_perp,
        theta: inv.theta,
        restricted_signature: inv.restricted_signature,
        hyperbolic: inv.hyperbolic,
        elapsed_ms: elapsed(start, timing),
    })
}
