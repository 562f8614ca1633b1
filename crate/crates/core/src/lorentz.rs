//! Quadratic spaces over multiquadratic fields: admissibility, type I
//! involutions, fixed subspaces and rational isotropy.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{parse_field_expr, Embedding, ExprError, FieldElement, FieldError, MQField};
use crate::linalg::{signature, signature_at, Matrix, SignatureTriple};

#[derive(Debug, Error)]
pub enum FormError {
    #[error("form matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("form matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("form is degenerate: signature {0}")]
    Degenerate(SignatureTriple),
    #[error("entry ({i}, {j}): {source}")]
    Entry { i: usize, j: usize, source: FieldError },
    #[error("vector length {got} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basis vectors are linearly dependent (rank {rank} < {len})")]
    DependentBasis { rank: usize, len: usize },
    #[error("matrix does not preserve the form")]
    NotIsometry,
    #[error("restriction of the form to the subspace is degenerate")]
    DegenerateRestriction,
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("entry ({i}, {j}): {source}")]
    Expr { i: usize, j: usize, source: ExprError },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A nondegenerate symmetric bilinear form on `K^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticSpace {
    field: MQField,
    #[serde(rename = "matrix")]
    form: Matrix,
}

#[derive(Deserialize)]
struct SpaceDoc {
    #[serde(default)]
    field: Option<Vec<u64>>,
    matrix: Vec<Vec<String>>,
}

impl QuadraticSpace {
    pub fn new(field: MQField, form: Matrix) -> Result<Self, FormError> {
        if !form.is_square() {
            return Err(FormError::NotSquare { rows: form.rows(), cols: form.cols() });
        }
        let n = form.rows();
        for i in 0..n {
            for j in 0..n {
                if let Err(source) = field.check(&form[(i, j)]) {
                    return Err(FormError::Entry { i, j, source });
                }
                if j > i && form[(i, j)] != form[(j, i)] {
                    return Err(FormError::NotSymmetric(i, j));
                }
            }
        }
        let sig = signature(&form);
        if sig.zero > 0 {
            return Err(FormError::Degenerate(sig));
        }
        Ok(Self { field, form })
    }

    /// Smallest field containing the entries.
    pub fn over_generated_field(form: Matrix) -> Result<Self, FormError> {
        let field = crate::exactnum::subfield_generated(form.entries());
        Self::new(field, form)
    }

    pub fn diagonal(field: MQField, entries: &[FieldElement]) -> Result<Self, FormError> {
        Self::new(field, Matrix::diagonal(entries))
    }

    /// `{"field": [2, 5], "matrix": [["1", "0"], ["0", "-sqrt(5)"]]}`. When
    /// `field` is omitted the entries generate it.
    pub fn from_json_str(text: &str) -> Result<Self, FormError> {
        let doc: SpaceDoc = serde_json::from_str(text).map_err(|e| FormError::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        let declared = doc.field.map(MQField::new).transpose()?;
        let parse_field = declared.clone().unwrap_or_else(|| {
            let radicands = doc
                .matrix
                .iter()
                .flatten()
                .filter_map(|t| crate::exactnum::parse_expr(t).ok())
                .flat_map(|x| x.radicands().collect::<Vec<_>>());
            MQField::from_radicands(radicands)
        });
        let mut rows = Vec::with_capacity(doc.matrix.len());
        for (i, row) in doc.matrix.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, t) in row.iter().enumerate() {
                out.push(parse_field_expr(t, &parse_field).map_err(|source| FormError::Expr { i, j, source })?);
            }
            if out.len() != doc.matrix.len() {
                return Err(FormError::NotSquare { rows: doc.matrix.len(), cols: out.len() });
            }
            rows.push(out);
        }
        Self::new(parse_field, Matrix::from_rows(rows))
    }

    pub fn field(&self) -> &MQField {
        &self.field
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.rows()
    }

    pub fn signature(&self) -> SignatureTriple {
        signature(&self.form)
    }

    pub fn signature_at(&self, e: &Embedding) -> Result<SignatureTriple, FieldError> {
        signature_at(&self.form, &self.field, e)
    }

    /// `(x, y) = xᵀ Q y`.
    pub fn inner(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        crate::linalg::dot(x, &self.form.mul_vec(y))
    }

    /// True if every entry is rational, whatever the declared field.
    pub fn is_rational(&self) -> bool {
        self.form.entries().all(FieldElement::is_rational)
    }
}

/// A linear subspace given by a basis of coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<FieldElement>>,
}

impl Subspace {
    pub fn new(ambient: usize, basis: Vec<Vec<FieldElement>>) -> Result<Self, FormError> {
        if let Some(v) = basis.iter().find(|v| v.len() != ambient) {
            return Err(FormError::DimensionMismatch { expected: ambient, got: v.len() });
        }
        let s = Self { ambient, basis };
        let rank = s.rows_matrix().rank();
        if rank < s.basis.len() {
            return Err(FormError::DependentBasis { rank, len: s.basis.len() });
        }
        Ok(s)
    }

    pub fn whole(ambient: usize) -> Self {
        Self { ambient, basis: Matrix::identity(ambient).to_rows() }
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, idx: &[usize]) -> Self {
        let id = Matrix::identity(ambient);
        Self { ambient, basis: idx.iter().map(|&i| id.row(i).to_vec()).collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.basis
    }

    /// The `ambient × dim` matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    fn rows_matrix(&self) -> Matrix {
        if self.basis.is_empty() {
            Matrix::zeros(0, self.ambient)
        } else {
            Matrix::from_rows(self.basis.clone())
        }
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).rank() == self.dim()
    }

    /// Equality as subspaces, independent of the chosen bases.
    pub fn same_span(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && other.basis.iter().all(|v| self.contains(v))
    }
}

/// A matrix preserving a given symmetric form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Isometry {
    matrix: Matrix,
}

impl Isometry {
    /// Checks `MᵀQM = Q` exactly.
    pub fn new(form: &Matrix, matrix: Matrix) -> Result<Self, FormError> {
        if matrix.rows() != form.rows() || !matrix.is_square() {
            return Err(FormError::DimensionMismatch { expected: form.rows(), got: matrix.rows() });
        }
        if matrix.congruent(form) != *form {
            return Err(FormError::NotIsometry);
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: Matrix::identity(n) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_involution(&self) -> bool {
        self.matrix.mul(&self.matrix).is_identity()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub identity: SignatureTriple,
    /// Non-identity embeddings with their signatures.
    pub conjugates: Vec<(Embedding, SignatureTriple)>,
    pub admissible: bool,
}

/// Signature `(n, 1)` at the identity and positive definite at every other
/// embedding.
pub fn check_admissible(q: &QuadraticSpace) -> AdmissibilityReport {
    let n = q.dim();
    let identity = q.signature();
    let conjugates: Vec<_> = q
        .field
        .embeddings()
        .into_iter()
        .skip(1)
        .map(|e| {
            let s = q.signature_at(&e).expect("entries lie in the field");
            (e, s)
        })
        .collect();
    let admissible = n >= 1
        && identity == SignatureTriple::new(n - 1, 1, 0)
        && conjugates.iter().all(|(_, s)| s.is_positive_definite());
    AdmissibilityReport { identity, conjugates, admissible }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Involution {
    pub isometry: Isometry,
    pub restricted_signature: SignatureTriple,
    /// The `+1` eigenspace meets hyperbolic space.
    pub hyperbolic: bool,
}

/// The isometry acting as `+1` on `v1` and `−1` on its orthogonal complement:
/// `M = 2B(BᵀQB)⁻¹BᵀQ − I`.
pub fn involution_from_subspace(q: &QuadraticSpace, v1: &Subspace) -> Result<Involution, FormError> {
    if v1.ambient_dim() != q.dim() {
        return Err(FormError::DimensionMismatch { expected: q.dim(), got: v1.ambient_dim() });
    }
    let n = q.dim();
    let b = v1.basis_matrix();
    let restricted = b.congruent(q.form());
    let restricted_signature = signature(&restricted);
    let matrix = if v1.dim() == 0 {
        Matrix::identity(n).scale(&FieldElement::from_int(-1))
    } else {
        let inv = restricted.inverse().ok_or(FormError::DegenerateRestriction)?;
        let proj = b.mul(&inv).mul(&b.transpose()).mul(q.form());
        proj.scale(&FieldElement::from_int(2)).sub(&Matrix::identity(n))
    };
    let isometry = Isometry::new(q.form(), matrix).map_err(|_| FormError::NotIsometry)?;
    debug_assert!(isometry.is_involution());
    Ok(Involution {
        isometry,
        restricted_signature,
        hyperbolic: restricted_signature.negative == 1 && restricted_signature.zero == 0,
    })
}

/// `{x | Bᵀ Q x = 0}`.
pub fn orthogonal_complement(q: &QuadraticSpace, s: &Subspace) -> Subspace {
    if s.dim() == 0 {
        return Subspace::whole(q.dim());
    }
    let lhs = s.basis_matrix().transpose().mul(q.form());
    Subspace { ambient: q.dim(), basis: lhs.kernel() }
}

/// Common fixed vectors of a set of `n × n` matrices.
pub fn fixed_subspace(n: usize, isoms: &[Isometry]) -> Subspace {
    if isoms.is_empty() {
        return Subspace::whole(n);
    }
    let id = Matrix::identity(n);
    let mut rows = Vec::with_capacity(n * isoms.len());
    for g in isoms {
        assert_eq!(g.dim(), n, "isometry dimension");
        rows.extend(g.matrix().sub(&id).to_rows());
    }
    Subspace { ambient: n, basis: Matrix::from_rows(rows).kernel() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictedForm {
    /// `BᵀQB` in the basis of the subspace.
    pub gram: Matrix,
    pub signature: SignatureTriple,
    pub meets_hyperbolic: bool,
}

impl RestrictedForm {
    /// The restriction as a quadratic space, if nondegenerate.
    pub fn to_space(&self, field: &MQField) -> Result<QuadraticSpace, FormError> {
        QuadraticSpace::new(field.clone(), self.gram.clone())
    }
}

pub fn restricted_form(q: &QuadraticSpace, s: &Subspace) -> RestrictedForm {
    let gram = s.basis_matrix().congruent(q.form());
    let signature = signature(&gram);
    RestrictedForm { gram, signature, meets_hyperbolic: signature.negative == 1 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Isotropy {
    Isotropic { witness: Vec<i64> },
    AnisotropicCertified { reason: String },
    Unknown { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyReport {
    pub outcome: Isotropy,
    /// Largest max-norm searched, 0 when no search was needed.
    pub searched_height: u64,
    /// Compact quotient iff the form is anisotropic; `None` when undecided.
    pub uniform: Option<bool>,
}

/// Bound multiplier for the retries in dimension at least five.
const MEYER_RETRY_FACTOR: u64 = 8;
/// Prefix evaluations allowed across all retries.
const SEARCH_BUDGET: u64 = 50_000_000;

/// Searches for a nonzero integer vector `w` with `wᵀQw = 0`.
///
/// Witnesses are normalized so the first nonzero coordinate is positive and
/// ordered by max-norm, then lexicographically with coordinates compared in
/// the order 0, 1, −1, 2, −2, …; the first one in that order is returned.
pub fn rational_isotropy(q: &QuadraticSpace, height_bound: u64) -> IsotropyReport {
    let report = |outcome: Isotropy, searched_height| {
        let uniform = match outcome {
            Isotropy::Isotropic { .. } => Some(false),
            Isotropy::AnisotropicCertified { .. } => Some(true),
            Isotropy::Unknown { .. } => None,
        };
        IsotropyReport { outcome, searched_height, uniform }
    };
    if !q.is_rational() {
        let adm = check_admissible(q);
        return if adm.admissible && !q.field().is_rational() {
            report(
                Isotropy::AnisotropicCertified {
                    reason: format!("admissible form over {}", q.field()),
                },
                0,
            )
        } else {
            report(
                Isotropy::Unknown { reason: "non-rational form that is not admissible".into() },
                0,
            )
        };
    }
    let sig = q.signature();
    if sig.positive == 0 || sig.negative == 0 {
        return report(Isotropy::AnisotropicCertified { reason: format!("definite, signature {sig}") }, 0);
    }
    let Some(int_form) = integral_form(q.form()) else {
        return report(Isotropy::Unknown { reason: "entries too large for the search".into() }, 0);
    };
    let n = q.dim();
    let cap = if n >= 5 { height_bound.saturating_mul(MEYER_RETRY_FACTOR) } else { height_bound };
    let mut budget = SEARCH_BUDGET;
    let mut searched = 0;
    let mut bound = height_bound.max(1);
    let mut h = 1;
    loop {
        while h <= bound {
            match search_shell(&int_form, h as i64, &mut budget) {
                Shell::Found(w) => {
                    return report(Isotropy::Isotropic { witness: w }, h);
                }
                Shell::Exhausted => searched = h,
                Shell::OutOfBudget => {
                    return report(Isotropy::Unknown { reason: format!("search budget exhausted at height {h}") }, searched);
                }
            }
            h += 1;
        }
        if bound >= cap {
            break;
        }
        bound = (bound * 2).min(cap);
    }
    report(
        Isotropy::Unknown { reason: format!("no isotropic vector of max-norm at most {searched}") },
        searched,
    )
}

/// Scales a rational symmetric matrix to integers.
fn integral_form(m: &Matrix) -> Option<Vec<Vec<i128>>> {
    let mut lcm = BigInt::one();
    for x in m.entries() {
        lcm = lcm.lcm(x.rational_part().denom());
    }
    let limit = BigInt::from(1u64 << 40);
    m.to_rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let r = x.rational_part();
                    let v = r.numer() * (&lcm / r.denom());
                    if v.abs() > limit { None } else { v.to_i128() }
                })
                .collect()
        })
        .collect()
}

enum Shell {
    Found(Vec<i64>),
    Exhausted,
    OutOfBudget,
}

/// Coordinate values in search order: 0, 1, −1, 2, −2, …
fn balanced(k: usize) -> i64 {
    let k = k as i64;
    if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 }
}

/// Vectors of max-norm exactly `h`: enumerate the first `n − 1` coordinates
/// and solve the quadratic in the last one.
fn search_shell(q: &[Vec<i128>], h: i64, budget: &mut u64) -> Shell {
    let n = q.len();
    let top = 2 * h as usize;
    let mut idx = vec![0usize; n - 1];
    let mut prefix = vec![0i64; n - 1];
    loop {
        if *budget == 0 {
            return Shell::OutOfBudget;
        }
        *budget -= 1;
        if let Some(t) = best_last_coordinate(q, &prefix, h) {
            let mut w = prefix.clone();
            w.push(t);
            return Shell::Found(w);
        }
        let mut k = n - 1;
        loop {
            if k == 0 {
                return Shell::Exhausted;
            }
            k -= 1;
            if idx[k] < top {
                idx[k] += 1;
                prefix[k] = balanced(idx[k]);
                for p in k + 1..n - 1 {
                    idx[p] = 0;
                    prefix[p] = 0;
                }
                break;
            }
        }
    }
}

fn best_last_coordinate(q: &[Vec<i128>], prefix: &[i64], h: i64) -> Option<i64> {
    let n = q.len();
    let last = n - 1;
    let leading_positive = match prefix.iter().find(|&&x| x != 0) {
        Some(&x) => x > 0,
        None => true,
    };
    if !leading_positive {
        return None;
    }
    let prefix_zero = prefix.iter().all(|&x| x == 0);
    let prefix_max = prefix.iter().map(|x| x.abs()).max().unwrap_or(0);
    let admissible = |t: i64| {
        t.abs() <= h && (prefix_max == h || t.abs() == h) && (!prefix_zero || t > 0)
    };
    let qa = q[last][last];
    let mut s: i128 = 0;
    let mut c: i128 = 0;
    for (i, &xi) in prefix.iter().enumerate() {
        let xi = xi as i128;
        s += q[i][last] * xi;
        for (j, &xj) in prefix.iter().enumerate() {
            c += q[i][j] * xi * xj as i128;
        }
    }
    // qa·t² + 2s·t + c = 0
    let mut roots: Vec<i64> = Vec::with_capacity(2);
    if qa == 0 {
        if s == 0 {
            if c == 0 {
                return (0..=2 * h as usize).map(balanced).find(|&t| admissible(t));
            }
        } else if c % (2 * s) == 0 {
            roots.push((-c / (2 * s)) as i64);
        }
    } else {
        let disc = s * s - qa * c;
        if disc < 0 {
            return None;
        }
        let d = disc.sqrt();
        if d * d != disc {
            return None;
        }
        for num in [-s - d, -s + d] {
            if num % qa == 0 {
                let t = num / qa;
                if t.abs() <= h as i128 {
                    roots.push(t as i64);
                }
            }
        }
    }
    roots.into_iter().filter(|&t| admissible(t)).min_by_key(|&t| (t.abs(), t < 0))
}
