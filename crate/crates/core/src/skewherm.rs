//! Skew-Hermitian forms `F(x, y) = Σ x_i* a_ij y_j` on the right module
//! `D^m` over a quaternion algebra `D`, and type II involutions.
//!
//! Scalars act on the right of vectors and matrices act on the left.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{parse_expr, Embedding, ExprError, FieldElement, FieldError, MQField};
use crate::linalg::{signature, Matrix, SignatureTriple};
use crate::quat::{DivisionVerdict, QuatError, Quaternion, QuaternionAlgebra};

#[derive(Debug, Error)]
pub enum SkewError {
    #[error("Gram matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry ({i}, {j}) is {entry} but -a({j},{i})* is {expected}")]
    NotSkew { i: usize, j: usize, entry: String, expected: String },
    #[error("form is degenerate: realified rank {rank} < {full}")]
    Degenerate { rank: usize, full: usize },
    #[error("vector has {got} coordinates, form has rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vectors are dependent over the algebra (rank {rank} < {len})")]
    DependentVectors { rank: usize, len: usize },
    #[error("{0}")]
    Isotropic(Box<IsotropyCertificate>),
    #[error("restriction of the form to the submodule is degenerate: realified rank {rank} < {full}")]
    DegenerateRestriction { rank: usize, full: usize },
    #[error("both parameters are negative under {0}: the algebra is ramified there")]
    Ramified(Embedding),
    #[error("no positive parameter of D({a}, {b}) has a square root in a multiquadratic field")]
    NoSquareRoot { a: String, b: String },
    #[error("internal consistency violation: {0}")]
    Inconsistent(String),
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{path}: {source}")]
    Expr { path: String, source: ExprError },
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl SkewError {
    /// True for violations of internal invariants rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, SkewError::Inconsistent(_))
    }
}

/// A vector `y` met during Gram–Schmidt with `F(y, y)` zero or not
/// invertible. Over a division algebra with a form of signature
/// `(2m−1, 1)` this cannot happen, so it certifies that one of those
/// hypotheses fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropyCertificate {
    pub index: usize,
    pub vector: DVector,
    pub value: Quaternion,
    pub value_norm: FieldElement,
    pub algebra_verdict: DivisionVerdict,
}

impl fmt::Display for IsotropyCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Gram-Schmidt vector {} = {} has F(y, y) = {} with norm {}; the algebra is {}",
            self.index, self.vector, self.value, self.value_norm, self.algebra_verdict
        )
    }
}

/// An element of `D^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DVector {
    coords: Vec<Quaternion>,
}

impl DVector {
    pub fn new(coords: Vec<Quaternion>) -> Self {
        Self { coords }
    }

    pub fn zero(m: usize) -> Self {
        Self { coords: vec![Quaternion::zero(); m] }
    }

    /// The standard basis vector `e_t`.
    pub fn basis(m: usize, t: usize) -> Self {
        let mut v = Self::zero(m);
        v.coords[t] = Quaternion::one();
        v
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Quaternion] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Quaternion::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.coords.iter().zip(&o.coords).map(|(p, q)| p.add(q)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.coords.iter().zip(&o.coords).map(|(p, q)| p.sub(q)).collect())
    }

    /// `x·q`.
    pub fn right_mul(&self, alg: &QuaternionAlgebra, q: &Quaternion) -> Self {
        Self::new(self.coords.iter().map(|p| alg.mul(p, q)).collect())
    }

    /// Coordinates over the centre, four per entry.
    fn realify(&self) -> Vec<FieldElement> {
        self.coords.iter().flat_map(|q| q.coords().map(Clone::clone)).collect()
    }

    fn radicands(&self) -> Vec<u64> {
        self.coords.iter().flat_map(Quaternion::radicands).collect()
    }
}

impl fmt::Display for DVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (t, q) in self.coords.iter().enumerate() {
            if t > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str(")")
    }
}

/// A square matrix of quaternions acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QMatrix {
    rows: Vec<Vec<Quaternion>>,
}

impl QMatrix {
    pub fn new(rows: Vec<Vec<Quaternion>>) -> Self {
        Self { rows }
    }

    pub fn identity(m: usize) -> Self {
        Self::new(
            (0..m)
                .map(|i| (0..m).map(|j| if i == j { Quaternion::one() } else { Quaternion::zero() }).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Quaternion {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Quaternion>] {
        &self.rows
    }

    pub fn mul(&self, alg: &QuaternionAlgebra, o: &Self) -> Self {
        let m = self.dim();
        Self::new(
            (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            (0..m).fold(Quaternion::zero(), |acc, t| acc.add(&alg.mul(&self.rows[i][t], &o.rows[t][j])))
                        })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn apply(&self, alg: &QuaternionAlgebra, v: &DVector) -> DVector {
        DVector::new(
            self.rows
                .iter()
                .map(|row| row.iter().zip(v.coords()).fold(Quaternion::zero(), |acc, (a, x)| acc.add(&alg.mul(a, x))))
                .collect(),
        )
    }

    /// Conjugate transpose `A*`.
    pub fn star(&self) -> Self {
        let m = self.dim();
        Self::new((0..m).map(|i| (0..m).map(|j| self.rows[j][i].conj()).collect()).collect())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    /// The centre-linear map `y ↦ A y` on `4m` coordinates.
    fn realify(&self, alg: &QuaternionAlgebra) -> Matrix {
        let m = self.dim();
        let units = [Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()];
        let mut out = Matrix::zeros(4 * m, 4 * m);
        for i in 0..m {
            for j in 0..m {
                for (c, u) in units.iter().enumerate() {
                    let img = alg.mul(&self.rows[i][j], u);
                    for (r, val) in img.coords().into_iter().enumerate() {
                        out[(4 * i + r, 4 * j + c)] = val.clone();
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A nondegenerate skew-Hermitian form, `A* = −A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkewHermitianForm {
    algebra: QuaternionAlgebra,
    gram: QMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub rank: usize,
    pub realified_rank: usize,
    pub field: MQField,
}

/// Pairwise orthogonal bases of `D₁` and `D₁^⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalDecomposition {
    pub basis1: Vec<DVector>,
    pub basis_perp: Vec<DVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeTwoInvolution {
    pub theta: QMatrix,
    pub submodule_rank: usize,
    /// `None` when the algebra is ramified at the identity embedding, where
    /// no real signature is defined.
    pub restricted_signature: Option<SignatureTriple>,
    /// Restricted signature is `(2l−1, 1)`.
    pub hyperbolic: bool,
}

/// The real symmetric form `f` with `F(x, y) = f(x, y)·(i − √a)·j` on the
/// `√a`-eigenspace of right multiplication by `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociatedForm {
    /// `D(a, b)` after applying the embedding and, if needed, swapping the
    /// parameters so that `a > 0`.
    pub a: FieldElement,
    pub b: FieldElement,
    pub swapped: bool,
    pub sqrt_a: FieldElement,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingSignature {
    pub embedding: Embedding,
    pub split: bool,
    pub signature: Option<SignatureTriple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormAdmissibility {
    pub rank: usize,
    pub embeddings: Vec<EmbeddingSignature>,
    pub admissible: bool,
    pub reason: String,
}

#[derive(Deserialize)]
struct FormDoc {
    algebra: AlgebraDoc,
    gram: Vec<Vec<QuatDoc>>,
}

#[derive(Deserialize)]
struct AlgebraDoc {
    a: String,
    b: String,
}

#[derive(Deserialize, Default)]
struct QuatDoc {
    #[serde(default)]
    w: Option<String>,
    #[serde(default)]
    x: Option<String>,
    #[serde(default)]
    y: Option<String>,
    #[serde(default)]
    z: Option<String>,
}

impl QuatDoc {
    fn parse(&self, path: &str) -> Result<Quaternion, SkewError> {
        let coord = |t: &Option<String>, name: &str| -> Result<FieldElement, SkewError> {
            match t {
                None => Ok(FieldElement::zero()),
                Some(t) => parse_expr(t).map_err(|source| SkewError::Expr { path: format!("{path}.{name}"), source }),
            }
        };
        Ok(Quaternion::new(coord(&self.w, "w")?, coord(&self.x, "x")?, coord(&self.y, "y")?, coord(&self.z, "z")?))
    }
}

fn json_error(e: serde_json::Error) -> SkewError {
    SkewError::Json { line: e.line(), column: e.column(), msg: e.to_string() }
}

/// Vectors in the JSON layout `[[{"w": "1"}, {}], ...]`; absent
/// coordinates are zero.
pub fn vectors_from_json_str(text: &str) -> Result<Vec<DVector>, SkewError> {
    let doc: Vec<Vec<QuatDoc>> = serde_json::from_str(text).map_err(json_error)?;
    doc.iter()
        .enumerate()
        .map(|(s, v)| {
            v.iter()
                .enumerate()
                .map(|(t, q)| q.parse(&format!("vectors[{s}][{t}]")))
                .collect::<Result<Vec<_>, _>>()
                .map(DVector::new)
        })
        .collect()
}

const UNITS: usize = 4;

fn units() -> [Quaternion; UNITS] {
    [Quaternion::one(), Quaternion::i(), Quaternion::j(), Quaternion::k()]
}

/// Rank over the algebra of the right span of `vectors`.
fn d_rank(alg: &QuaternionAlgebra, vectors: &[DVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = vectors[0].len();
    let rows: Vec<Vec<FieldElement>> = vectors
        .iter()
        .flat_map(|v| units().map(|u| v.right_mul(alg, &u).realify()))
        .collect();
    let mat = Matrix::from_fn(rows.len(), UNITS * m, |r, c| rows[r][c].clone());
    mat.rank() / UNITS
}

impl SkewHermitianForm {
    /// Validates skew symmetry and nondegeneracy. The algebra is extended to
    /// a field containing every entry.
    pub fn new(algebra: QuaternionAlgebra, gram: Vec<Vec<Quaternion>>) -> Result<Self, SkewError> {
        let m = gram.len();
        if m == 0 {
            return Err(SkewError::NotSquare { rows: 0, cols: 0 });
        }
        if let Some(row) = gram.iter().find(|r| r.len() != m) {
            return Err(SkewError::NotSquare { rows: m, cols: row.len() });
        }
        let field = algebra.field().extended_with(gram.iter().flatten().flat_map(Quaternion::radicands));
        let algebra = if field == *algebra.field() { algebra } else { algebra.extended_to(field)? };
        let form = Self { algebra, gram: QMatrix::new(gram) };
        form.validate()?;
        Ok(form)
    }

    pub fn from_json_str(text: &str) -> Result<Self, SkewError> {
        let doc: FormDoc = serde_json::from_str(text).map_err(json_error)?;
        let a = parse_expr(&doc.algebra.a).map_err(|source| SkewError::Expr { path: "algebra.a".into(), source })?;
        let b = parse_expr(&doc.algebra.b).map_err(|source| SkewError::Expr { path: "algebra.b".into(), source })?;
        let algebra = QuaternionAlgebra::new(a, b)?;
        let gram = doc
            .gram
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, q)| q.parse(&format!("gram[{i}][{j}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(algebra, gram)
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.dim()
    }

    /// Entry-wise `a_ij = −a_ji*`, then full rank of `y ↦ A y` over the
    /// centre.
    pub fn validate(&self) -> Result<ValidationReport, SkewError> {
        let m = self.rank();
        for i in 0..m {
            for j in i..m {
                let expected = self.gram.entry(j, i).conj().neg();
                if *self.gram.entry(i, j) != expected {
                    return Err(SkewError::NotSkew {
                        i,
                        j,
                        entry: self.gram.entry(i, j).to_string(),
                        expected: expected.to_string(),
                    });
                }
            }
        }
        let realified_rank = self.gram.realify(&self.algebra).rank();
        if realified_rank < UNITS * m {
            return Err(SkewError::Degenerate { rank: realified_rank, full: UNITS * m });
        }
        Ok(ValidationReport { rank: m, realified_rank, field: self.algebra.field().clone() })
    }

    fn check_len(&self, v: &DVector) -> Result<(), SkewError> {
        if v.len() != self.rank() {
            return Err(SkewError::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    /// `F(x, y) = Σ x_i* a_ij y_j`.
    pub fn evaluate(&self, x: &DVector, y: &DVector) -> Result<Quaternion, SkewError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.eval_unchecked(x, y))
    }

    fn eval_unchecked(&self, x: &DVector, y: &DVector) -> Quaternion {
        let alg = &self.algebra;
        let ay = self.gram.apply(alg, y);
        x.coords()
            .iter()
            .zip(ay.coords())
            .fold(Quaternion::zero(), |acc, (xi, v)| acc.add(&alg.mul(&xi.conj(), v)))
    }

    /// Gram matrix `[F(v_s, v_t)]` of the restriction to the span of `vs`.
    pub fn restricted_gram(&self, vs: &[DVector]) -> Result<QMatrix, SkewError> {
        for v in vs {
            self.check_len(v)?;
        }
        Ok(QMatrix::new(
            vs.iter().map(|x| vs.iter().map(|y| self.eval_unchecked(x, y)).collect()).collect(),
        ))
    }

    /// The restriction of `F` to the span of `vs`, which must be
    /// independent and carry a nondegenerate restriction.
    pub fn restrict(&self, vs: &[DVector]) -> Result<SkewHermitianForm, SkewError> {
        self.check_independent(vs)?;
        let g = self.restricted_gram(vs)?;
        let restricted = Self { algebra: self.algebra.clone(), gram: g };
        match restricted.validate() {
            Ok(_) => Ok(restricted),
            Err(SkewError::Degenerate { rank, full }) => Err(SkewError::DegenerateRestriction { rank, full }),
            Err(e) => Err(SkewError::Inconsistent(format!("restricted Gram matrix is not skew-Hermitian: {e}"))),
        }
    }

    fn check_independent(&self, vs: &[DVector]) -> Result<(), SkewError> {
        for v in vs {
            self.check_len(v)?;
        }
        let rank = d_rank(&self.algebra, vs);
        if rank < vs.len() {
            return Err(SkewError::DependentVectors { rank, len: vs.len() });
        }
        Ok(())
    }

    /// `proj_y(x) = y F(y, y)⁻¹ F(y, x)` and `y_i = x_i − Σ_{j<i} proj_{y_j}(x_i)`.
    pub fn gram_schmidt(&self, vectors: &[DVector]) -> Result<Vec<DVector>, SkewError> {
        self.check_independent(vectors)?;
        let alg = &self.algebra;
        let mut ys: Vec<DVector> = Vec::with_capacity(vectors.len());
        let mut inverses: Vec<Quaternion> = Vec::with_capacity(vectors.len());
        for (idx, x) in vectors.iter().enumerate() {
            let mut y = x.clone();
            for (yj, inv) in ys.iter().zip(&inverses) {
                let coeff = alg.mul(inv, &self.eval_unchecked(yj, x));
                y = y.sub(&yj.right_mul(alg, &coeff));
            }
            let value = self.eval_unchecked(&y, &y);
            let Some(inv) = alg.inverse(&value) else {
                return Err(SkewError::Isotropic(Box::new(IsotropyCertificate {
                    index: idx,
                    value_norm: alg.norm(&value),
                    vector: y,
                    value,
                    algebra_verdict: alg.is_division().verdict,
                })));
            };
            ys.push(y);
            inverses.push(inv);
        }
        for i in 0..ys.len() {
            for j in 0..i {
                if !self.eval_unchecked(&ys[j], &ys[i]).is_zero() {
                    return Err(SkewError::Inconsistent(format!("Gram-Schmidt vectors {j} and {i} are not orthogonal")));
                }
            }
        }
        Ok(ys)
    }

    /// Completes `d1` by standard basis vectors and orthogonalizes; the
    /// tail spans `D₁^⊥`.
    pub fn orthogonal_complement(&self, d1: &[DVector]) -> Result<OrthogonalDecomposition, SkewError> {
        self.restrict(d1)?;
        let m = self.rank();
        let mut basis: Vec<DVector> = d1.to_vec();
        for t in 0..m {
            if basis.len() == m {
                break;
            }
            basis.push(DVector::basis(m, t));
            if d_rank(&self.algebra, &basis) < basis.len() {
                basis.pop();
            }
        }
        let ys = self.gram_schmidt(&basis)?;
        let basis_perp = ys[d1.len()..].to_vec();
        for x in d1 {
            for y in &basis_perp {
                if !self.eval_unchecked(x, y).is_zero() {
                    return Err(SkewError::Inconsistent("complement is not orthogonal to the submodule".into()));
                }
            }
        }
        Ok(OrthogonalDecomposition { basis1: d1.to_vec(), basis_perp })
    }

    /// `θ = 2P − I`, where `P x = Σ_s y_s F(y_s, y_s)⁻¹ F(y_s, x)` is the
    /// orthogonal projection onto `D₁` for an orthogonal basis `y_s`.
    pub fn involution_from_submodule(&self, d1: &[DVector]) -> Result<TypeTwoInvolution, SkewError> {
        let restricted = self.restrict(d1)?;
        let alg = &self.algebra;
        let m = self.rank();
        let ys = self.gram_schmidt(d1)?;
        let mut rows = vec![vec![Quaternion::zero(); m]; m];
        for y in &ys {
            let inv = alg.inverse(&self.eval_unchecked(y, y)).expect("checked by Gram-Schmidt");
            // Row functional x ↦ F(y, x) has coefficients Σ_i y_i* a_ij.
            let functional: Vec<Quaternion> = (0..m)
                .map(|j| {
                    (0..m).fold(Quaternion::zero(), |acc, i| {
                        acc.add(&alg.mul(&y.coords()[i].conj(), self.gram.entry(i, j)))
                    })
                })
                .collect();
            for (p, row) in rows.iter_mut().enumerate() {
                let left = alg.mul(&y.coords()[p], &inv);
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = cell.add(&alg.mul(&left, &functional[j]));
                }
            }
        }
        let two = FieldElement::from_int(2);
        for (p, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = cell.scale(&two);
                if p == j {
                    *cell = cell.sub(&Quaternion::one());
                }
            }
        }
        let theta = QMatrix::new(rows);
        if !theta.mul(alg, &theta).is_identity() {
            return Err(SkewError::Inconsistent("theta does not square to the identity".into()));
        }
        if theta.star().mul(alg, &self.gram).mul(alg, &theta) != self.gram {
            return Err(SkewError::Inconsistent("theta does not preserve the form".into()));
        }
        let l = d1.len();
        let restricted_signature = match restricted.signature() {
            Ok(s) => Some(s),
            Err(SkewError::Ramified(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(TypeTwoInvolution {
            theta,
            submodule_rank: l,
            restricted_signature,
            hyperbolic: restricted_signature == Some(SignatureTriple::new(2 * l - 1, 1, 0)),
        })
    }

    /// `F` preserved by a matrix `T`: `T* A T = A`.
    pub fn preserves(&self, t: &QMatrix) -> bool {
        t.star().mul(&self.algebra, &self.gram).mul(&self.algebra, t) == self.gram
    }

    /// The associated form at the identity embedding.
    pub fn associated_symmetric_form(&self) -> Result<AssociatedForm, SkewError> {
        let e = self.algebra.field().identity_embedding();
        self.associated_symmetric_form_at(&e)
    }

    /// Applies `e` to all data, swaps `D(a, b) ≅ D(b, a)` via
    /// `(w, x, y, z) ↦ (w, y, x, −z)` when only `b` is positive, and reads
    /// `f` off the `k`-coefficient of `F` on the basis `e_t(i + √a)`,
    /// `e_t(i − √a)j` of the `√a`-eigenspace of right multiplication by `i`.
    pub fn associated_symmetric_form_at(&self, e: &Embedding) -> Result<AssociatedForm, SkewError> {
        let field = self.algebra.field();
        let a = field.embed(self.algebra.a(), e)?;
        let b = field.embed(self.algebra.b(), e)?;
        let embed_q = |q: &Quaternion| -> Result<Quaternion, FieldError> {
            Ok(Quaternion::new(field.embed(&q.w, e)?, field.embed(&q.x, e)?, field.embed(&q.y, e)?, field.embed(&q.z, e)?))
        };
        let swapped = !a.is_positive();
        if swapped && !b.is_positive() {
            return Err(SkewError::Ramified(e.clone()));
        }
        let (a, b) = if swapped { (b, a) } else { (a, b) };
        let m = self.rank();
        let mut gram = Vec::with_capacity(m);
        for row in self.gram.rows() {
            let mut out = Vec::with_capacity(m);
            for q in row {
                let q = embed_q(q)?;
                out.push(if swapped { Quaternion::new(q.w, q.y, q.x, -q.z) } else { q });
            }
            gram.push(out);
        }
        let sqrt_a = positive_sqrt(field, &a).ok_or_else(|| SkewError::NoSquareRoot {
            a: self.algebra.a().to_string(),
            b: self.algebra.b().to_string(),
        })?;
        let alg = QuaternionAlgebra::new(a.clone(), b.clone())?;
        let s = Quaternion::scalar(sqrt_a.clone());
        let plus = Quaternion::i().add(&s);
        let minus_j = alg.mul(&Quaternion::i().sub(&s), &Quaternion::j());
        let gens = [plus, minus_j];
        let n = 2 * m;
        let mut f = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let (t, u) = (r / 2, c / 2);
                let value = alg.mul(&alg.mul(&gens[r % 2].conj(), &gram[t][u]), &gens[c % 2]);
                let consistent = value.w.is_zero() && value.x.is_zero() && value.y == -(&sqrt_a * &value.z);
                if !consistent {
                    return Err(SkewError::Inconsistent(format!(
                        "F on the eigenspace gave {value}, not a multiple of (i - sqrt(a))j"
                    )));
                }
                f[(r, c)] = value.z;
            }
        }
        if !f.is_symmetric() {
            return Err(SkewError::Inconsistent("associated form is not symmetric".into()));
        }
        Ok(AssociatedForm { a, b, swapped, sqrt_a, matrix: f })
    }

    pub fn signature(&self) -> Result<SignatureTriple, SkewError> {
        self.signature_at(&self.algebra.field().identity_embedding())
    }

    pub fn signature_at(&self, e: &Embedding) -> Result<SignatureTriple, SkewError> {
        Ok(signature(&self.associated_symmetric_form_at(e)?.matrix))
    }

    /// Identity embedding `(2m−1, 1)`, every other embedding split with
    /// signature `(2m, 0)`.
    pub fn admissibility(&self) -> Result<FormAdmissibility, SkewError> {
        let m = self.rank();
        let mut embeddings = Vec::new();
        let mut failures = Vec::new();
        for e in self.algebra.field().embeddings() {
            let split = self.algebra.is_split_at(&e);
            let sig = if split { Some(self.signature_at(&e)?) } else { None };
            let want = if e.is_identity() {
                SignatureTriple::new(2 * m - 1, 1, 0)
            } else {
                SignatureTriple::new(2 * m, 0, 0)
            };
            match sig {
                None => failures.push(format!("ramified at {e}")),
                Some(s) if s != want => failures.push(format!("signature {s} at {e}, expected {want}")),
                Some(_) => {}
            }
            embeddings.push(EmbeddingSignature { embedding: e, split, signature: sig });
        }
        let admissible = failures.is_empty();
        let reason = if admissible { "admissible".to_string() } else { failures.join("; ") };
        Ok(FormAdmissibility { rank: m, embeddings, admissible, reason })
    }

    /// Field containing the entries and the parameters.
    pub fn field(&self) -> &MQField {
        self.algebra.field()
    }

    /// Extends the algebra so that `vs` lie over its field.
    pub fn extended_for(&self, vs: &[DVector]) -> Result<Self, SkewError> {
        let field = self.field().extended_with(vs.iter().flat_map(DVector::radicands));
        if field == *self.field() {
            return Ok(self.clone());
        }
        Ok(Self { algebra: self.algebra.extended_to(field)?, gram: self.gram.clone() })
    }
}

/// The positive square root of a positive element, if it lies in a
/// multiquadratic field.
fn positive_sqrt(field: &MQField, x: &FieldElement) -> Option<FieldElement> {
    let root = match x.as_rational() {
        Some(q) => FieldElement::sqrt_rational(&q).ok()?,
        None => field.sqrt(x)?,
    };
    Some(if root.is_negative() { -root } else { root })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: i64, x: i64, y: i64, z: i64) -> Quaternion {
        Quaternion::from_ints(w, x, y, z)
    }

    fn alg(a: i64, b: i64) -> QuaternionAlgebra {
        QuaternionAlgebra::from_ints(a, b).unwrap()
    }

    fn j() -> Quaternion {
        Quaternion::j()
    }

    fn diag_j(a: i64, b: i64, m: usize) -> SkewHermitianForm {
        let gram = (0..m)
            .map(|r| (0..m).map(|c| if r == c { j() } else { Quaternion::zero() }).collect())
            .collect();
        SkewHermitianForm::new(alg(a, b), gram).unwrap()
    }

    #[test]
    fn validation() {
        assert!(SkewHermitianForm::new(alg(-1, -1), vec![vec![j()]]).is_ok());
        let err = SkewHermitianForm::new(alg(-1, -1), vec![vec![Quaternion::one()]]).unwrap_err();
        assert!(matches!(err, SkewError::NotSkew { i: 0, j: 0, .. }), "{err}");
        let f = vec![vec![j(), q(1, 0, 0, 0)], vec![q(-1, 0, 0, 0), j()]];
        assert!(SkewHermitianForm::new(alg(2, -5), f.clone()).is_ok());
        // With j² = −1, A·(−j·y, y) = 0 for every y.
        let err = SkewHermitianForm::new(alg(-1, -1), f).unwrap_err();
        assert!(matches!(err, SkewError::Degenerate { rank: 4, full: 8 }), "{err}");
        let bad = vec![vec![j(), q(1, 0, 0, 0)], vec![q(1, 0, 0, 0), j()]];
        let err = SkewHermitianForm::new(alg(2, -5), bad).unwrap_err();
        assert!(matches!(err, SkewError::NotSkew { i: 0, j: 1, .. }), "{err}");
    }

    #[test]
    fn degenerate_forms_are_rejected() {
        // Over the split algebra D(1,1), (1 + i)j is a zero divisor.
        let zd = alg(1, 1).mul(&q(1, 1, 0, 0), &j());
        let err = SkewHermitianForm::new(alg(1, 1), vec![vec![zd]]).unwrap_err();
        assert!(matches!(err, SkewError::Degenerate { rank: 2, full: 4 }), "{err}");
        let zero = vec![vec![Quaternion::zero(); 2]; 2];
        assert!(matches!(
            SkewHermitianForm::new(alg(-1, -1), zero).unwrap_err(),
            SkewError::Degenerate { rank: 0, .. }
        ));
    }

    #[test]
    fn evaluation() {
        let f = diag_j(-1, -1, 1);
        let e1 = DVector::basis(1, 0);
        assert_eq!(f.evaluate(&e1, &e1).unwrap(), j());
        let x = e1.right_mul(f.algebra(), &Quaternion::i());
        assert_eq!(f.evaluate(&x, &e1).unwrap(), q(0, 0, 0, -1));
        assert!(matches!(
            f.evaluate(&DVector::zero(2), &e1),
            Err(SkewError::DimensionMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn gram_schmidt_worked_example() {
        let a = alg(2, -5);
        let f = SkewHermitianForm::new(a, vec![vec![j(), q(1, 0, 0, 0)], vec![q(-1, 0, 0, 0), j()]]).unwrap();
        let ys = f.gram_schmidt(&[DVector::basis(2, 0), DVector::basis(2, 1)]).unwrap();
        // j⁻¹ = j*/N(j) = −j/5, so y₂ = e₂ − e₁·(−j/5)·1 = (j/5, 1).
        let fifth = FieldElement::from_ratio(1, 5);
        let expected = DVector::new(vec![j().scale(&fifth), Quaternion::one()]);
        assert_eq!(ys[1], expected);
        assert!(f.evaluate(&ys[0], &ys[1]).unwrap().is_zero());
    }

    #[test]
    fn gram_schmidt_keeps_orthogonal_input() {
        let f = diag_j(-1, -1, 3);
        let basis: Vec<DVector> = (0..3).map(|t| DVector::basis(3, t)).collect();
        assert_eq!(f.gram_schmidt(&basis).unwrap(), basis);
    }

    #[test]
    fn gram_schmidt_certifies_isotropic_vector() {
        // diag(j, −j) over D(1,1): F(e₁ + e₂, e₁ + e₂) = 0.
        let f = SkewHermitianForm::new(alg(1, 1), vec![vec![j(), Quaternion::zero()], vec![Quaternion::zero(), j().neg()]])
            .unwrap();
        let v = DVector::new(vec![Quaternion::one(), Quaternion::one()]);
        let err = f.gram_schmidt(&[v.clone(), DVector::basis(2, 0)]).unwrap_err();
        let SkewError::Isotropic(cert) = err else { panic!("expected certificate, got {err}") };
        assert_eq!(cert.index, 0);
        assert_eq!(cert.vector, v);
        assert!(cert.value.is_zero());
        assert_eq!(cert.algebra_verdict, DivisionVerdict::Split);
    }

    #[test]
    fn dependent_vectors_are_rejected() {
        let f = diag_j(-1, -1, 2);
        let v = DVector::basis(2, 0);
        let w = v.right_mul(f.algebra(), &q(1, 2, 0, 3));
        assert!(matches!(f.gram_schmidt(&[v, w]), Err(SkewError::DependentVectors { rank: 1, len: 2 })));
    }

    #[test]
    fn complements() {
        let f = diag_j(-1, -1, 2);
        let full = [DVector::basis(2, 0), DVector::basis(2, 1)];
        assert!(f.orthogonal_complement(&full).unwrap().basis_perp.is_empty());
        let d = f.orthogonal_complement(&[DVector::basis(2, 0)]).unwrap();
        assert_eq!(d.basis_perp, vec![DVector::basis(2, 1)]);
        let v = DVector::new(vec![Quaternion::one(), q(1, 2, 0, 1)]);
        let d = f.orthogonal_complement(std::slice::from_ref(&v)).unwrap();
        assert_eq!(d.basis_perp.len(), 1);
        assert!(f.evaluate(&v, &d.basis_perp[0]).unwrap().is_zero());
        assert_eq!(d_rank(f.algebra(), &[v, d.basis_perp[0].clone()]), 2);
    }

    #[test]
    fn involutions() {
        let f = diag_j(-1, -1, 2);
        let full = [DVector::basis(2, 0), DVector::basis(2, 1)];
        assert!(f.involution_from_submodule(&full).unwrap().theta.is_identity());
        let inv = f.involution_from_submodule(&[DVector::basis(2, 0)]).unwrap();
        let expected = QMatrix::new(vec![
            vec![Quaternion::one(), Quaternion::zero()],
            vec![Quaternion::zero(), Quaternion::one().neg()],
        ]);
        assert_eq!(inv.theta, expected);
        assert!(f.preserves(&inv.theta));
    }

    #[test]
    fn involution_flags_hyperbolic_restriction() {
        // Over D(1,1) each j contributes (1, 1).
        let f = diag_j(1, 1, 2);
        let inv = f.involution_from_submodule(&[DVector::basis(2, 0)]).unwrap();
        assert_eq!(inv.restricted_signature, Some(SignatureTriple::new(1, 1, 0)));
        assert!(inv.hyperbolic);
    }

    #[test]
    fn degenerate_restriction_is_an_error() {
        let f = SkewHermitianForm::new(alg(1, 1), vec![vec![j(), Quaternion::zero()], vec![Quaternion::zero(), j().neg()]])
            .unwrap();
        let v = DVector::new(vec![Quaternion::one(), Quaternion::one()]);
        assert!(matches!(
            f.involution_from_submodule(&[v]),
            Err(SkewError::DegenerateRestriction { .. })
        ));
    }

    #[test]
    fn associated_form_over_d11() {
        // (1 − i) j (1 + i) = 2j − 2k and ((i−1)j)* j (i−1)j = 2j + 2k, so
        // f = diag(−2, 2); the cross terms cancel.
        let f = diag_j(1, 1, 1);
        let af = f.associated_symmetric_form().unwrap();
        let m = Matrix::from_rows(vec![
            vec![FieldElement::from_int(-2), FieldElement::zero()],
            vec![FieldElement::zero(), FieldElement::from_int(2)],
        ]);
        assert_eq!(af.matrix, m);
        assert_eq!(f.signature().unwrap(), SignatureTriple::new(1, 1, 0));
        assert!(f.admissibility().unwrap().admissible);
    }

    #[test]
    fn associated_form_over_d2m1() {
        let f = diag_j(2, -1, 1);
        let af = f.associated_symmetric_form().unwrap();
        let s = FieldElement::sqrt_of(2).unwrap();
        let d = -(&s + &s);
        let m = Matrix::from_rows(vec![vec![d.clone(), FieldElement::zero()], vec![FieldElement::zero(), d]]);
        assert_eq!(af.matrix, m);
        assert_eq!(f.signature().unwrap(), SignatureTriple::new(0, 2, 0));
        assert!(!f.admissibility().unwrap().admissible);
    }

    #[test]
    fn swapped_parameters() {
        // D(−1, 2) ≅ D(2, −1); j ↦ i under the swap.
        let f = SkewHermitianForm::new(alg(-1, 2), vec![vec![Quaternion::i()]]).unwrap();
        let af = f.associated_symmetric_form().unwrap();
        assert!(af.swapped);
        assert_eq!(signature(&af.matrix), SignatureTriple::new(0, 2, 0));
        let ramified = diag_j(-1, -1, 1);
        assert!(matches!(ramified.signature(), Err(SkewError::Ramified(_))));
    }

    #[test]
    fn basis_for_unit_parameter_is_independent() {
        let a = alg(1, 1);
        let i = Quaternion::i();
        let one = Quaternion::one();
        let elems = [
            a.mul(&i.sub(&one), &j()),
            i.sub(&one),
            i.add(&one),
            a.mul(&i.add(&one), &j()),
        ];
        let m = Matrix::from_fn(4, 4, |r, c| elems[r].coords()[c].clone());
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn diagonal_j_k_has_full_rank() {
        let f = SkewHermitianForm::new(
            alg(1, 1),
            vec![vec![j(), Quaternion::zero()], vec![Quaternion::zero(), Quaternion::k()]],
        )
        .unwrap();
        let af = f.associated_symmetric_form().unwrap();
        assert_eq!(af.matrix.rank(), 4);
        assert_eq!(signature(&af.matrix).dim(), 4);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"algebra": {"a": "2", "b": "-5"},
            "gram": [[{"y": "1"}, {"w": "1"}], [{"w": "-1"}, {"y": "1"}]]}"#;
        let f = SkewHermitianForm::from_json_str(text).unwrap();
        assert_eq!(f.rank(), 2);
        let vs = vectors_from_json_str(r#"[[{"w": "1"}, {}]]"#).unwrap();
        assert_eq!(vs, vec![DVector::basis(2, 0)]);
        let err = SkewHermitianForm::from_json_str(r#"{"algebra": {"a": "2", "b": "-5"}, "gram": [[{"y": "1+"}]]}"#)
            .unwrap_err();
        assert!(err.to_string().starts_with("gram[0][0].y"), "{err}");
    }
}
