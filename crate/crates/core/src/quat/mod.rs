//! Quaternion algebras `D(a, b)`: `i² = a`, `j² = b`, `ij = −ji = k`.

mod hilbert;

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{parse_expr, subfield_generated, Embedding, ExprError, FieldElement, MQField};
use crate::linalg::Matrix;

pub use hilbert::{hilbert_symbol, local_symbols, relevant_places, Place};

#[derive(Debug, Error)]
pub enum QuatError {
    #[error("quaternion algebra parameters must be nonzero")]
    ZeroParameter,
    #[error("parameter {0} does not lie in {1}")]
    OutsideField(String, String),
    #[error("D({a}, {b}) has no 2x2 representation over {field}: neither parameter is a square there")]
    NotSplitRepresentable { a: String, b: String, field: String },
    #[error("cannot parse algebra `{0}`: expected D(a,b)")]
    BadAlgebra(String),
    #[error("cannot parse quaternion `{0}`: expected four comma-separated coordinates")]
    BadQuaternion(String),
    #[error("invalid expression: {0}")]
    Expr(#[from] ExprError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuaternionAlgebra {
    a: FieldElement,
    b: FieldElement,
    field: MQField,
}

/// `w + x·i + y·j + z·k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: FieldElement,
    pub x: FieldElement,
    pub y: FieldElement,
    pub z: FieldElement,
}

impl Quaternion {
    pub fn new(w: FieldElement, x: FieldElement, y: FieldElement, z: FieldElement) -> Self {
        Self { w, x, y, z }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: FieldElement) -> Self {
        Self { w: c, ..Self::default() }
    }

    pub fn one() -> Self {
        Self::scalar(FieldElement::one())
    }

    pub fn i() -> Self {
        Self { x: FieldElement::one(), ..Self::default() }
    }

    pub fn j() -> Self {
        Self { y: FieldElement::one(), ..Self::default() }
    }

    pub fn k() -> Self {
        Self { z: FieldElement::one(), ..Self::default() }
    }

    pub fn from_ints(w: i64, x: i64, y: i64, z: i64) -> Self {
        Self::new(w.into(), x.into(), y.into(), z.into())
    }

    /// `"w,x,y,z"` with coordinates in the expression grammar.
    pub fn parse(text: &str) -> Result<Self, QuatError> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != 4 {
            return Err(QuatError::BadQuaternion(text.to_string()));
        }
        Ok(Self::new(
            parse_expr(parts[0])?,
            parse_expr(parts[1])?,
            parse_expr(parts[2])?,
            parse_expr(parts[3])?,
        ))
    }

    pub fn coords(&self) -> [&FieldElement; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }

    pub fn is_scalar(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    /// Zero real part.
    pub fn is_pure(&self) -> bool {
        self.w.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.w + &o.w, &self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.w - &o.w, &self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.w, -&self.x, -&self.y, -&self.z)
    }

    /// Multiplication by a central scalar.
    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(&self.w * c, &self.x * c, &self.y * c, &self.z * c)
    }

    /// The standard involution `q*`: negates `i`, `j`, `k`.
    pub fn conj(&self) -> Self {
        Self::new(self.w.clone(), -&self.x, -&self.y, -&self.z)
    }

    pub fn trace(&self) -> FieldElement {
        &self.w + &self.w
    }

    pub fn radicands(&self) -> Vec<u64> {
        self.coords().iter().flat_map(|c| c.radicands().collect::<Vec<_>>()).collect()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, unit) in self.coords().into_iter().zip(["", "i", "j", "k"]) {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = match c.as_rational() {
                Some(r) if r < BigRational::from_integer(0.into()) => (true, (-c).to_string()),
                Some(_) => (false, c.to_string()),
                None => (false, format!("({c})")),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (unit, mag.as_str()) {
                ("", m) => f.write_str(m)?,
                (u, "1") => f.write_str(u)?,
                (u, m) => write!(f, "{m}*{u}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivisionVerdict {
    Division,
    Split,
    Unknown,
}

impl fmt::Display for DivisionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivisionVerdict::Division => "division",
            DivisionVerdict::Split => "split",
            DivisionVerdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSplit {
    pub embedding: Embedding,
    pub split: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub embeddings: Vec<EmbeddingSplit>,
    /// Local symbols over Q, when both parameters are rational.
    pub symbols: Option<Vec<(Place, i8)>>,
    pub verdict: DivisionVerdict,
    /// A nonzero element of norm zero, when one was found.
    pub zero_divisor: Option<Quaternion>,
    pub reason: String,
}

/// Coefficient bound for the zero-divisor search.
const SEARCH_COEFF: i64 = 4;
/// Elements tried per search; the set grows with the field degree.
const SEARCH_LIMIT: usize = 100_000;

impl QuaternionAlgebra {
    /// `D(a, b)` over the field generated by the parameters.
    pub fn new(a: FieldElement, b: FieldElement) -> Result<Self, QuatError> {
        let field = subfield_generated([&a, &b]);
        Self::over(a, b, field)
    }

    pub fn over(a: FieldElement, b: FieldElement, field: MQField) -> Result<Self, QuatError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::ZeroParameter);
        }
        for p in [&a, &b] {
            if !field.contains(p) {
                return Err(QuatError::OutsideField(p.to_string(), field.to_string()));
            }
        }
        Ok(Self { a, b, field })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, QuatError> {
        Self::new(a.into(), b.into())
    }

    /// `D(a,b)` with parameters in the expression grammar.
    pub fn parse(text: &str) -> Result<Self, QuatError> {
        let t = text.trim();
        let inner = t
            .strip_prefix("D(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| QuatError::BadAlgebra(text.to_string()))?;
        let (a, b) = split_top_level_comma(inner).ok_or_else(|| QuatError::BadAlgebra(text.to_string()))?;
        Self::new(parse_expr(a)?, parse_expr(b)?)
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    pub fn field(&self) -> &MQField {
        &self.field
    }

    /// The same algebra over a larger field.
    pub fn extended_to(&self, field: MQField) -> Result<Self, QuatError> {
        Self::over(self.a.clone(), self.b.clone(), field)
    }

    pub fn contains(&self, q: &Quaternion) -> bool {
        q.coords().iter().all(|c| self.field.contains(c))
    }

    /// Smallest extension of the base field containing the coordinates of
    /// `q` as well.
    pub fn field_with(&self, q: &Quaternion) -> MQField {
        self.field.extended_with(q.radicands())
    }

    pub fn mul(&self, p: &Quaternion, q: &Quaternion) -> Quaternion {
        let (a, b) = (&self.a, &self.b);
        let ab = a * b;
        let w = &(&(&p.w * &q.w) + &(a * &(&p.x * &q.x))) + &(&(b * &(&p.y * &q.y)) - &(&ab * &(&p.z * &q.z)));
        let x = &(&(&p.w * &q.x) + &(&p.x * &q.w)) + &(b * &(&(&p.z * &q.y) - &(&p.y * &q.z)));
        let y = &(&(&p.w * &q.y) + &(&p.y * &q.w)) + &(a * &(&(&p.x * &q.z) - &(&p.z * &q.x)));
        let z = &(&(&p.w * &q.z) + &(&p.z * &q.w)) + &(&(&p.x * &q.y) - &(&p.y * &q.x));
        Quaternion::new(w, x, y, z)
    }

    /// `N(q) = q q* = w² − a x² − b y² + ab z²`.
    pub fn norm(&self, q: &Quaternion) -> FieldElement {
        let (a, b) = (&self.a, &self.b);
        let ab = a * b;
        &(&(&q.w * &q.w) - &(a * &(&q.x * &q.x))) + &(&(&ab * &(&q.z * &q.z)) - &(b * &(&q.y * &q.y)))
    }

    pub fn trace(&self, q: &Quaternion) -> FieldElement {
        q.trace()
    }

    pub fn norm_trace(&self, q: &Quaternion) -> (FieldElement, FieldElement) {
        (self.norm(q), q.trace())
    }

    /// `q⁻¹ = q* / N(q)`.
    pub fn inverse(&self, q: &Quaternion) -> Option<Quaternion> {
        let n = self.norm(q);
        let inv = n.inv().ok()?;
        Some(q.conj().scale(&inv))
    }

    pub fn pow(&self, q: &Quaternion, e: u32) -> Quaternion {
        (0..e).fold(Quaternion::one(), |acc, _| self.mul(&acc, q))
    }

    /// A 2×2 representation over the base field, available when `a` or `b`
    /// is a square there. For `a = s²`: `i ↦ [[s, 0], [0, −s]]`,
    /// `j ↦ [[0, b], [1, 0]]`; for `b = t²` the roles of `i` and `j` swap.
    pub fn matrix_rep_split(&self, q: &Quaternion) -> Result<Matrix, QuatError> {
        let (ri, rj) = self.split_generators()?;
        let rk = ri.mul(&rj);
        let id = Matrix::identity(2);
        Ok(id
            .scale(&q.w)
            .add(&ri.scale(&q.x))
            .add(&rj.scale(&q.y))
            .add(&rk.scale(&q.z)))
    }

    fn split_generators(&self) -> Result<(Matrix, Matrix), QuatError> {
        let zero = FieldElement::zero;
        let one = FieldElement::one;
        if let Some(s) = self.field.sqrt(&self.a) {
            let ri = Matrix::from_rows(vec![vec![s.clone(), zero()], vec![zero(), -&s]]);
            let rj = Matrix::from_rows(vec![vec![zero(), self.b.clone()], vec![one(), zero()]]);
            return Ok((ri, rj));
        }
        if let Some(t) = self.field.sqrt(&self.b) {
            let rj = Matrix::from_rows(vec![vec![t.clone(), zero()], vec![zero(), -&t]]);
            let ri = Matrix::from_rows(vec![vec![zero(), self.a.clone()], vec![one(), zero()]]);
            return Ok((ri, rj));
        }
        Err(QuatError::NotSplitRepresentable {
            a: self.a.to_string(),
            b: self.b.to_string(),
            field: self.field.to_string(),
        })
    }

    /// A real quaternion algebra is ramified iff both parameters are
    /// negative.
    pub fn is_split_at(&self, e: &Embedding) -> bool {
        let sa = self.field.embed_sign(&self.a, e).expect("parameter in field");
        let sb = self.field.embed_sign(&self.b, e).expect("parameter in field");
        sa > 0 || sb > 0
    }

    pub fn is_division(&self) -> SplitReport {
        let embeddings: Vec<EmbeddingSplit> = self
            .field
            .embeddings()
            .into_iter()
            .map(|e| {
                let split = self.is_split_at(&e);
                EmbeddingSplit { embedding: e, split }
            })
            .collect();
        let symbols = match (self.a.as_rational(), self.b.as_rational()) {
            (Some(a), Some(b)) => Some(local_symbols(&a, &b)),
            _ => None,
        };
        let report = |verdict, zero_divisor, reason: String| SplitReport {
            embeddings: embeddings.clone(),
            symbols: symbols.clone(),
            verdict,
            zero_divisor,
            reason,
        };

        if let Some(e) = embeddings.iter().find(|e| !e.split) {
            return report(
                DivisionVerdict::Division,
                None,
                format!("ramified at the real place {}", e.embedding),
            );
        }
        if let Some(zd) = self.square_parameter_zero_divisor() {
            return report(DivisionVerdict::Split, Some(zd), "a parameter is a square".into());
        }
        if let Some(sym) = &symbols {
            let bad: Vec<String> = sym.iter().filter(|(_, s)| *s < 0).map(|(v, _)| v.to_string()).collect();
            if bad.is_empty() {
                // Split over Q, hence over every extension.
                let zd = self.search_zero_divisor();
                return report(DivisionVerdict::Split, zd, "all local symbols are +1".into());
            }
            if self.field.is_rational() {
                return report(
                    DivisionVerdict::Division,
                    None,
                    format!("local symbol -1 at {}", bad.join(", ")),
                );
            }
        }
        match self.search_zero_divisor() {
            Some(zd) => report(DivisionVerdict::Split, Some(zd), "found an element of norm zero".into()),
            None => report(
                DivisionVerdict::Unknown,
                None,
                "bounded search found no element of norm zero".into(),
            ),
        }
    }

    /// `s + i` (or `t + j`) has norm zero when `a = s²` (or `b = t²`).
    fn square_parameter_zero_divisor(&self) -> Option<Quaternion> {
        if let Some(s) = self.field.sqrt(&self.a) {
            return Some(Quaternion::new(s, FieldElement::one(), FieldElement::zero(), FieldElement::zero()));
        }
        let t = self.field.sqrt(&self.b)?;
        Some(Quaternion::new(t, FieldElement::zero(), FieldElement::one(), FieldElement::zero()))
    }

    /// Looks for `w + x·i + j` of norm zero, i.e. `b + a x²` a square, with
    /// `x` ranging over elements with small integer coordinates.
    fn search_zero_divisor(&self) -> Option<Quaternion> {
        if let Some(zd) = self.square_parameter_zero_divisor() {
            return Some(zd);
        }
        let basis: Vec<u64> = self.field.basis_radicands().collect();
        let side = (2 * SEARCH_COEFF + 1) as usize;
        let total = side.checked_pow(basis.len() as u32).unwrap_or(usize::MAX).min(SEARCH_LIMIT);
        for idx in 0..total {
            let mut rest = idx;
            let mut x = FieldElement::zero();
            for &r in &basis {
                let digit = (rest % side) as i64;
                rest /= side;
                let c = if digit % 2 == 1 { (digit + 1) / 2 } else { -digit / 2 };
                if c != 0 {
                    x += &FieldElement::monomial(BigRational::from_integer(c.into()), r);
                }
            }
            let target = &self.b + &(&self.a * &(&x * &x));
            if let Some(w) = self.field.sqrt(&target) {
                let q = Quaternion::new(w, x, FieldElement::one(), FieldElement::zero());
                debug_assert!(self.norm(&q).is_zero());
                return Some(q);
            }
        }
        None
    }

    /// Traceless with nonzero norm: `q² = −N(q)` is central, so `q` has order
    /// two in the projective group.
    pub fn is_psl_involution(&self, q: &Quaternion) -> bool {
        q.trace().is_zero() && !self.norm(q).is_zero()
    }
}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({}, {})", self.a, self.b)
    }
}

fn split_top_level_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

pub fn standard_involution(q: &Quaternion) -> Quaternion {
    q.conj()
}
