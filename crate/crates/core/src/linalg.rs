//! Dense matrices over [`FieldElement`] with exact elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::exactnum::{Embedding, FieldElement, FieldError, MQField};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Inertia of a symmetric matrix: counts of positive, negative and zero
/// eigenvalues (equivalently, of diagonal entries after congruence).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignatureTriple {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl SignatureTriple {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Self { positive, negative, zero }
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    /// `(n, 1, 0)` for some `n`.
    pub fn is_lorentzian(&self) -> bool {
        self.negative == 1 && self.zero == 0
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        self.negative == 0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.zero == 0
    }
}

impl std::ops::Add for SignatureTriple {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.positive + rhs.positive,
            self.negative + rhs.negative,
            self.zero + rhs.zero,
        )
    }
}

impl fmt::Display for SignatureTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![FieldElement::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElement::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<FieldElement>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[FieldElement]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &FieldElement> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        self.map(|x| x * c)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// `Mᵀ Q M`.
    pub fn congruent(&self, q: &Self) -> Self {
        self.transpose().mul(q).mul(self)
    }

    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])].clone())
    }

    pub fn power(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Entry-wise application of a field embedding.
    pub fn embed(&self, field: &MQField, e: &Embedding) -> Result<Self, FieldError> {
        let data = self
            .data
            .iter()
            .map(|x| field.embed(x, e))
            .collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Max bit size over all entries' numerators and denominators.
    pub fn height_bits(&self) -> u64 {
        self.data.iter().map(FieldElement::height_bits).max().unwrap_or(0)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let delta = &f * &m[(r, j)];
                        m[(i, j)] -= &delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x | Mx = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![FieldElement::zero(); self.cols];
                v[f] = FieldElement::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> FieldElement {
        assert!(self.is_square());
        let mut m = self.clone();
        let mut det = FieldElement::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return FieldElement::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].inv().expect("nonzero pivot");
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..m.cols {
                    let delta = &f * &m[(c, j)];
                    m[(i, j)] -= &delta;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                FieldElement::one()
            } else {
                FieldElement::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Solves `self · X = rhs` for `X`, assuming `self` has full column rank.
    /// Returns `None` when no exact solution exists.
    pub fn solve_left_factor(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows);
        let n = self.cols;
        let aug = Self::from_fn(self.rows, n + rhs.cols, |i, j| {
            if j < n { self[(i, j)].clone() } else { rhs[(i, j - n)].clone() }
        });
        let (r, pivots) = aug.rref();
        if pivots.iter().take_while(|&&p| p < n).count() != n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some(Self::from_fn(n, rhs.cols, |i, j| r[(i, j + n)].clone()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str("  ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            f.write_str("]")?;
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} {:?}", self.rows, self.cols, self.to_rows())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<FieldElement>>::deserialize(d)?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(Matrix::from_rows(rows))
    }
}

/// Signature of a real symmetric matrix by symmetric congruence
/// diagonalization (Sylvester's law of inertia).
///
/// Each step either pivots on a nonzero diagonal entry, or, when the whole
/// remaining diagonal vanishes, adds row/column `j` to row/column `i` for
/// some `a_ij ≠ 0`, which makes the new `a_ii = 2·a_ij` nonzero.
pub fn signature(m: &Matrix) -> SignatureTriple {
    assert!(m.is_symmetric(), "signature of a non-symmetric matrix");
    let mut a = m.clone();
    let mut sig = SignatureTriple::new(0, 0, 0);
    let mut k = 0;
    let n = a.rows;
    while k < n {
        let pivot = (k..n).find(|&i| !a[(i, i)].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let Some((i, j)) = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[(i, j)].is_zero())
                else {
                    sig.zero += n - k;
                    break;
                };
                for c in 0..n {
                    let v = a[(j, c)].clone();
                    a[(i, c)] += &v;
                }
                for r in 0..n {
                    let v = a[(r, j)].clone();
                    a[(r, i)] += &v;
                }
                i
            }
        };
        a.swap_rows(k, p);
        a.swap_cols(k, p);
        let d = a[(k, k)].clone();
        if d.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        let inv = d.inv().expect("nonzero pivot");
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] * &inv;
            for j in k..n {
                let delta = &f * &a[(k, j)];
                a[(i, j)] -= &delta;
            }
        }
        // The trailing block is now the (symmetric) Schur complement; the
        // matching column operations only clear row k.
        for i in k + 1..n {
            a[(k, i)] = FieldElement::zero();
        }
        k += 1;
    }
    sig
}

/// Signature after applying an embedding entry-wise.
pub fn signature_at(
    m: &Matrix,
    field: &MQField,
    e: &Embedding,
) -> Result<SignatureTriple, FieldError> {
    Ok(signature(&m.embed(field, e)?))
}

pub fn dot(a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
