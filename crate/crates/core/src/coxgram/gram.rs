use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use crate::exactnum::{parse_expr, subfield_generated, Embedding, FieldElement, FieldError, MQField};
use crate::linalg::{signature_at, Matrix, SignatureTriple};

use super::{CoxeterDiagram, DiagramError, Label};

/// Unit-diagonal symmetric Gram matrix of a Coxeter polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    matrix: Matrix,
}

impl GramMatrix {
    pub fn new(matrix: Matrix) -> Result<Self, DiagramError> {
        if !matrix.is_symmetric() {
            return Err(DiagramError::Malformed("Gram matrix is not symmetric".into()));
        }
        if (0..matrix.rows()).any(|i| !matrix[(i, i)].is_one()) {
            return Err(DiagramError::Malformed("Gram matrix diagonal must be 1".into()));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `K(P)`: the field generated by all entries.
    pub fn entry_field(&self) -> MQField {
        subfield_generated(self.matrix.entries())
    }

    /// `k(P)`: the field generated by all cyclic products.
    pub fn ground_field(&self) -> MQField {
        subfield_generated(&cyc_products(&self.matrix))
    }

    pub fn cyc_products(&self) -> BTreeSet<FieldElement> {
        cyc_products(&self.matrix)
    }

    pub fn signature_at(&self, e: &Embedding) -> Result<SignatureTriple, FieldError> {
        signature_at(&self.matrix, &self.entry_field(), e)
    }

    pub fn signature(&self) -> SignatureTriple {
        crate::linalg::signature(&self.matrix)
    }
}

impl Serialize for GramMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

/// `−cos(π/m)` for the supported finite labels.
pub fn neg_cos_pi_over(m: u32) -> Option<FieldElement> {
    let text = match m {
        2 => "0",
        3 => "-1/2",
        4 => "-sqrt(2)/2",
        5 => "-(1+sqrt(5))/4",
        6 => "-sqrt(3)/2",
        _ => return None,
    };
    Some(parse_expr(text).expect("table entries parse"))
}

pub fn gram_entry(label: &Label) -> Result<FieldElement, DiagramError> {
    match label {
        Label::Finite(m) => {
            neg_cos_pi_over(*m).ok_or_else(|| DiagramError::UnsupportedLabel(m.to_string()))
        }
        Label::Infinity => Ok(FieldElement::from_int(-1)),
        Label::Dotted(w) => Ok(w.clone()),
    }
}

pub fn gram_from_diagram(d: &CoxeterDiagram) -> Result<GramMatrix, DiagramError> {
    let n = d.len();
    let mut m = Matrix::identity(n);
    for e in d.edges() {
        let g = gram_entry(&e.label)?;
        m[(e.u, e.v)] = g.clone();
        m[(e.v, e.u)] = g;
    }
    GramMatrix::new(m)
}

/// Products `a_{i₁i₂} a_{i₂i₃} ⋯ a_{i_k i₁}` over all simple cycles
/// (no repeated index), including diagonal entries and `a_ij·a_ji`.
///
/// A closed walk splits at its first repeated index into a shorter closed
/// walk and a simple cycle, so every walk product is a product of
/// simple-cycle products. Both the field they generate and integrality
/// (algebraic integers are closed under products) are therefore decided by
/// simple cycles alone. Cycles through a zero entry contribute 0, which is
/// recorded once.
pub fn cyc_products(a: &Matrix) -> BTreeSet<FieldElement> {
    assert!(a.is_square());
    let n = a.rows();
    let mut out = BTreeSet::new();
    for i in 0..n {
        out.insert(a[(i, i)].clone());
        for j in 0..n {
            if i != j && a[(i, j)].is_zero() {
                out.insert(FieldElement::zero());
            }
        }
    }
    // Cycles of length ≥ 2 rooted at their smallest index, along nonzero
    // entries. Both orientations are visited.
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    for start in 0..n {
        path.push(start);
        on_path[start] = true;
        extend_cycles(a, start, FieldElement::one(), &mut path, &mut on_path, &mut out);
        on_path[start] = false;
        path.pop();
    }
    out
}

fn extend_cycles(
    a: &Matrix,
    start: usize,
    acc: FieldElement,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut BTreeSet<FieldElement>,
) {
    let last = *path.last().expect("non-empty path");
    for next in start + 1..a.rows() {
        if on_path[next] || a[(last, next)].is_zero() {
            continue;
        }
        let step = &acc * &a[(last, next)];
        if !a[(next, start)].is_zero() {
            out.insert(&step * &a[(next, start)]);
        }
        path.push(next);
        on_path[next] = true;
        extend_cycles(a, start, step, path, on_path, out);
        on_path[next] = false;
        path.pop();
    }
}
