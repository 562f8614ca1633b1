//! The geometric representation of a Coxeter group: words, element orders,
//! diagram automorphisms, centralizers and induced actions.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxgram::{gram_from_diagram, CoxeterDiagram, DiagramError, GramMatrix};
use crate::exactnum::FieldElement;
use crate::linalg::Matrix;
use crate::lorentz::{Isometry, Subspace};

pub const DEFAULT_ORDER_CAP: u32 = 512;
pub const DEFAULT_CENTRALIZER_MAXLEN: usize = 6;
/// Consecutive strict increases of entry height taken as evidence of
/// infinite order.
pub const GROWTH_RUN: u32 = 16;

/// A pair of nodes whose label differs from the label of its image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMismatch {
    pub u: String,
    pub v: String,
    pub pu: String,
    pub pv: String,
    pub label: String,
    pub image_label: String,
}

impl fmt::Display for LabelMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-{} has label {}, image {}-{} has label {}",
            self.u, self.v, self.label, self.pu, self.pv, self.image_label
        )
    }
}

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("unknown node `{token}` at offset {pos} in word `{word}`")]
    UnknownNode { word: String, token: String, pos: usize },
    #[error("invalid permutation `{text}`: {msg}")]
    BadPermutation { text: String, msg: String },
    #[error("permutation does not preserve labels: {0}")]
    NotAutomorphism(Box<LabelMismatch>),
    #[error("subspace is not invariant under the matrix")]
    NotInvariant,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Generators `ρ_i(e_j) = e_j − 2 g_ij e_i` acting on `V = ⊕ R e_i`.
#[derive(Clone, Debug)]
pub struct GeometricRep {
    names: Vec<String>,
    gram: GramMatrix,
    generators: Vec<Matrix>,
}

impl GeometricRep {
    pub fn new(gram: GramMatrix, names: Vec<String>) -> Self {
        let n = gram.len();
        assert_eq!(names.len(), n, "one name per node");
        let g = gram.matrix();
        let generators: Vec<Matrix> = (0..n)
            .map(|i| {
                let mut m = Matrix::identity(n);
                for j in 0..n {
                    let delta = &g[(i, j)] * &FieldElement::from_int(2);
                    m[(i, j)] -= &delta;
                }
                m
            })
            .collect();
        for r in &generators {
            assert!(r.mul(r).is_identity(), "generator is not an involution");
            assert!(r.congruent(g) == *g, "generator does not preserve the form");
        }
        Self { names, gram, generators }
    }

    pub fn from_diagram(d: &CoxeterDiagram) -> Result<Self, GroupError> {
        Ok(Self::new(gram_from_diagram(d)?, d.nodes().to_vec()))
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, i: usize) -> &Matrix {
        &self.generators[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `M · ρ_s`, touching only the columns `j` with `g_sj ≠ 0`.
    pub fn right_multiply(&self, m: &Matrix, s: usize) -> Matrix {
        let g = self.gram.matrix();
        let mut out = m.clone();
        for j in 0..self.rank() {
            let gsj = &g[(s, j)];
            if gsj.is_zero() {
                continue;
            }
            let factor = gsj * &FieldElement::from_int(2);
            for r in 0..m.rows() {
                if m[(r, s)].is_zero() {
                    continue;
                }
                let delta = &m[(r, s)] * &factor;
                out[(r, j)] -= &delta;
            }
        }
        out
    }

    /// Product of generators, left to right.
    pub fn evaluate(&self, w: &Word) -> Result<Matrix, GroupError> {
        let mut m = Matrix::identity(self.rank());
        for name in &w.letters {
            let s = self.index_of(name).ok_or_else(|| GroupError::UnknownNode {
                word: w.to_string(),
                token: name.clone(),
                pos: 0,
            })?;
            m = self.right_multiply(&m, s);
        }
        Ok(m)
    }

    /// Parses `text` against this representation's node names.
    pub fn word(&self, text: &str) -> Result<Word, GroupError> {
        Word::parse(text, &self.names)
    }
}

/// Shorthand for [`GeometricRep::new`] with nodes named by their index.
pub fn geometric_rep(g: &GramMatrix) -> GeometricRep {
    GeometricRep::new(g.clone(), (0..g.len()).map(|i| i.to_string()).collect())
}

pub fn evaluate_word(rep: &GeometricRep, w: &Word) -> Result<Matrix, GroupError> {
    rep.evaluate(w)
}

/// A word in the generators, as node names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<String>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Words are written as bare concatenations (`abab`) when matching the
    /// longest node name at each position is unambiguous; names can also be
    /// separated by spaces, commas or dots (`s1.s2.s1`).
    pub fn parse(text: &str, names: &[String]) -> Result<Self, GroupError> {
        let t = text.trim();
        if t.contains(|c: char| c.is_whitespace() || c == '.' || c == ',') {
            let mut letters = Vec::new();
            let mut pos = 0;
            for tok in t.split(|c: char| c.is_whitespace() || c == '.' || c == ',') {
                if !tok.is_empty() {
                    if !names.iter().any(|n| n == tok) {
                        return Err(GroupError::UnknownNode {
                            word: text.to_string(),
                            token: tok.to_string(),
                            pos,
                        });
                    }
                    letters.push(tok.to_string());
                }
                pos += tok.len() + 1;
            }
            return Ok(Self { letters });
        }
        let mut letters = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let best = names
                .iter()
                .filter(|n| !n.is_empty() && rest.starts_with(n.as_str()))
                .max_by_key(|n| n.len());
            match best {
                Some(n) => {
                    letters.push(n.clone());
                    rest = &rest[n.len()..];
                }
                None => {
                    let token: String = rest.chars().take(1).collect();
                    return Err(GroupError::UnknownNode {
                        word: text.to_string(),
                        token,
                        pos: t.len() - rest.len(),
                    });
                }
            }
        }
        Ok(Self { letters })
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().cloned().collect() }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let sep = if self.letters.iter().all(|l| l.chars().count() == 1) { "" } else { "." };
        f.write_str(&self.letters.join(sep))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OrderResult {
    Finite { order: u32 },
    ExceedsCap { cap: u32 },
    /// Entry height grew strictly for [`GROWTH_RUN`] consecutive powers,
    /// ending at `power` with `height_bits`.
    InfiniteHeuristic { power: u32, height_bits: u64 },
}

impl OrderResult {
    pub fn finite(&self) -> Option<u32> {
        match self {
            OrderResult::Finite { order } => Some(*order),
            _ => None,
        }
    }
}

impl fmt::Display for OrderResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderResult::Finite { order } => write!(f, "{order}"),
            OrderResult::ExceedsCap { cap } => write!(f, ">{cap}"),
            OrderResult::InfiniteHeuristic { power, height_bits } => {
                write!(f, "infinite (height {height_bits} bits at power {power})")
            }
        }
    }
}

pub fn element_order(g: &Matrix, cap: u32) -> OrderResult {
    assert!(g.is_square());
    let mut p = g.clone();
    let mut last_height = p.height_bits();
    let mut run = 0;
    for k in 1..=cap {
        if k > 1 {
            p = p.mul(g);
        }
        if p.is_identity() {
            return OrderResult::Finite { order: k };
        }
        let h = p.height_bits();
        if k > 1 {
            if h > last_height {
                run += 1;
                if run >= GROWTH_RUN {
                    return OrderResult::InfiniteHeuristic { power: k, height_bits: h };
                }
            } else {
                run = 0;
            }
        }
        last_height = h;
    }
    OrderResult::ExceedsCap { cap }
}

/// A permutation of node indices: `image[i]` is where node `i` goes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    pub image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { image: (0..n).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycle notation over node names, e.g. `(a b)(c d)(e f)`; `()` or an
    /// empty string is the identity.
    pub fn parse_cycles(text: &str, names: &[String]) -> Result<Self, GroupError> {
        let bad = |msg: &str| GroupError::BadPermutation { text: text.to_string(), msg: msg.to_string() };
        let n = names.len();
        let mut image: Vec<usize> = (0..n).collect();
        let mut moved = vec![false; n];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(bad("expected `(`"));
            };
            let close = body.find(')').ok_or_else(|| bad("missing `)`"))?;
            let cycle: Vec<&str> = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            let mut idx = Vec::with_capacity(cycle.len());
            for name in &cycle {
                let i = names
                    .iter()
                    .position(|m| m == name)
                    .ok_or_else(|| bad(&format!("unknown node `{name}`")))?;
                if moved[i] {
                    return Err(bad(&format!("node `{name}` appears twice")));
                }
                moved[i] = true;
                idx.push(i);
            }
            for (k, &i) in idx.iter().enumerate() {
                image[i] = idx[(k + 1) % idx.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Self { image })
    }

    pub fn to_cycles(&self, names: &[String]) -> String {
        let mut seen = vec![false; self.image.len()];
        let mut out = String::new();
        for start in 0..self.image.len() {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(names[i].as_str());
                i = self.image[i];
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    /// `P e_i = e_{π(i)}`.
    pub fn matrix(&self) -> Matrix {
        let n = self.image.len();
        Matrix::from_fn(n, n, |r, c| {
            if self.image[c] == r { FieldElement::one() } else { FieldElement::zero() }
        })
    }
}

/// The permutation matrix of a label-preserving permutation of the nodes.
pub fn diagram_automorphism(d: &CoxeterDiagram, perm: &Permutation) -> Result<Isometry, GroupError> {
    let n = d.len();
    if perm.image.len() != n {
        return Err(GroupError::DimensionMismatch { expected: n, got: perm.image.len() });
    }
    let mut hit = vec![false; n];
    for &j in &perm.image {
        if j >= n || std::mem::replace(&mut hit[j], true) {
            return Err(GroupError::BadPermutation {
                text: format!("{:?}", perm.image),
                msg: "not a bijection".into(),
            });
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let (pu, pv) = (perm.image[u], perm.image[v]);
            let (l, m) = (d.label(u, v), d.label(pu, pv));
            if l != m {
                let names = d.nodes();
                return Err(GroupError::NotAutomorphism(Box::new(LabelMismatch {
                    u: names[u].clone(),
                    v: names[v].clone(),
                    pu: names[pu].clone(),
                    pv: names[pv].clone(),
                    label: l.to_string(),
                    image_label: m.to_string(),
                })));
            }
        }
    }
    let gram = gram_from_diagram(d)?;
    Ok(Isometry::new(gram.matrix(), perm.matrix()).expect("label-preserving permutations preserve the Gram form"))
}

/// Every label-preserving permutation, by backtracking over partial
/// assignments.
pub fn label_automorphisms(d: &CoxeterDiagram) -> Vec<Permutation> {
    fn extend(d: &CoxeterDiagram, image: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        let u = image.len();
        let n = d.len();
        if u == n {
            out.push(Permutation { image: image.clone() });
            return;
        }
        for cand in 0..n {
            if used[cand] || (0..u).any(|v| d.label(v, u) != d.label(image[v], cand)) {
                continue;
            }
            used[cand] = true;
            image.push(cand);
            extend(d, image, used, out);
            image.pop();
            used[cand] = false;
        }
    }
    let mut out = Vec::new();
    extend(d, &mut Vec::with_capacity(d.len()), &mut vec![false; d.len()], &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerElement {
    pub word: Word,
    pub matrix: Matrix,
}

/// Group elements of word length at most `maxlen` commuting with `g`, each
/// with a shortlex-least word, in shortlex order.
pub fn centralizer_search(rep: &GeometricRep, g: &Matrix, maxlen: usize) -> Vec<CentralizerElement> {
    let mut letters: Vec<usize> = (0..rep.rank()).collect();
    letters.sort_by(|&a, &b| rep.names[a].cmp(&rep.names[b]));

    let id = Matrix::identity(rep.rank());
    let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut frontier: Vec<(Vec<usize>, Matrix)> = vec![(Vec::new(), id)];
    let mut out = Vec::new();
    let to_word = |w: &[usize]| Word { letters: w.iter().map(|&i| rep.names[i].clone()).collect() };
    let record = |w: &[usize], m: &Matrix, out: &mut Vec<CentralizerElement>| {
        if m.mul(g) == g.mul(m) {
            out.push(CentralizerElement { word: to_word(w), matrix: m.clone() });
        }
    };
    record(&[], &frontier[0].1, &mut out);
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for (w, m) in &frontier {
            for &s in &letters {
                if w.last() == Some(&s) {
                    continue;
                }
                let ms = rep.right_multiply(m, s);
                if seen.insert(ms.clone()) {
                    let mut ws = w.clone();
                    ws.push(s);
                    record(&ws, &ms, &mut out);
                    next.push((ws, ms));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out
}

/// The matrix `A` with `g·B = B·A`, where `B` holds the basis of `h` as
/// columns.
pub fn induced_action(g: &Matrix, h: &Subspace) -> Result<Matrix, GroupError> {
    if g.rows() != h.ambient_dim() {
        return Err(GroupError::DimensionMismatch { expected: g.rows(), got: h.ambient_dim() });
    }
    if h.dim() == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let b = h.basis_matrix();
    b.solve_left_factor(&g.mul(&b)).ok_or(GroupError::NotInvariant)
}

/// Orders of `a1·a2`, `a2·a3` and `a1·a3`.
pub fn triangle_signature(a1: &Matrix, a2: &Matrix, a3: &Matrix, cap: u32) -> [OrderResult; 3] {
    [
        element_order(&a1.mul(a2), cap),
        element_order(&a2.mul(a3), cap),
        element_order(&a1.mul(a3), cap),
    ]
}

/// Orders of all pairwise generator products, keyed by node names.
pub fn pairwise_orders(rep: &GeometricRep, cap: u32) -> BTreeMap<(String, String), OrderResult> {
    let mut out = BTreeMap::new();
    for i in 0..rep.rank() {
        for j in i + 1..rep.rank() {
            let m = rep.generators[i].mul(&rep.generators[j]);
            out.insert((rep.names[i].clone(), rep.names[j].clone()), element_order(&m, cap));
        }
    }
    out
}
