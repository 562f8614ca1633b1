use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactnum::{is_algebraic_integer, Embedding, FieldElement, MQField};
use crate::linalg::{signature, signature_at, SignatureTriple};

use super::{gram_from_diagram, CoxeterDiagram, DiagramError, GramMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Arithmetic,
    ProperlyQuasiArithmetic,
    Neither,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Arithmetic => "arithmetic",
            Verdict::ProperlyQuasiArithmetic => "properly-quasi-arithmetic",
            Verdict::Neither => "neither",
        })
    }
}

/// One embedding of `K(P)` that is non-trivial on `k(P)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCheck {
    pub embedding: Embedding,
    /// Restriction to the generators of `k(P)`.
    pub restricted: Embedding,
    pub signature: SignatureTriple,
    pub positive_semidefinite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VinbergReport {
    pub big_field: MQField,
    pub ground_field: MQField,
    pub identity_signature: SignatureTriple,
    /// Multiquadratic fields are totally real, so this always holds.
    pub v1: bool,
    pub v2: Vec<EmbeddingCheck>,
    pub v2_holds: bool,
    /// Elements of `Cyc(2G)` that are not algebraic integers.
    pub v3_failures: Vec<FieldElement>,
    pub verdict: Verdict,
}

impl VinbergReport {
    pub fn v3_holds(&self) -> bool {
        self.v3_failures.is_empty()
    }

    /// E.g. `arithmetic over Q`.
    pub fn summary(&self) -> String {
        match self.verdict {
            Verdict::Neither => "neither".to_string(),
            v => format!("{v} over {}", self.ground_field),
        }
    }
}

pub fn vinberg_check(d: &CoxeterDiagram) -> Result<VinbergReport, DiagramError> {
    vinberg_check_gram(&gram_from_diagram(d)?)
}

pub fn vinberg_check_gram(g: &GramMatrix) -> Result<VinbergReport, DiagramError> {
    let identity_signature = g.signature();
    if identity_signature.negative != 1 {
        return Err(DiagramError::NotLorentzian(identity_signature));
    }
    let big = g.entry_field();
    let ground = g.ground_field();
    debug_assert!(big.contains_field(&ground));

    // Embeddings of K(P) whose restriction to k(P) is not the identity. The
    // checks are independent; evaluation order does not affect the result.
    let mut v2 = Vec::new();
    for e in big.embeddings() {
        let restricted = big.restrict(&e, &ground).expect("k(P) ⊆ K(P)");
        if restricted.is_identity() {
            continue;
        }
        let sig = signature_at(g.matrix(), &big, &e).expect("entries lie in K(P)");
        v2.push(EmbeddingCheck {
            embedding: e,
            restricted,
            signature: sig,
            positive_semidefinite: sig.is_positive_semidefinite(),
        });
    }
    let v2_holds = v2.iter().all(|c| c.positive_semidefinite);

    let doubled = g.matrix().scale(&FieldElement::from_int(2));
    let v3_failures: Vec<FieldElement> = super::cyc_products(&doubled)
        .into_iter()
        .filter(|x| !is_algebraic_integer(x))
        .collect();

    let verdict = match (v2_holds, v3_failures.is_empty()) {
        (true, true) => Verdict::Arithmetic,
        (true, false) => Verdict::ProperlyQuasiArithmetic,
        (false, _) => Verdict::Neither,
    };
    Ok(VinbergReport {
        big_field: big,
        ground_field: ground,
        identity_signature,
        v1: true,
        v2,
        v2_holds,
        v3_failures,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddCycleResult {
    /// No cycle made of edges with odd labels.
    pub acyclic: bool,
    /// Node names along an offending cycle.
    pub witness: Option<Vec<String>>,
}

/// Looks for a cycle in the subgraph of edges with odd finite labels.
pub fn odd_cycle_check(d: &CoxeterDiagram) -> OddCycleResult {
    let n = d.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in d.edges().iter().filter(|e| e.label.is_odd()) {
        // Each edge is checked against the forest built so far.
        if let Some(path) = forest_path(&adj, e.u, e.v) {
            return OddCycleResult {
                acyclic: false,
                witness: Some(path.into_iter().map(|i| d.nodes()[i].clone()).collect()),
            };
        }
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    OddCycleResult { acyclic: true, witness: None }
}

fn forest_path(adj: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    prev.insert(from, from);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &y in &adj[x] {
            if let std::collections::btree_map::Entry::Vacant(slot) = prev.entry(y) {
                slot.insert(x);
                queue.push_back(y);
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexKind {
    /// Opposite subdiagram positive definite: an ordinary vertex.
    Elliptic,
    /// Positive semidefinite with a kernel: a vertex at infinity.
    Ideal,
    /// Indefinite: the vertex lies beyond the boundary.
    HyperbolicExcess,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexClass {
    /// The facet opposite to the vertex.
    pub opposite: String,
    pub kind: VertexKind,
    pub signature: SignatureTriple,
}

pub fn classify_simplex_vertices(d: &CoxeterDiagram) -> Result<Vec<VertexClass>, DiagramError> {
    let g = gram_from_diagram(d)?;
    let sig = g.signature();
    if d.len() < 2 || sig.negative != 1 || sig.zero != 0 {
        return Err(DiagramError::NotSimplex {
            nodes: d.len(),
            signature: sig,
        });
    }
    let n = d.len();
    Ok((0..n)
        .map(|v| {
            let others: Vec<usize> = (0..n).filter(|&i| i != v).collect();
            let s = signature(&g.matrix().principal_submatrix(&others));
            let kind = if s.negative > 0 {
                VertexKind::HyperbolicExcess
            } else if s.zero > 0 {
                VertexKind::Ideal
            } else {
                VertexKind::Elliptic
            };
            VertexClass {
                opposite: d.nodes()[v].clone(),
                kind,
                signature: s,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxgram::Label;

    fn diagram(nodes: &[&str], edges: &[(&str, &str, Label)]) -> CoxeterDiagram {
        CoxeterDiagram::new(
            nodes.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(u, v, l)| (u.to_string(), v.to_string(), l.clone()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn triangle_246_is_arithmetic_over_q() {
        let d = diagram(
            &["a", "b", "c"],
            &[("b", "c", Label::Finite(4)), ("a", "c", Label::Finite(6))],
        );
        let r = vinberg_check(&d).unwrap();
        assert_eq!(r.identity_signature, SignatureTriple::new(2, 1, 0));
        assert!(r.ground_field.is_rational());
        assert!(r.v2.is_empty());
        assert!(r.v3_holds());
        assert_eq!(r.verdict, Verdict::Arithmetic);
        assert_eq!(r.summary(), "arithmetic over Q");
    }

    #[test]
    fn dotted_two_cycle() {
        let w = crate::exactnum::parse_expr("-3/2").unwrap();
        let d = diagram(&["a", "b", "c"], &[("a", "b", Label::Dotted(w))]);
        let r = vinberg_check(&d).unwrap();
        assert_eq!(r.verdict, Verdict::Arithmetic);
        let doubled = gram_from_diagram(&d).unwrap().matrix().scale(&FieldElement::from_int(2));
        assert!(super::super::cyc_products(&doubled).contains(&FieldElement::from_int(9)));
    }

    #[test]
    fn spherical_input_is_rejected() {
        let d = diagram(&["a", "b"], &[("a", "b", Label::Finite(3))]);
        assert!(matches!(vinberg_check(&d), Err(DiagramError::NotLorentzian(_))));
    }

    #[test]
    fn odd_cycles() {
        let path = diagram(
            &["a", "b", "c"],
            &[("a", "b", Label::Finite(3)), ("b", "c", Label::Finite(3))],
        );
        assert!(odd_cycle_check(&path).acyclic);

        let tri = diagram(
            &["a", "b", "c"],
            &[
                ("a", "b", Label::Finite(3)),
                ("b", "c", Label::Finite(3)),
                ("c", "a", Label::Finite(3)),
            ],
        );
        let r = odd_cycle_check(&tri);
        assert!(!r.acyclic);
        let mut w = r.witness.unwrap();
        w.sort();
        assert_eq!(w, vec!["a", "b", "c"]);

        let mixed = diagram(
            &["a", "b", "c"],
            &[
                ("a", "b", Label::Finite(3)),
                ("b", "c", Label::Finite(3)),
                ("c", "a", Label::Finite(4)),
            ],
        );
        assert!(odd_cycle_check(&mixed).acyclic);
    }

    #[test]
    fn affine_subdiagram_gives_ideal_vertex() {
        // Paracompact tetrahedron [3,3^[3]]: node d attached to an Ã₂ triangle.
        let d = diagram(
            &["a", "b", "c", "d"],
            &[
                ("a", "b", Label::Finite(3)),
                ("b", "c", Label::Finite(3)),
                ("c", "a", Label::Finite(3)),
                ("d", "a", Label::Finite(3)),
            ],
        );
        let classes = classify_simplex_vertices(&d).unwrap();
        let opp_d = classes.iter().find(|c| c.opposite == "d").unwrap();
        assert_eq!(opp_d.kind, VertexKind::Ideal);
        for c in classes.iter().filter(|c| c.opposite != "d") {
            assert_eq!(c.kind, VertexKind::Elliptic, "{c:?}");
        }
    }

    #[test]
    fn right_angled_portion_is_elliptic() {
        // Tetrahedron [4,3,5]-like compact Lannér diagram: linear 4-3-5.
        let d = diagram(
            &["a", "b", "c", "d"],
            &[
                ("a", "b", Label::Finite(4)),
                ("b", "c", Label::Finite(3)),
                ("c", "d", Label::Finite(5)),
            ],
        );
        let classes = classify_simplex_vertices(&d).unwrap();
        assert!(classes.iter().all(|c| c.kind == VertexKind::Elliptic));
        // The vertex opposite a, i.e. where b, c, d meet, sees identity-free
        // H₃; opposite d sees B₃.
        assert_eq!(classes.len(), 4);
    }

    #[test]
    fn simplex_precondition() {
        let d = diagram(&["a", "b"], &[]);
        assert!(matches!(classify_simplex_vertices(&d), Err(DiagramError::NotSimplex { .. })));
    }
}
