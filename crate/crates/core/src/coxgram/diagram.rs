use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactnum::{parse_expr, FieldElement};

use super::DiagramError;

/// Edge label of a Coxeter diagram. An absent edge means label 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// Dihedral angle `π/m`.
    Finite(u32),
    /// Parallel facets.
    Infinity,
    /// Diverging facets with Gram entry `weight < −1`.
    Dotted(FieldElement),
}

impl Label {
    pub fn is_odd(&self) -> bool {
        matches!(self, Label::Finite(m) if m % 2 == 1)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinity => f.write_str("inf"),
            Label::Dotted(w) => write!(f, "dotted({w})"),
        }
    }
}

/// Labels whose cosine lies in a multiquadratic field.
pub const SUPPORTED_FINITE_LABELS: [u32; 5] = [2, 3, 4, 5, 6];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: Label,
}

/// A Coxeter diagram on named nodes (facets).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterDiagram {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    index: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct DiagramDoc {
    nodes: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    u: String,
    v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<LabelDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dotted: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LabelDoc {
    Int(i64),
    Text(String),
}

impl CoxeterDiagram {
    /// Validates and builds a diagram. Node names must be unique, edges must
    /// reference known nodes, and every unordered pair carries at most one edge.
    pub fn new(nodes: Vec<String>, edges: Vec<(String, String, Label)>) -> Result<Self, DiagramError> {
        let mut index = BTreeMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if n.is_empty() {
                return Err(DiagramError::EmptyName);
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(DiagramError::DuplicateNode(n.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (u, v, label) in edges {
            let ui = *index.get(&u).ok_or_else(|| DiagramError::UnknownNode(u.clone()))?;
            let vi = *index.get(&v).ok_or_else(|| DiagramError::UnknownNode(v.clone()))?;
            if ui == vi {
                return Err(DiagramError::SelfLoop(u));
            }
            if !seen.insert((ui.min(vi), ui.max(vi))) {
                return Err(DiagramError::DuplicateEdge(u, v));
            }
            match &label {
                Label::Finite(m) if !SUPPORTED_FINITE_LABELS.contains(m) => {
                    return Err(DiagramError::UnsupportedLabel(m.to_string()));
                }
                Label::Dotted(w) if !(w + &FieldElement::one()).is_negative() => {
                    return Err(DiagramError::DottedWeight { u, v, weight: w.to_string() });
                }
                _ => {}
            }
            out.push(Edge { u: ui, v: vi, label });
        }
        Ok(Self { nodes, edges: out, index })
    }

    pub fn from_json_str(text: &str) -> Result<Self, DiagramError> {
        let doc: DiagramDoc = serde_json::from_str(text).map_err(|e| DiagramError::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in doc.edges {
            let label = match (e.label, e.dotted) {
                (Some(_), Some(_)) => {
                    return Err(DiagramError::Malformed(format!(
                        "edge {}-{} has both a label and a dotted weight",
                        e.u, e.v
                    )))
                }
                (None, None) => {
                    return Err(DiagramError::Malformed(format!(
                        "edge {}-{} needs a label or a dotted weight",
                        e.u, e.v
                    )))
                }
                (None, Some(w)) => Label::Dotted(parse_expr(&w)?),
                (Some(LabelDoc::Int(m)), None) => match u32::try_from(m) {
                    Ok(m) => Label::Finite(m),
                    Err(_) => return Err(DiagramError::UnsupportedLabel(m.to_string())),
                },
                (Some(LabelDoc::Text(t)), None) => parse_label_text(&t)?,
            };
            edges.push((e.u, e.v, label));
        }
        Self::new(doc.nodes, edges)
    }

    pub fn to_json_string(&self) -> String {
        let doc = DiagramDoc {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    let (label, dotted) = match &e.label {
                        Label::Finite(m) => (Some(LabelDoc::Int(*m as i64)), None),
                        Label::Infinity => (Some(LabelDoc::Text("inf".into())), None),
                        Label::Dotted(w) => (None, Some(w.to_string())),
                    };
                    EdgeDoc {
                        u: self.nodes[e.u].clone(),
                        v: self.nodes[e.v].clone(),
                        label,
                        dotted,
                    }
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("diagram serializes")
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Label between two node indices; `Finite(2)` when no edge is drawn.
    pub fn label(&self, i: usize, j: usize) -> Label {
        self.edges
            .iter()
            .find(|e| (e.u == i && e.v == j) || (e.u == j && e.v == i))
            .map_or(Label::Finite(2), |e| e.label.clone())
    }

    /// Relabels nodes; `rename[i]` is the new name of node `i`.
    pub fn renamed(&self, rename: &[String]) -> Result<Self, DiagramError> {
        assert_eq!(rename.len(), self.nodes.len());
        Self::new(
            rename.to_vec(),
            self.edges
                .iter()
                .map(|e| (rename[e.u].clone(), rename[e.v].clone(), e.label.clone()))
                .collect(),
        )
    }
}

fn parse_label_text(t: &str) -> Result<Label, DiagramError> {
    match t.trim() {
        "inf" | "infinity" | "∞" => Ok(Label::Infinity),
        s => match s.parse::<u32>() {
            Ok(m) => Ok(Label::Finite(m)),
            Err(_) => Err(DiagramError::UnsupportedLabel(s.to_string())),
        },
    }
}
