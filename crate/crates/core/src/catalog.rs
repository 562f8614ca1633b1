//! Bundled example diagrams.

use crate::coxgram::{CoxeterDiagram, DiagramError};

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub json: &'static str,
}

impl CatalogEntry {
    pub fn diagram(&self) -> Result<CoxeterDiagram, DiagramError> {
        CoxeterDiagram::from_json_str(self.json)
    }
}

pub const SIX_CYCLE_SIMPLEX: CatalogEntry = CatalogEntry {
    name: "six-cycle-simplex",
    description: "5-simplex with two ideal vertices: a 6-cycle with one label 4, symmetric under (a b)(c d)(e f)",
    json: include_str!("../data/six_cycle_simplex.json"),
};

pub const TRIANGLE_246: CatalogEntry = CatalogEntry {
    name: "triangle-246",
    description: "hyperbolic triangle with angles π/2, π/4, π/6",
    json: include_str!("../data/triangle_246.json"),
};

pub const TRIANGLE_237: CatalogEntry = CatalogEntry {
    name: "triangle-237",
    description: "(2,3,7) triangle; label 7 lies outside the supported labels",
    json: include_str!("../data/triangle_237.json"),
};

pub const LANNER_435: CatalogEntry = CatalogEntry {
    name: "lanner-435",
    description: "compact tetrahedron with linear diagram 4-3-5",
    json: include_str!("../data/lanner_435.json"),
};

pub const DOTTED_PAIR: CatalogEntry = CatalogEntry {
    name: "dotted-pair",
    description: "two ultraparallel facets with Gram entry -3/2 and a third orthogonal facet",
    json: include_str!("../data/dotted_pair.json"),
};

pub const ALL: [&CatalogEntry; 5] = [&SIX_CYCLE_SIMPLEX, &TRIANGLE_246, &TRIANGLE_237, &LANNER_435, &DOTTED_PAIR];

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    ALL.iter().copied().find(|e| e.name == name)
}
