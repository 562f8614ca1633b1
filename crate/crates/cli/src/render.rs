//! Plain-text rendering of reports.

use std::fmt::Write;

use hyplat::coxgram::VertexKind;
use hyplat::report::{AnalysisReport, FcReport};
use hyplat::skewherm::DVector;

use crate::commands::{FormReport, OrderReport, PslReport, SkewAnalyzeReport, SkewInvolutionReport, SymbolReport};

fn indent(block: &str) -> String {
    block.lines().map(|l| format!("  {l}\n")).collect()
}

fn holds(b: bool) -> &'static str {
    if b { "holds" } else { "fails" }
}

fn timing(out: &mut String, ms: Option<u64>) {
    if let Some(ms) = ms {
        writeln!(out, "elapsed: {ms} ms").unwrap();
    }
}

fn vectors(vs: &[DVector]) -> String {
    if vs.is_empty() {
        return "none".into();
    }
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

pub fn analysis(r: &AnalysisReport) -> String {
    let mut o = String::new();
    writeln!(o, "input sha256: {}", r.input_digest).unwrap();
    writeln!(o, "nodes: {}", r.nodes.join(" ")).unwrap();
    writeln!(o, "Gram matrix:").unwrap();
    o.push_str(&indent(&r.gram.to_string()));
    writeln!(o, "K(P) = {}", r.big_field).unwrap();
    writeln!(o, "k(P) = {}", r.ground_field).unwrap();
    writeln!(o, "signatures:").unwrap();
    for s in &r.signatures {
        writeln!(o, "  {} {}", s.embedding, s.signature).unwrap();
    }
    writeln!(o, "V1 {}", holds(r.vinberg.v1)).unwrap();
    writeln!(o, "V2 {}", holds(r.vinberg.v2_holds)).unwrap();
    for c in r.vinberg.v2.iter().filter(|c| !c.positive_semidefinite) {
        writeln!(o, "  {} has signature {}", c.embedding, c.signature).unwrap();
    }
    writeln!(o, "V3 {}", holds(r.vinberg.v3_holds())).unwrap();
    for x in &r.vinberg.v3_failures {
        writeln!(o, "  {x} is not an algebraic integer").unwrap();
    }
    writeln!(o, "verdict: {}", r.summary).unwrap();
    match &r.odd_cycles.witness {
        Some(w) => writeln!(o, "odd-label cycle: {}", w.join("-")).unwrap(),
        None => writeln!(o, "odd-label edges: acyclic").unwrap(),
    }
    if let Some(vs) = &r.vertices {
        writeln!(o, "vertices:").unwrap();
        for v in vs {
            let kind = match v.kind {
                VertexKind::Elliptic => "elliptic",
                VertexKind::Ideal => "ideal",
                VertexKind::HyperbolicExcess => "beyond infinity",
            };
            writeln!(o, "  opposite {}: {kind} {}", v.opposite, v.signature).unwrap();
        }
    }
    if let Some(n) = r.ideal_vertices {
        writeln!(o, "ideal vertices: {n}").unwrap();
    }
    writeln!(o, "precision: {} bits", r.precision_bits).unwrap();
    timing(&mut o, r.elapsed_ms);
    o
}

pub fn fixsub(r: &FcReport) -> String {
    let mut o = String::new();
    writeln!(o, "input sha256: {}", r.input_digest).unwrap();
    writeln!(o, "automorphism: {}", r.permutation).unwrap();
    writeln!(o, "fixed subspace dimension: {}", r.fixed_dim).unwrap();
    writeln!(o, "fixed basis:").unwrap();
    for v in &r.fixed_basis {
        let coords: Vec<_> = v.iter().map(ToString::to_string).collect();
        writeln!(o, "  ({})", coords.join(", ")).unwrap();
    }
    writeln!(o, "restricted Gram matrix:").unwrap();
    o.push_str(&indent(&r.restricted_gram.to_string()));
    writeln!(o, "restricted signature: {}", r.restricted_signature).unwrap();
    writeln!(o, "hyperbolic: {}", r.hyperbolic).unwrap();
    writeln!(o, "centralizer (words up to length {}):", r.centralizer_maxlen).unwrap();
    for c in &r.centralizer {
        writeln!(o, "  {} induced order {}", c.word, c.induced_order).unwrap();
    }
    for g in &r.generators {
        writeln!(o, "generator {} induced order {}:", g.word, g.order).unwrap();
        o.push_str(&indent(&g.matrix.to_string()));
    }
    if let Some(ps) = &r.product_orders {
        for p in ps {
            writeln!(o, "order of {}: {}", p.product, p.order).unwrap();
        }
    }
    writeln!(o, "order cap: {}", r.order_cap).unwrap();
    timing(&mut o, r.elapsed_ms);
    o
}

pub fn order(r: &OrderReport) -> String {
    let mut o = String::new();
    writeln!(o, "input sha256: {}", r.input_digest).unwrap();
    writeln!(o, "word: {}", r.word).unwrap();
    o.push_str(&indent(&r.matrix.to_string()));
    writeln!(o, "order: {}", r.order).unwrap();
    writeln!(o, "order cap: {}", r.order_cap).unwrap();
    timing(&mut o, r.elapsed_ms);
    o
}

pub fn form(r: &FormReport) -> String {
    let mut o = String::new();
    writeln!(o, "input sha256: {}", r.input_digest).unwrap();
    writeln!(o, "field: {}", r.field).unwrap();
    writeln!(o, "signature: {}", r.signature).unwrap();
    for c in &r.admissibility.conjugates {
        writeln!(o, "  {} {}", c.embedding, c.signature).unwrap();
    }
    writeln!(o, "admissible: {}", r.admissibility.admissible).unwrap();
    let iso = serde_json::to_value(&r.isotropy.outcome).expect("isotropy outcome serializes");
    let kind = iso["kind"].as_str().unwrap_or_default();
    let detail = iso.get("witness").or_else(|| iso.get("reason")).map(ToString::to_string).unwrap_or_default();
    writeln!(o, "isotropy: {kind} {detail}").unwrap();
    writeln!(o, "isotropy height: {} (searched {})", r.isotropy_height, r.isotropy.searched_height).unwrap();
    if let Some(i) = &r.involution {
        writeln!(o, "involution fixing a {}-dimensional subspace:", i.subspace_dim).unwrap();
        o.push_str(&indent(&i.matrix.to_string()));
        writeln!(o, "restricted signature: {}", i.restricted_signature).unwrap();
        writeln!(o, "hyperbolic: {}", i.hyperbolic).unwrap();
    }
    timing(&mut o, r.elapsed_ms);
    o
}

pub fn symbol(r: &SymbolReport) -> String {
    let mut o = String::new();
    writeln!(o, "algebra: {} over {}", r.algebra, r.field).unwrap();
    if let Some(symbols) = &r.symbols {
        writeln!(o, "Hilbert symbols:").unwrap();
        for s in symbols {
            writeln!(o, "  {}: {}", s.place, s.symbol).unwrap();
        }
    }
    for e in &r.embeddings {
        writeln!(o, "  {} {}", e.embedding, if e.split { "split" } else { "ramified" }).unwrap();
    }
    if let Some(z) = &r.zero_divisor {
        writeln!(o, "zero divisor: {z}").unwrap();
    }
    writeln!(o, "verdict: {} ({})", r.verdict, r.reason).unwrap();
    timing(&mut o, r.elapsed_ms);
    o
}

pub fn psl(r: &PslReport) -> String {
    let mut o = String::new();
    writeln!(o, "algebra: {}", r.algebra).unwrap();
    writeln!(o, "q = {}", r.quaternion).unwrap();
    writeln!(o, "trace: {}", r.trace).unwrap();
    writeln!(o, "norm: {}", r.norm).unwrap();
    writeln!(o, "involution in the projective group: {}", r.psl_involution).unwrap();
    timing(&mut o, r.elapsed_ms);
    o
}

pub fn skew_analyze(r: &SkewAnalyzeReport) -> String {
    let mut o = String::new();
    writeln!(o, "input sha256: {}", r.input_digest).unwrap();
    writeln!(o, "algebra: {} over {} ({})", r.algebra, r.field, r.division_verdict).unwrap();
    writeln!(o, "rank: {} (realified rank {})", r.rank, r.realified_rank).unwrap();
    writeln!(o, "Gram matrix:").unwrap();
    o.push_str(&indent(&r.gram.to_string()));
    if let Some(a) = &r.associated_form {
        writeln!(o, "associated symmetric form:").unwrap();
        o.push_str(&indent(&a.matrix.to_string()));
    }
    writeln!(o, "signatures:").unwrap();
    for e in &r.embeddings {
        match e.signature {
            Some(s) => writeln!(o, "  {} {s}", e.embedding).unwrap(),
            None => writeln!(o, "  {} ramified", e.embedding).unwrap(),
        }
    }
    writeln!(o, "admissible: {} ({})", r.admissible, r.reason).unwrap();
    timing(&mut o, r.elapsed_ms);
    o
}

pub fn skew_involution(r: &SkewInvolutionReport) -> String {
    let mut o = String::new();
    writeln!(o, "input sha256: {}", r.input_digest).unwrap();
    writeln!(o, "submodule sha256: {}", r.submodule_digest).unwrap();
    writeln!(o, "algebra: {}", r.algebra).unwrap();
    writeln!(o, "submodule rank: {} of {}", r.submodule_rank, r.rank).unwrap();
    writeln!(o, "orthogonal basis: {}", vectors(&r.submodule)).unwrap();
    writeln!(o, "complement basis: {}", vectors(&r.complement)).unwrap();
    writeln!(o, "theta:").unwrap();
    o.push_str(&indent(&r.theta.to_string()));
    match r.restricted_signature {
        Some(s) => writeln!(o, "restricted signature: {s}").unwrap(),
        None => writeln!(o, "restricted signature: undefined (ramified at the identity)").unwrap(),
    }
    writeln!(o, "hyperbolic: {}", r.hyperbolic).unwrap();
    timing(&mut o, r.elapsed_ms);
    o
}
