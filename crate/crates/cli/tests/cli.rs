//! End-to-end behaviour of the binary: outputs, schemas, exit codes.

mod common;

use common::{assert_valid, data, run, run_json, schema, stderr, stdout, validate};
use serde_json::{json, Value};

const TAU: &str = "(a b)(c d)(e f)";

fn sig(v: &Value) -> (u64, u64, u64) {
    (v["positive"].as_u64().unwrap(), v["negative"].as_u64().unwrap(), v["zero"].as_u64().unwrap())
}

#[test]
fn validator_rejects_violations() {
    let s = schema("error");
    assert!(validate(&s, &json!({"error": {"code": 2, "kind": "validation", "message": "x"}})).is_empty());
    assert!(!validate(&s, &json!({"error": {"code": 5, "kind": "validation", "message": "x"}})).is_empty());
    assert!(!validate(&s, &json!({"error": {"code": 2, "kind": "validation"}})).is_empty());
    assert!(!validate(&s, &json!({"error": {"code": 2, "kind": "validation", "message": "x", "extra": 1}})).is_empty());
    let order = schema("order");
    let doc = run_json(&["order", "builtin:triangle-246", "--word", "ab"]);
    let mut bad = doc.clone();
    bad["order"] = json!({"kind": "finite"});
    assert!(!validate(&order, &bad).is_empty());
    bad["order"] = json!({"kind": "finite", "order": 2});
    bad["input_digest"] = json!("xyz");
    assert!(!validate(&order, &bad).is_empty());
}

#[test]
fn analyze_reports_validate() {
    for name in ["six-cycle-simplex", "triangle-246", "lanner-435", "dotted-pair"] {
        let doc = run_json(&["analyze", &format!("builtin:{name}")]);
        assert_valid("analyze", &doc);
    }
    let doc = run_json(&["analyze", &data("triangle_246.json")]);
    assert_eq!(doc["summary"], "arithmetic over Q");
    assert_eq!(doc["precision_bits"], 128);
}

#[test]
fn builtin_and_file_digests_agree() {
    let a = run_json(&["analyze", "builtin:six-cycle-simplex"]);
    let b = run_json(&["analyze", &data("six_cycle_simplex.json")]);
    assert_eq!(a, b);
}

#[test]
fn fixsub_identity_is_whole_space() {
    let doc = run_json(&["fixsub", "builtin:six-cycle-simplex", "--centralizer-maxlen", "1"]);
    assert_valid("fixsub", &doc);
    assert_eq!(doc["permutation"], "()");
    assert_eq!(doc["fixed_dim"], 6);
    assert_eq!(sig(&doc["restricted_signature"]), (5, 1, 0));
    assert_eq!(doc["centralizer_maxlen"], 1);
    assert_eq!(doc["order_cap"], 512);
}

#[test]
fn fixsub_pipeline_validates() {
    let doc = run_json(&["fixsub", "builtin:six-cycle-simplex", "--perm", TAU, "--generators", "abab,cd,efe"]);
    assert_valid("fixsub", &doc);
    let orders: Vec<_> = doc["product_orders"].as_array().unwrap().iter().map(|p| p["order"]["order"].clone()).collect();
    assert_eq!(orders, [json!(8), json!(4), json!(2)]);
}

#[test]
fn label_violating_permutation_names_the_pair() {
    let o = run(&["fixsub", "builtin:six-cycle-simplex", "--perm", "(a c)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("a-b"), "{}", stderr(&o));
}

#[test]
fn non_invariant_generator_is_rejected() {
    let o = run(&["fixsub", "builtin:six-cycle-simplex", "--perm", TAU, "--generators", "a", "--centralizer-maxlen", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`a`"), "{}", stderr(&o));
}

#[test]
fn order_report() {
    let doc = run_json(&["order", "builtin:six-cycle-simplex", "--word", "ab", "--order-cap", "100"]);
    assert_valid("order", &doc);
    assert_eq!(doc["order"], json!({"kind": "finite", "order": 4}));
    assert_eq!(doc["order_cap"], 100);
}

#[test]
fn form_report_with_involution() {
    let doc = run_json(&[
        "form",
        &data("lorentz_3.json"),
        "--subspace",
        &data("subspace_e1_e3.json"),
        "--isotropy-height",
        "5",
    ]);
    assert_valid("form", &doc);
    assert_eq!(doc["isotropy_height"], 5);
    assert_eq!(doc["isotropy"]["outcome"]["kind"], "isotropic");
    assert_eq!(doc["admissibility"]["admissible"], true);
    assert_eq!(sig(&doc["involution"]["restricted_signature"]), (1, 1, 0));
    assert_eq!(doc["involution"]["hyperbolic"], true);
}

#[test]
fn hamilton_symbols() {
    let doc = run_json(&["quat", "symbol", "-a", "-1", "-b", "-1"]);
    assert_valid("quat-symbol", &doc);
    assert_eq!(doc["verdict"], "division");
    let symbols = doc["symbols"].as_array().unwrap();
    assert!(symbols.contains(&json!({"place": "inf", "symbol": -1})));
    assert!(symbols.contains(&json!({"place": "2", "symbol": -1})));
    let literal = run_json(&["quat", "symbol", "--algebra", "D(-1,-1)"]);
    assert_eq!(literal, doc);
}

#[test]
fn split_and_irrational_symbols() {
    let doc = run_json(&["quat", "symbol", "-a", "1", "-b", "1"]);
    assert_valid("quat-symbol", &doc);
    assert_eq!(doc["verdict"], "split");
    let doc = run_json(&["quat", "symbol", "--algebra", "D(sqrt(2),-1)"]);
    assert_valid("quat-symbol", &doc);
    assert_eq!(doc["symbols"], Value::Null);
    assert_eq!(doc["field"], json!([2]));
}

#[test]
fn psl_involution_of_i() {
    let doc = run_json(&["quat", "psl-involution", "-a", "-1", "-b", "-1", "-q", "0,1,0,0"]);
    assert_valid("quat-psl-involution", &doc);
    assert_eq!(doc["psl_involution"], true);
    assert_eq!(doc["norm"], "1");
    let doc = run_json(&["quat", "psl-involution", "-a", "-1", "-b", "-1", "-q", "1,1,0,0"]);
    assert_eq!(doc["psl_involution"], false);
}

#[test]
fn skewherm_analyze_split_j() {
    let doc = run_json(&["skewherm", "analyze", &data("skew_j_split.json")]);
    assert_valid("skewherm-analyze", &doc);
    assert_eq!(doc["rank"], 1);
    assert_eq!(sig(&doc["embeddings"][0]["signature"]), (1, 1, 0));
    assert_eq!(doc["admissible"], true);
    assert_eq!(doc["associated_form"]["matrix"], json!([["-2", "0"], ["0", "2"]]));
}

#[test]
fn skewherm_analyze_other_algebra() {
    let doc = run_json(&["skewherm", "analyze", &data("skew_j_d2m1.json")]);
    assert_valid("skewherm-analyze", &doc);
    assert_eq!(sig(&doc["embeddings"][0]["signature"]), (0, 2, 0));
    assert_eq!(doc["admissible"], false);
}

#[test]
fn skewherm_involution_report() {
    let doc = run_json(&[
        "skewherm",
        "involution",
        &data("skew_rank2_d2m5.json"),
        "--submodule",
        &data("submodule_e1.json"),
    ]);
    assert_valid("skewherm-involution", &doc);
    assert_eq!(doc["submodule_rank"], 1);
    assert_eq!(doc["complement"], json!([[{"w": "0", "x": "0", "y": "1/5", "z": "0"}, {"w": "1", "x": "0", "y": "0", "z": "0"}]]));
}

#[test]
fn degenerate_skew_form_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("degenerate.json");
    std::fs::write(
        &path,
        r#"{"algebra": {"a": "-1", "b": "-1"}, "gram": [[{"y": "1"}, {"w": "1"}], [{"w": "-1"}, {"y": "1"}]]}"#,
    )
    .unwrap();
    let o = run(&["skewherm", "analyze", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid("error", &doc);
    assert!(doc["error"]["message"].as_str().unwrap().contains("degenerate"));
}

#[test]
fn no_square_root_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("form.json");
    std::fs::write(&path, r#"{"algebra": {"a": "1+sqrt(2)", "b": "-1"}, "gram": [[{"y": "1"}]]}"#).unwrap();
    let o = run(&["skewherm", "analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn malformed_diagram_exits_two_with_position() {
    let o = run(&["analyze", &data("malformed.json"), "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid("error", &doc);
    let msg = doc["error"]["message"].as_str().unwrap();
    assert!(msg.contains("line 2, column"), "{msg}");
}

#[test]
fn unsupported_label_exits_three() {
    let o = run(&["analyze", "builtin:triangle-237", "--json"]);
    assert_eq!(o.status.code(), Some(3));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid("error", &doc);
    assert_eq!(doc["error"]["kind"], "unsupported");
}

#[test]
fn missing_file_and_bad_flags_exit_two() {
    assert_eq!(run(&["analyze", "/nonexistent/diagram.json"]).status.code(), Some(2));
    assert_eq!(run(&["fixsub"]).status.code(), Some(2));
    assert_eq!(run(&["quat", "symbol", "-a", "0", "-b", "1"]).status.code(), Some(2));
    let o = run(&["order", "builtin:triangle-246", "--word", "xyz", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_valid("error", &serde_json::from_str(&stdout(&o)).unwrap());
}

#[test]
fn output_is_deterministic() {
    let cases: [&[&str]; 4] = [
        &["analyze", "builtin:six-cycle-simplex"],
        &["fixsub", "builtin:six-cycle-simplex", "--perm", TAU, "--generators", "abab,cd,efe"],
        &["quat", "symbol", "-a", "3", "-b", "-7"],
        &["skewherm", "analyze", "crates/cli/data/skew_j_split.json"],
    ];
    for args in cases {
        let args: Vec<String> = args
            .iter()
            .map(|a| a.strip_prefix("crates/cli/data/").map_or(a.to_string(), data))
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        for json in [false, true] {
            let mut a = args.clone();
            if json {
                a.push("--json");
            }
            let first = run(&a);
            let second = run(&a);
            assert_eq!(first.status.code(), Some(0));
            assert_eq!(first.stdout, second.stdout, "{a:?}");
        }
    }
}

#[test]
fn timing_is_opt_in() {
    let plain = run_json(&["analyze", "builtin:triangle-246"]);
    assert!(plain.get("elapsed_ms").is_none());
    let timed = run_json(&["analyze", "builtin:triangle-246", "--timing"]);
    assert_valid("analyze", &timed);
    assert!(timed["elapsed_ms"].is_u64());
}

#[test]
fn precision_variable_is_echoed() {
    let o = common::bin()
        .args(["analyze", "builtin:six-cycle-simplex", "--json"])
        .env("HYPLAT_PRECISION_BITS", "64")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["precision_bits"], 64);
    assert_eq!(doc["verdict"], "neither");
    let o = common::bin().args(["analyze", "builtin:triangle-246"]).env("HYPLAT_PRECISION_BITS", "lots").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn text_output_mentions_key_results() {
    let o = run(&["fixsub", "builtin:six-cycle-simplex", "--perm", TAU, "--generators", "abab,cd,efe"]);
    let text = stdout(&o);
    assert!(text.contains("restricted signature: (2,1,0)"), "{text}");
    assert!(text.contains("order of (abab)(cd): 8"), "{text}");
    let o = run(&["analyze", "builtin:six-cycle-simplex"]);
    let text = stdout(&o);
    assert!(text.contains("verdict: neither"), "{text}");
    assert!(text.contains("ideal vertices: 2"), "{text}");
}
