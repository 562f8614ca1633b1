//! Running the binary and checking its JSON against the shipped schemas.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use regex::Regex;
use serde_json::Value;

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hyplat"));
    c.env_remove("HYPLAT_PRECISION_BITS");
    c
}

pub fn data(name: &str) -> String {
    manifest_dir().join("data").join(name).display().to_string()
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("UTF-8 stdout")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("UTF-8 stderr")
}

/// Runs with `--json`, expects success and returns the parsed document.
pub fn run_json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    serde_json::from_str(&stdout(&o)).expect("stdout is JSON")
}

pub fn schema(name: &str) -> Value {
    let path = manifest_dir().join("schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).expect("schema is JSON")
}

/// Panics with every violation found.
pub fn assert_valid(name: &str, doc: &Value) {
    let s = schema(name);
    let errors = validate(&s, doc);
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}

/// Validates `doc` against the subset of JSON Schema used by the shipped
/// files: `$ref` into `$defs`, `type`, `properties`, `required`,
/// `additionalProperties: false`, `items`, `enum`, `const`, `oneOf`,
/// `minimum`, `minItems`, `maxItems` and `pattern`.
pub fn validate(root: &Value, doc: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check(root, root, doc, "$", &mut errors);
    errors
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        other => panic!("unsupported type `{other}` in schema"),
    }
}

const KNOWN: [&str; 17] = [
    "$schema", "title", "description", "$defs", "$ref", "type", "properties", "required",
    "additionalProperties", "items", "enum", "const", "oneOf", "minimum", "minItems", "maxItems", "pattern",
];

fn check(root: &Value, s: &Value, v: &Value, path: &str, errors: &mut Vec<String>) {
    let s = s.as_object().expect("schema nodes are objects");
    for k in s.keys() {
        assert!(KNOWN.contains(&k.as_str()), "unsupported keyword `{k}`");
    }
    if let Some(r) = s.get("$ref") {
        let name = r.as_str().and_then(|r| r.strip_prefix("#/$defs/")).expect("local $ref");
        let target = &root["$defs"][name];
        assert!(target.is_object(), "dangling $ref {name}");
        check(root, target, v, path, errors);
    }
    if let Some(t) = s.get("type").and_then(Value::as_str) {
        if !type_matches(t, v) {
            errors.push(format!("{path}: expected {t}, got {v}"));
            return;
        }
    }
    if let Some(c) = s.get("const") {
        if c != v {
            errors.push(format!("{path}: expected {c}, got {v}"));
        }
    }
    if let Some(e) = s.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            errors.push(format!("{path}: {v} not in {e:?}"));
        }
    }
    if let Some(alts) = s.get("oneOf").and_then(Value::as_array) {
        let matching = alts.iter().filter(|a| validate_from(root, a, v, path).is_empty()).count();
        if matching != 1 {
            errors.push(format!("{path}: {matching} alternatives of oneOf match {v}"));
        }
    }
    if let (Some(min), Some(n)) = (s.get("minimum").and_then(Value::as_i64), v.as_i64()) {
        if n < min {
            errors.push(format!("{path}: {n} < {min}"));
        }
    }
    if let (Some(p), Some(text)) = (s.get("pattern").and_then(Value::as_str), v.as_str()) {
        if !Regex::new(p).expect("valid pattern").is_match(text) {
            errors.push(format!("{path}: `{text}` does not match {p}"));
        }
    }
    if let Some(items) = v.as_array() {
        if let Some(min) = s.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < min {
                errors.push(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(max) = s.get("maxItems").and_then(Value::as_u64) {
            if (items.len() as u64) > max {
                errors.push(format!("{path}: more than {max} items"));
            }
        }
        if let Some(item) = s.get("items") {
            for (i, x) in items.iter().enumerate() {
                check(root, item, x, &format!("{path}[{i}]"), errors);
            }
        }
    }
    if let Some(map) = v.as_object() {
        let props = s.get("properties").and_then(Value::as_object);
        if let Some(req) = s.get("required").and_then(Value::as_array) {
            for k in req.iter().filter_map(Value::as_str) {
                if !map.contains_key(k) {
                    errors.push(format!("{path}: missing `{k}`"));
                }
            }
        }
        for (k, x) in map {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => check(root, sub, x, &format!("{path}.{k}"), errors),
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    errors.push(format!("{path}: unexpected `{k}`"))
                }
                None => {}
            }
        }
    }
}

fn validate_from(root: &Value, s: &Value, v: &Value, path: &str) -> Vec<String> {
    let mut errors = Vec::new();
    check(root, s, v, path, &mut errors);
    errors
}
