use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn liex(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_liex"))
        .args(args)
        .env_remove("LIEX_MAX_ORDER")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const NOT_JACOBI: &str =
    r#"{"dim":3,"brackets":[{"i":1,"j":2,"coeffs":{"3":"1"}},{"i":1,"j":3,"coeffs":{"1":"1"}}]}"#;

#[test]
fn catalog_sl2r() {
    let out = liex(&["catalog", "sl2R"], None);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["brackets"][1]["coeffs"]["2"], "2");
}

#[test]
fn catalog_lists_names() {
    let v = json(&liex(&["catalog"], None));
    let names = v["algebras"].as_array().unwrap();
    assert!(names.iter().any(|n| n == "sl2R"));
    assert!(names.iter().any(|n| n == "gF"));
}

#[test]
fn expand_then_identify() {
    let expanded = liex(&["expand", "--semigroup", "S2", "--algebra", "sl2R"], None);
    assert!(expanded.status.success());
    assert_eq!(json(&expanded)["dim"], 6);
    let id = liex(&["identify", "--span", "E1,E2,E3"], Some(&expanded.stdout));
    assert!(id.status.success());
    assert_eq!(json(&id)["class"], "A2.1+A1");
}

#[test]
fn identify_reports_the_parameter() {
    let v = json(&liex(&["identify", "--algebra", "A3.4(a=1/2)"], None));
    assert_eq!(v["class"], "A3.4");
    assert_eq!(v["a"], "1/2");
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn validate_non_jacobi_tensor() {
    let out = liex(&["validate"], Some(NOT_JACOBI.as_bytes()));
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["code"], "not_lie");
    assert!(v["witness"].is_object());
}

#[test]
fn validate_semigroups() {
    assert!(liex(&["validate", "--semigroup", "S2"], None).status.success());
    let out = liex(&["validate", "--semigroup", "S3"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["code"], "not_semigroup");
    let inline = r#"{"order":2,"table":[[1,2],[2,1]]}"#;
    assert!(liex(&["validate", "--semigroup", inline], None).status.success());
}

#[test]
fn malformed_input_exits_one() {
    let out = liex(&["validate"], Some(b"not json"));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["code"], "malformed");
    let unknown = liex(&["catalog", "nope"], None);
    assert_eq!(unknown.status.code(), Some(1));
    assert_eq!(json(&unknown)["code"], "unknown_name");
    assert_eq!(liex(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(liex(&["--help"], None).status.code(), Some(0));
}

#[test]
fn emitted_tensors_reparse() {
    let expanded = liex(&["expand", "--semigroup", "Z3", "--algebra", "sl2R"], None);
    let out = liex(&["validate"], Some(&expanded.stdout));
    assert!(out.status.success());
    assert_eq!(json(&out)["dim"], 9);
}

#[test]
fn printed_s3_expansion_parses_but_breaks_jacobi() {
    let expanded = liex(&["expand", "--semigroup", "S3", "--algebra", "sl2R"], None);
    let out = liex(&["validate"], Some(&expanded.stdout));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["code"], "not_lie");
}

#[test]
fn reductions() {
    let zero = liex(&["reduce", "--mode", "zero", "--semigroup", "S2", "--algebra", "sl2R"], None);
    assert!(zero.status.success());
    assert_eq!(json(&zero)["dim"], 3);
    let expanded = liex(&["expand", "--semigroup", "S2", "--algebra", "sl2R"], None);
    let split = liex(
        &["reduce", "--mode", "split", "--checked", "E1,E3,E5", "--hatted", "E2,E4,E6"],
        Some(&expanded.stdout),
    );
    assert!(split.status.success(), "{}", String::from_utf8_lossy(&split.stdout));
    let missing = liex(&["reduce", "--mode", "zero", "--algebra", "sl2R"], None);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn subalgebra_not_closed() {
    let out = liex(&["subalgebra", "--span", "E1,E3", "--algebra", "sl2R"], None);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["code"], "not_closed");
    assert!(v["witness"].is_object());
}

#[test]
fn contraction_of_gf() {
    let out = liex(&["contract", "--source", "gF", "--family", "uF", "--target", "gE"], None);
    assert!(out.status.success());
    assert_eq!(json(&out)["holds"], true);
}

#[test]
fn search_and_graph() {
    let v = json(&liex(
        &["search", "--from", "sl2R", "--to", "A2.1+A1", "--max-order", "2", "--modes", "subalgebra"],
        None,
    ));
    assert_eq!(v["found"], true);
    let dot = liex(
        &["graph", "--labels", "sl2R,A2.1+A1", "--max-order", "2", "--dot", "-"],
        None,
    );
    assert!(dot.status.success());
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("\"sl2R\" -> \"A2.1+A1\""));
}

#[test]
fn semigroup_bound_from_environment() {
    let v = json(&liex(&["enumerate-semigroups", "--order", "3"], None));
    assert_eq!(v["count"], 12);
    let out = Command::new(env!("CARGO_BIN_EXE_liex"))
        .args(["enumerate-semigroups", "--order", "3"])
        .env("LIEX_MAX_ORDER", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["code"], "bound_exceeded");
}

#[test]
fn properties_are_reproducible() {
    let a = liex(&["properties", "--seed", "11", "--cases", "10"], None);
    let b = liex(&["properties", "--seed", "11", "--cases", "10"], None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
