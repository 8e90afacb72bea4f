use std::process::{Command, Output};

use darboux_core::expr::parse_expr;
use darboux_core::Lpdo;
use serde_json::Value;

const EXAMPLE: &str = "DxDy + (1 - x^2 - x*y)";

fn darboux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darboux"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = darboux(&all);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1, "one object per line: {text}");
    (out.status.code().unwrap(), serde_json::from_str(&text).expect("valid JSON"))
}

fn field(v: &Value, key: &str) -> String {
    v[key].as_str().unwrap_or_else(|| panic!("missing {key} in {v}")).to_string()
}

#[test]
fn invariants_of_the_example() {
    let (code, v) = json(&["invariants", "--op", EXAMPLE]);
    assert_eq!(code, 0);
    let want = parse_expr("-1+x^2+y*x").unwrap();
    assert_eq!(parse_expr(&field(&v, "h")).unwrap(), want);
    assert_eq!(parse_expr(&field(&v, "k")).unwrap(), want);
}

#[test]
fn text_output_is_key_value_lines() {
    let out = darboux(&["invariants", "--op", EXAMPLE]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "h = x^2+x*y-1\nk = x^2+x*y-1\n");
}

#[test]
fn gauge_leaves_invariants_unchanged() {
    let (code, v) = json(&["invariants", "--op", EXAMPLE, "--g", "(x+1)/(y^2+1)"]);
    assert_eq!(code, 0);
    assert_eq!(v["gauge_invariant"], Value::Bool(true));
}

#[test]
fn darboux_x_on_the_example() {
    let (code, v) = json(&["darboux-x", "--op", EXAMPLE, "--r0", "x+y"]);
    assert_eq!(code, 0);
    let coeffs = &v["l1"]["coeffs"];
    assert_eq!(parse_expr(coeffs["0,1"].as_str().unwrap()).unwrap(), parse_expr("-1/(x+y)").unwrap());
    assert_eq!(parse_expr(coeffs["0,0"].as_str().unwrap()).unwrap(), parse_expr("-x^2-x*y").unwrap());
    assert!(coeffs.get("1,0").is_none());
    assert_eq!(v["residual_zero"], Value::Bool(true));
    assert_eq!(v["kind"], "X");
}

#[test]
fn darboux_output_feeds_verify_intertwine() {
    let (_, v) = json(&["darboux-y", "--op", EXAMPLE, "--q0", "x"]);
    let (l1, m, m1) = (v["l1"].to_string(), v["m"].to_string(), v["m1"].to_string());
    let (code, res) = json(&["verify-intertwine", "--op", EXAMPLE, "--l1", &l1, "--m", &m, "--m1", &m1]);
    assert_eq!(code, 0);
    assert_eq!(res["holds"], Value::Bool(true));
}

#[test]
fn wrong_quadruple_exits_one() {
    let out = darboux(&[
        "verify-intertwine", "--op", EXAMPLE, "--l1", "DxDy", "--m", "Dx + x", "--m1", "Dx + x",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("holds = false"));
}

#[test]
fn non_invariant_generator_exits_two_unless_unchecked() {
    let out = darboux(&["darboux-x", "--op", EXAMPLE, "--r0", "x"]);
    assert_eq!(out.status.code(), Some(2));
    let out = darboux(&["darboux-x", "--op", EXAMPLE, "--r0", "x", "--unchecked"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("residual_zero = false"));
}

#[test]
fn check_xinv_reports_failure() {
    let out = darboux(&["check-xinv", "--op", "DxDy", "--r", "y"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "residual = -1\nholds = false\n");
}

#[test]
fn check_yinv_on_the_example() {
    let (code, v) = json(&["check-yinv", "--op", EXAMPLE, "--q", "x"]);
    assert_eq!(code, 0);
    assert_eq!(field(&v, "residual"), "0");
}

#[test]
fn pair_invariants_of_a_kernel_element() {
    let (code, v) = json(&["pair-invariants", "--op", EXAMPLE, "--z", "exp(-x^2/2-x*y)"]);
    assert_eq!(code, 0);
    assert_eq!(parse_expr(&field(&v, "r")).unwrap(), parse_expr("x+y").unwrap());
    assert_eq!(parse_expr(&field(&v, "q")).unwrap(), parse_expr("x").unwrap());
}

#[test]
fn kernel_and_corresponding_invariants() {
    let out = darboux(&["kernel-from-r", "--op", EXAMPLE, "--r", "x+y"]);
    assert_eq!(stdout(&out), "z = exp(-1/2*x^2-x*y)\n");
    let out = darboux(&["kernel-from-q", "--op", EXAMPLE, "--q", "x", "--base-point", "1,-2"]);
    assert!(out.status.success());
    let (_, v) = json(&["corresponding", "--op", EXAMPLE, "--r", "x+y", "--base-point", "1/2,0"]);
    assert_eq!(field(&v, "q"), "x");
    let (_, v) = json(&["corresponding", "--op", EXAMPLE, "--q", "x"]);
    assert_eq!(parse_expr(&field(&v, "r")).unwrap(), parse_expr("x+y").unwrap());
}

#[test]
fn symbolic_transport_formula() {
    let (code, v) = json(&["transport", "--r0", "x+y"]);
    assert_eq!(code, 0);
    let want = parse_expr("(-(x+y)*r^2+(x^2+2*x*y+y^2-1)*r+r_x*x+r_x*y)/((x+y)*(x+y-r))").unwrap();
    assert_eq!(parse_expr(&field(&v, "r1")).unwrap(), want);
}

#[test]
fn concrete_and_cross_transport() {
    let (code, v) = json(&["transport", "--op", "DxDy", "--r0", "2*x", "--r", "1/(x+y^2)"]);
    assert_eq!(code, 0);
    assert!(!field(&v, "r1").contains('r'));
    let (code, v) = json(&["transport", "--op", EXAMPLE, "--q0", "x", "--of", "x"]);
    assert_eq!(code, 0);
    assert_eq!(parse_expr(&field(&v, "r1")).unwrap(), parse_expr("-x*(x+y-r)/(x-q)").unwrap());
}

#[test]
fn strict_mode_rejects_the_extension() {
    let args = ["transport", "--op", EXAMPLE, "--r0", "x+y", "--of", "y"];
    assert_eq!(darboux(&args).status.code(), Some(0));
    let mut strict = args.to_vec();
    strict.push("--strict");
    let out = darboux(&strict);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strict"));
}

#[test]
fn transport_closure() {
    let (code, v) = json(&["verify-transport", "--op", EXAMPLE, "--r0", "x+y"]);
    assert_eq!(code, 0);
    assert_eq!(v["closure"], Value::Bool(true));
}

#[test]
fn property_check_is_reproducible() {
    let args = ["property-check", "--seed", "11", "--count", "6"];
    let (code, first) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(first["instances"], 6);
    assert_eq!(first["failures"], Value::Array(vec![]));
    assert_eq!(json(&args).1, first);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    for args in [
        &["invariants"][..],
        &["invariants", "--op", "DxDy + (1 -"],
        &["invariants", "--op", "Dx + 1"],
        &["darboux-x", "--op", EXAMPLE],
        &["kernel-from-r", "--op", EXAMPLE, "--r", "x+y", "--base-point", "1"],
        &["transport", "--r0", "x", "--q0", "y"],
        &["frobnicate"],
        &["invariants", "--op", EXAMPLE, "--format", "xml"],
    ] {
        let out = darboux(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn json_operator_input_is_accepted() {
    let op = r#"{"coeffs": {"1,1": "1", "0,0": "1 - x^2 - x*y"}}"#;
    let (code, v) = json(&["invariants", "--op", op]);
    assert_eq!(code, 0);
    assert_eq!(parse_expr(&field(&v, "h")).unwrap(), parse_expr("x^2+x*y-1").unwrap());
}

#[test]
fn printed_values_round_trip() {
    let (_, v) = json(&["darboux-x", "--op", EXAMPLE, "--r0", "x+y"]);
    for key in ["l1", "m", "m1"] {
        let text = v[key].to_string();
        let op = Lpdo::parse(&text).unwrap();
        assert_eq!(op.to_json(), v[key]);
        assert_eq!(serde_json::to_string(&v[key]).unwrap(), text);
    }
    let out = darboux(&["darboux-x", "--op", EXAMPLE, "--r0", "x+y"]);
    let text = stdout(&out);
    let l1 = text.lines().find_map(|l| l.strip_prefix("l1 = ")).unwrap();
    assert_eq!(Lpdo::parse(l1).unwrap().to_json(), v["l1"]);
}
