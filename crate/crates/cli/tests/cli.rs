use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn problem(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn polydiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polydiv")).args(args).output().unwrap()
}

fn run_on(cmd: &str, text: &str, extra: &[&str]) -> (i32, Value, String) {
    let f = problem(text);
    let mut args = vec![cmd, f.path().to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = polydiv(&args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn nullsatz_on_the_line() {
    let (code, json, _) = run_on("nullsatz", "ring x;\nF: x;\nF: 1 - x;\n", &[]);
    assert_eq!(code, 0);
    assert_eq!(json["Q"], serde_json::json!(["1", "1"]));
    assert_eq!(json["verified"], true);
    assert_eq!(json["within_jelonek"], true);
}

#[test]
fn bound_from_parameters() {
    let text = "ring x;\noption d = 1;\noption m = 2;\noption n = 1;\noption N = 1;\noption kappa0 = 0;\n";
    let (code, json, _) = run_on("bound", text, &["--c-inf", "neg-inf"]);
    assert_eq!(code, 0);
    assert_eq!(json["general"]["rho"], 1);
    let (code, _, err) = run_on("bound", text, &[]);
    assert_eq!(code, 1);
    assert!(err.contains("c_inf"), "{err}");
}

#[test]
fn bound_from_data_reports_regularity() {
    let text = "ring x, y, z;\nvariety: y - x^2;\nvariety: z - x^3;\nF: x;\nF: y - 1;\nphi: 1;\n";
    let (code, json, _) = run_on("bound", text, &[]);
    assert_eq!(code, 0);
    assert_eq!(json["kappa0"], 3);
    assert_eq!(json["regularity"]["castelnuovo_mumford"], 2);
    assert_eq!(json["kappa0_minus_n_le_reg_minus_1"], true);
}

#[test]
fn resolve_twisted_cubic() {
    let (code, json, _) = run_on("resolve", "ring x, y, z;\nvariety: y - x^2;\nvariety: z - x^3;\n", &[]);
    assert_eq!(code, 0);
    assert_eq!(json["ranks"], serde_json::json!([1, 3, 2]));
    assert_eq!(json["degree"], 3);
    assert_eq!(json["dimension"], 1);
    assert_eq!(json["checks"]["minimal"], true);
}

#[test]
fn resolve_projective_ideal() {
    let text =
        "ring a, b, c, d;\nvariety: a*c - b^2;\nvariety: b*d - c^2;\nvariety: a*d - b*c;\noption projective = true;\n";
    let (code, json, _) = run_on("resolve", text, &[]);
    assert_eq!(code, 0);
    assert_eq!(json["ranks"], serde_json::json!([1, 3, 2]));
    assert_eq!(json["kappa0"], 3);
}

#[test]
fn divide_on_a_parabola() {
    let text = "ring x, y;\nvariety: y - x^2;\nF: x;\nphi: y;\n";
    let (code, json, _) = run_on("divide", text, &[]);
    assert_eq!(code, 0);
    assert_eq!(json["verified"], true);
    assert_eq!(json["Q"][0], "x");
}

#[test]
fn infeasible_exits_two() {
    let (code, json, _) = run_on("divide", "ring x;\nF: x;\nphi: 1;\n", &["--rho", "3"]);
    assert_eq!(code, 2);
    assert_eq!(json["status"], "infeasible");
}

#[test]
fn parse_errors_carry_lines() {
    let (code, _, err) = run_on("divide", "ring x;\n\nF: x + y;\n", &[]);
    assert_eq!(code, 1);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, err) = run_on("divide", "ring x;\nF: x;\nphi: 1;\noption colour = red;\n", &[]);
    assert_eq!(code, 1);
    assert!(err.contains("line 4"), "{err}");
    let out = polydiv(&["divide", "/nonexistent/problem.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let text = "ring x, y;\nF: x;\nF: y;\nF: 1 - x - y;\n";
    let f = problem(text);
    let a = polydiv(&["nullsatz", f.path().to_str().unwrap()]);
    let b = polydiv(&["nullsatz", f.path().to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn kernel_check_passes() {
    let out = polydiv(&["kernel-check", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["seed"], 7);
    assert_eq!(json["passed"], true);
}

#[test]
fn kernel_divide_on_the_conic() {
    let text = "ring x0, x1, x2;\nvariety: x0*x2 - x1^2;\nF: x0 + x1;\nF: x2 - x1;\noption points = 2;\n";
    let (code, json, _) = run_on("kernel-divide", text, &[]);
    assert_eq!(code, 0);
    assert_eq!(json["rho"], 2);
    assert!(json["max_residual"].as_f64().unwrap() < 1e-6);
    let cfg = problem(r#"{"depth": 4, "tol": 1e-8, "lambda": 0.0, "charts": "auto"}"#);
    let (code, _, _) = run_on("kernel-divide", text, &["--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let bad = problem(r#"{"depth": 4, "tol": 1e-8, "lambda": 0.5, "charts": "auto"}"#);
    let (code, _, err) = run_on("kernel-divide", text, &["--config", bad.path().to_str().unwrap()]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn kernel_divide_checks_hypotheses_and_parametrizations() {
    let text = "ring x0, x1, x2;\nvariety: x1^2*x2 - x0^3 - x0^2*x2;\nF: x0;\nF: x2;\noption param = u^2*v - v^3, u^3 - u*v^2, v^3;\noption points = 1;\n";
    let (code, _, err) = run_on("kernel-divide", text, &[]);
    assert_eq!(code, 1);
    assert!(err.contains("singular"), "{err}");
    let common = "ring x0, x1, x2;\nvariety: x0*x2 - x1^2;\nF: x0;\nF: x1;\n";
    let (code, _, err) = run_on("kernel-divide", common, &[]);
    assert_eq!(code, 1);
    assert!(err.contains("common zero"), "{err}");
    let conic =
        "ring x0, x1, x2;\nvariety: x0*x2 - x1^2;\nF: x0;\nF: x2;\noption param = v^2, u*v, u^2;\noption points = 2;\n";
    let (code, json, err) = run_on("kernel-divide", conic, &[]);
    assert_eq!(code, 0, "{err}");
    assert!(json["max_residual"].as_f64().unwrap() < 1e-6);
}
