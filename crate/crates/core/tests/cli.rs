use std::path::Path;
use std::process::{Command, Output};

use elastica::elastic::fixtures;
use elastica::translation::PeriodicField;
use serde_json::Value;

fn elastica(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elastica"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const ISO: &str = r#"{"symmetry":"orthotropic","C11":"3","C22":"3","C33":"3","C12":"1","C13":"1","C23":"1","C44":"1","C55":"1","C66":"1"}"#;

#[test]
fn malformed_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.json"), "{\"symmetry\": ").unwrap();
    let out = elastica(dir.path(), &["analyze", "t.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = elastica(dir.path(), &["det-poly", "absent.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_poly_on_the_cyclic_sextic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p.txt"), fixtures::cyclic_sextic().to_text()).unwrap();
    let out = elastica(dir.path(), &["check-poly", "p.txt"]);
    assert!(out.status.success());
    let v = report(&out);
    assert_eq!(v["result"]["extremality"]["verdict"], "extremal_up_to_tol");
    assert_eq!(v["command"], "check-poly");
    assert_eq!(v["config"]["seed"], 0);
}

#[test]
fn check_poly_verdicts_are_not_errors() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p.txt"), "y1^6 + y2^6 + 0*y3^6").unwrap();
    let out = elastica(dir.path(), &["check-poly", "p.txt"]);
    assert!(out.status.success());
    assert_eq!(report(&out)["result"]["extremality"]["verdict"], "not_extremal");
    std::fs::write(dir.path().join("n.txt"), "y1^2 - y2^2").unwrap();
    let out = elastica(dir.path(), &["check-poly", "n.txt"]);
    assert!(out.status.success());
    assert!(report(&out)["result"]["extremality"].is_null());
}

#[test]
fn perfect_square_text_output() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p.txt"), "y1^2*y2^2*y3^2").unwrap();
    let out = elastica(dir.path(), &["perfect-square", "p.txt", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("square: (1*y1^1*y2^1*y3^1)^2"), "{text}");
}

#[test]
fn det_poly_of_a_gram_form() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("q.json"), fixtures::cyclic_extremal_form().to_json_string()).unwrap();
    let out = elastica(dir.path(), &["det-poly", "q.json"]);
    assert!(out.status.success());
    assert_eq!(
        report(&out)["result"]["text"],
        fixtures::cyclic_extremal_det().to_text().as_str()
    );
}

#[test]
fn analyze_flags_a_zero_axial_constant() {
    let dir = tempfile::tempdir().unwrap();
    let t = ISO.replace(r#""C11":"3""#, r#""C11":"0""#);
    std::fs::write(dir.path().join("t.json"), t).unwrap();
    let out = elastica(dir.path(), &["analyze", "t.json", "--starts", "20"]);
    assert!(out.status.success());
    let v = report(&out);
    assert_eq!(v["result"]["axial_product_nonzero"], false);
    assert_eq!(v["result"]["consistency"], "hypotheses_not_satisfied");
    assert_eq!(v["config"]["budget"]["form_starts"], 20);
}

#[test]
fn translation_with_a_field_file() {
    let dir = tempfile::tempdir().unwrap();
    let setup = format!(r#"{{"c1": {ISO}, "c2": {ISO}, "translation": {}}}"#, fixtures::cyclic_extremal_form().to_json_string());
    std::fs::write(dir.path().join("s.json"), setup).unwrap();
    let field = PeriodicField::plane_wave(8, [1.0, 0.0, 0.0], [1, 0, 0]);
    let mut f = std::fs::File::create(dir.path().join("u.bin")).unwrap();
    field.write_to(&mut f).unwrap();
    let out = elastica(dir.path(), &["translation", "s.json", "--field", "u.bin", "--out", "r.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["gap"]["phases"].as_array().unwrap().len(), 2);
    assert!(v["result"]["fourier"]["total"].as_f64().unwrap() > 0.0);
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = elastica::RunConfig::default();
    cfg.seed = 9;
    cfg.budget.square_starts = 3;
    std::fs::write(dir.path().join("c.json"), serde_json::to_string(&cfg).unwrap()).unwrap();
    std::fs::write(dir.path().join("p.txt"), "y1^2").unwrap();
    let out = elastica(dir.path(), &["perfect-square", "p.txt", "--config", "c.json", "--tol", "1e-6"]);
    let v = report(&out);
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["budget"]["square_starts"], 3);
    assert_eq!(v["config"]["tol"]["perfect_square"], 1e-6);
}

#[test]
fn usage_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(elastica(dir.path(), &["no-such-command"]).status.code(), Some(2));
    assert_eq!(elastica(dir.path(), &["--format", "yaml", "verify-fixtures"]).status.code(), Some(2));
}
