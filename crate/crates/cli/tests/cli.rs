use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distmul"))
        .args(args)
        .output()
        .expect("spawn distmul")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn odd_moments_are_exactly_zero() {
    let out = run(&["moments", "--m", "6", "--j", "3"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["A_j"], 0.0);
    assert_eq!(recs[0]["config"]["m"], 6);
    assert_eq!(recs[0]["config"]["output"], "json");
}

#[test]
fn all_moments_when_j_is_omitted() {
    let recs = records(&run(&["moments", "--m", "4"]));
    let js: Vec<u64> = recs.iter().map(|r| r["j"].as_u64().unwrap()).collect();
    assert_eq!(js, vec![1, 2, 3, 4]);
}

#[test]
fn odd_mollifier_exponent_is_a_usage_error() {
    let out = run(&["moments", "--m", "5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
}

#[test]
fn subcritical_alpha_is_rejected_without_explore() {
    let out = run(&["product", "--l", "0", "--k", "0", "--alpha", "1"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn explore_measures_without_a_reference() {
    let out = run(&[
        "product",
        "--l",
        "0",
        "--k",
        "1",
        "--alpha",
        "2",
        "--explore",
    ]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    assert_eq!(recs[0]["status"], "UNVERIFIED");
}

#[test]
fn critical_product_passes() {
    let out = run(&["product", "--l", "0", "--k", "0", "--alpha", "2"]);
    assert_eq!(code(&out), 0);
    let rec = &records(&out)[0];
    assert_eq!(rec["status"], "PASS");
    let (v, e) = (
        rec["value"].as_f64().unwrap(),
        rec["expected"].as_f64().unwrap(),
    );
    assert!((v - e).abs() <= 1e-4 * e.abs());
}

#[test]
fn verify_table_passes() {
    let out = run(&["verify-table", "--tol", "5e-3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    let entries: Vec<&Value> = recs.iter().filter(|r| r["type"] == "entry").collect();
    assert_eq!(entries.len(), 6);
    for e in &entries {
        assert_eq!(e["critical"]["status"], "PASS");
        assert_eq!(e["supercritical"]["status"], "PASS");
    }
    assert_eq!(recs.last().unwrap()["type"], "summary");
    assert_eq!(recs.last().unwrap()["status"], "PASS");
}

#[test]
fn verify_table_csv_has_a_row_per_regime() {
    let out = run(&["--csv", "verify-table", "--tol", "5e-3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# config: {"));
    assert!(lines[1].starts_with("check,l,k,alpha,regime"));
    assert_eq!(lines.len(), 2 + 12 + 1);
}

#[test]
fn csv_output_has_config_comment_and_header() {
    let out = run(&[
        "--csv", "red", "--k", "1", "--eps", "0.5", "--grid", "-1:1:0.5",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let config: Value =
        serde_json::from_str(lines.next().unwrap().strip_prefix("# config: ").unwrap()).unwrap();
    assert_eq!(config["eps"], 0.5);
    assert_eq!(lines.next().unwrap(), "x,value,from_cauchy");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    let center: Vec<f64> = rows[2].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(center[0], 0.0);
    assert_eq!(center[1], 0.0);
}

#[test]
fn flags_override_config_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# defaults\nm = 8\nj = 2").unwrap();
    let path = file.path().to_str().unwrap();
    let rec = &records(&run(&["--config", path, "moments"]))[0];
    assert_eq!(rec["m"], 8);
    assert_eq!(rec["j"], 2);
    let rec = &records(&run(&["--config", path, "moments", "--m", "4"]))[0];
    assert_eq!(rec["m"], 4);
    assert_eq!(rec["config"]["m"], 4);
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "bogus = 1").unwrap();
    let out = run(&["--config", file.path().to_str().unwrap(), "moments"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn output_is_deterministic() {
    let args = ["--csv", "consistency", "--alpha", "2"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scatter_conserves_probability() {
    let out = run(&["scatter", "--V0", "-1.5", "--k", "0.7"]);
    assert_eq!(code(&out), 0);
    let rec = &records(&out)[0];
    let (r, t) = (rec["R"].as_f64().unwrap(), rec["T"].as_f64().unwrap());
    assert!((r + t - 1.0).abs() < 1e-12);
    assert_eq!(rec["matching"]["passed"], true);
    assert!(rec["g"].as_f64().unwrap() < 0.0);
}

#[test]
fn scatter_requires_a_wavenumber() {
    assert_eq!(code(&run(&["scatter", "--V0", "1"])), 2);
}

#[test]
fn diverge_demo_shows_the_contrast() {
    let out = run(&["diverge-demo"]);
    assert_eq!(code(&out), 0);
    let summary = records(&out).pop().unwrap();
    assert_eq!(summary["sequential_converged"], false);
    assert_eq!(summary["merged_converged"], true);
}

#[test]
fn human_output_is_key_value() {
    let out = run(&["--human", "moments", "--m", "2", "--j", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    assert!(lines.next().unwrap().starts_with("m=2  j=2  A_j="));
}
