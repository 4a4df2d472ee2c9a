use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn renyi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_renyi")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_out(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&renyi(&all))).unwrap()
}

fn error_object(out: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn diagonal_state(dir: &Path, name: &str, diag: &[f64], dims: Option<(usize, usize)>) -> String {
    let n = diag.len();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let cells: Vec<String> = (0..n).map(|j| format!("[{}, 0]", if i == j { diag[i] } else { 0.0 })).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    let dims = dims.map(|(a, b)| format!("\"dims\": [{a}, {b}], ")).unwrap_or_default();
    write(dir, name, &format!("{{\"dim\": {n}, {dims}\"matrix\": [{}]}}", rows.join(", ")))
}

struct Fixture {
    dir: TempDir,
    u2: String,
    mm4: String,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let u2 = write(dir.path(), "u2.json", r#"{"p": [0.5, 0.5]}"#);
    let mm4 = diagonal_state(dir.path(), "mm4.json", &[0.25; 4], None);
    Fixture { dir, u2, mm4 }
}

#[test]
fn classical_entropy_of_uniform_pair() {
    let f = fixture();
    let text = stdout(&renyi(&["entropy", "classical", "--dist", &f.u2, "--beta", "2"]));
    assert_eq!(text.trim(), "H_2 = 1.00000000000 bits");
    let v = json_out(&["entropy", "classical", "--dist", &f.u2, "--beta", "2"]);
    assert_eq!(v["value"], 1.0);
    assert_eq!(v["units"], "bits");
    assert_eq!(v["beta"], 2.0);
    assert_eq!(v["input"]["dist"]["content"]["p"][0], 0.5);
    assert_eq!(v["tolerances"]["chain_tol"], 1e-8);
}

#[test]
fn quantum_entropy_of_maximally_mixed_state() {
    let f = fixture();
    let text = stdout(&renyi(&["entropy", "quantum", "--state", &f.mm4, "--alpha", "2", "--units", "nats"]));
    assert_eq!(text.trim(), "H_2 = 1.38629436112 nats");
    let bits = json_out(&["entropy", "quantum", "--state", &f.mm4, "--alpha", "2", "--units", "bits"]);
    assert!((bits["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn mutual_information_worked_example() {
    let f = fixture();
    let v = json_out(&["mutual-info", "--state", &f.mm4, "--dims", "2,2", "--alpha", "2"]);
    assert!(v["value"].as_f64().unwrap().abs() < 1e-4);
    let sigma = &v["optimizer"]["sigma_b"]["matrix"];
    for i in 0..2 {
        for j in 0..2 {
            let expected = if i == j { 0.5 } else { 0.0 };
            assert!((sigma[i][j][0].as_f64().unwrap() - expected).abs() < 1e-3);
            assert!(sigma[i][j][1].as_f64().unwrap().abs() < 1e-3);
        }
    }
    assert_eq!(v["closed_form"]["c"], 64.0);

    let v = json_out(&["conditional", "--state", &f.mm4, "--dims", "2,2", "--alpha", "2"]);
    assert!((v["value"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-4);
}

#[test]
fn dims_may_come_from_the_file() {
    let f = fixture();
    let tagged = diagonal_state(f.dir.path(), "tagged.json", &[0.4, 0.1, 0.1, 0.4], Some((2, 2)));
    let v = json_out(&["mutual-info", "--state", &tagged, "--alpha", "2"]);
    assert!(v["value"].as_f64().unwrap() > 0.0);

    let out = renyi(&["mutual-info", "--state", &f.mm4, "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let e = error_object(&out);
    assert_eq!(e["code"], "NotBipartite");
    assert_eq!(e["offending_field"], "dims");
}

#[test]
fn type_beta_and_divergence() {
    let f = fixture();
    let v = json_out(&["type-beta", "--dist", &f.u2, "--beta", "0.5"]);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["order_beta_entropy"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let rho = diagonal_state(f.dir.path(), "rho.json", &[0.8, 0.2], None);
    let sigma = diagonal_state(f.dir.path(), "sigma.json", &[0.64 / 0.68, 0.04 / 0.68], None);
    let v = json_out(&["divergence", "--state", &rho, "--sigma", &sigma, "--alpha", "2"]);
    assert!((v["value"].as_f64().unwrap() - 1.36f64.ln()).abs() < 1e-12);
}

#[test]
fn bounds_reports() {
    let f = fixture();
    let v = json_out(&["bounds", "t1", "--dist", &f.u2, "--beta", "0.5"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["reports"][0]["equality"], true);

    let skewed = write(f.dir.path(), "skewed.json", r#"{"p": [0.9, 0.1]}"#);
    let v = json_out(&["bounds", "t2_2", "--dist", &skewed, "--beta", "0.5"]);
    assert_eq!(v["reports"][0]["pass"], false);
    assert_eq!(v["reports"][1]["pass"], true);

    let v = json_out(&["bounds", "t5", "--state", &f.mm4, "--dims", "2,2", "--alpha", "2"]);
    assert_eq!(v["mutual"]["c"], 64.0);
    assert!((v["conditional"]["value"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);

    let v = json_out(&["bounds", "t4", "--state", &f.mm4, "--sigma", &f.mm4, "--alpha", "3"]);
    assert_eq!(v["reports"][0]["equality"], true);

    let text = stdout(&renyi(&["bounds", "lemma4", "--a", &f.mm4]));
    assert!(text.ends_with("PASS\n"));
}

#[test]
fn exit_codes() {
    let f = fixture();
    let out = renyi(&["entropy", "quantum", "--state", &f.mm4, "--alpha", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_object(&out)["offending_field"], "alpha");

    let out = renyi(&["entropy", "classical", "--dist", "/nonexistent/p.json", "--beta", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let e = error_object(&out);
    assert_eq!(e["code"], "IoError");
    assert_eq!(e["offending_field"], "dist");

    let bad = write(f.dir.path(), "bad.json", r#"{"p": [0.5, 0.6]}"#);
    let out = renyi(&["entropy", "classical", "--dist", &bad, "--beta", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_object(&out)["code"], "NotNormalized");

    let nonherm = write(f.dir.path(), "nh.json", r#"{"dim": 2, "matrix": [[[0.5, 0], [0.3, 0]], [[0, 0], [0.5, 0]]]}"#);
    let out = renyi(&["entropy", "quantum", "--state", &nonherm, "--alpha", "2"]);
    assert_eq!(error_object(&out)["code"], "NonHermitianInput");

    assert_eq!(renyi(&["bounds", "t1", "--beta", "2"]).status.code(), Some(2));
    assert_eq!(renyi(&["entropy", "classical", "--beta", "2"]).status.code(), Some(2));
    assert_eq!(renyi(&["gen", "unitary", "--dim", "2", "--seed", "1", "--out", "x"]).status.code(), Some(2));
    assert_eq!(renyi(&["verify", "t1", "--seed", "-3"]).status.code(), Some(2));
    assert_eq!(renyi(&["mutual-info", "--state", &f.mm4, "--dims", "2x2", "--alpha", "2"]).status.code(), Some(2));

    let out = renyi(&["verify", "lemma9", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_object(&out)["code"], "UnknownSuite");
}

#[test]
fn dimension_cap_from_environment() {
    let f = fixture();
    let out = Command::new(env!("CARGO_BIN_EXE_renyi"))
        .args(["entropy", "quantum", "--state", &f.mm4, "--alpha", "2"])
        .env("RENYI_MAX_DIM", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let e = error_object(&out);
    assert_eq!(e["code"], "DimensionTooLarge");
    assert_eq!(e["offending_field"], "state");
}

fn gen_file(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    stdout(&renyi(&all));
    path
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, extra) in [("density", vec!["--rank", "2"]), ("pd", vec!["--cap", "50"]), ("simplex", vec!["--zeros", "1"])] {
        let mut args = vec![kind, "--dim", "4", "--seed", "7"];
        args.extend(extra);
        let a = std::fs::read(gen_file(dir.path(), &format!("{kind}-a.json"), &args)).unwrap();
        let b = std::fs::read(gen_file(dir.path(), &format!("{kind}-b.json"), &args)).unwrap();
        assert_eq!(a, b, "{kind}");
        let text = String::from_utf8(a).unwrap();
        let again = if kind == "simplex" {
            renyi_core::io::DistributionFile::from_json(&text).unwrap().to_json()
        } else {
            renyi_core::io::MatrixFile::from_json(&text).unwrap().to_json()
        };
        assert_eq!(again, text, "{kind}");
    }

    let rho = gen_file(dir.path(), "bip.json", &["density", "--dim", "4", "--seed", "7", "--dims", "2,2"]);
    let v = json_out(&["mutual-info", "--state", rho.to_str().unwrap(), "--alpha", "2"]);
    assert!(v["value"].as_f64().unwrap() >= 0.0);

    let p = gen_file(dir.path(), "p.json", &["simplex", "--dim", "5", "--seed", "7"]);
    let v = json_out(&["entropy", "classical", "--dist", p.to_str().unwrap(), "--beta", "0.5"]);
    assert!(v["value"].as_f64().unwrap() <= 5f64.log2());
}

#[test]
fn verify_output_is_stable() {
    let a = stdout(&renyi(&["verify", "t3", "--trials", "200", "--seed", "4"]));
    let b = stdout(&renyi(&["verify", "t3", "--trials", "200", "--seed", "4"]));
    assert_eq!(a, b);
    assert!(a.ends_with("PASS\n"));
    let v = json_out(&["verify", "t1", "--trials", "150", "--seed", "4"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["equality_injected"], 2);
}
