use std::path::Path;
use std::process::{Command, Output};

use padic_riesz::schwartz::lizorkin0;
use padic_riesz::{ExtScalar, TestFunction};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-riesz"))
        .args(args)
        .env_remove("PADIC_RIESZ_REPORT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn zeta_closed_form_on_unit_ball() {
    let o = run(&["zeta", "--prime", "5", "--form", "1,-2,-5,10", "--phi", "unit_ball"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(24/25)/(1 + (-1)*t)\n");
}

#[test]
fn hilbert_symbol() {
    let o = run(&["hilbert", "--prime", "7", "3", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1");
    let o = run(&["hilbert", "--prime", "5", "2", "-3/5"]);
    assert_eq!(stdout(&o).trim(), "-1");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["hilbert", "--prime", "2", "3", "7"]).status.code(), Some(3));
    assert_eq!(run(&["hilbert", "--prime", "9", "3", "7"]).status.code(), Some(2));
    assert_eq!(run(&["hilbert", "--prime", "7", "0", "7"]).status.code(), Some(2));
    assert_eq!(run(&["zeta", "--prime", "5", "--form", "1,1"]).status.code(), Some(3));
    assert_eq!(run(&["zeta", "--prime", "5", "--form", "1,0,1"]).status.code(), Some(2));
    assert_eq!(run(&["zeta", "--prime", "3", "--phi", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["zeta", "--prime", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nope", "--prime", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "bernstein", "--prime", "3", "--form", "1,-2"]).status.code(),
        Some(3)
    );
}

#[test]
fn oracle_agreement_and_mismatch() {
    let ok = run(&["oracle", "--prime", "3", "--phi", "lizorkin0", "--s", "2.5"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("PASS"));
    // One level of subdivision cannot resolve the integrand near the origin.
    let coarse = run(&["oracle", "--prime", "3", "--phi", "unit_ball", "--s", "2.1", "--oracle-depth", "1"]);
    assert_eq!(coarse.status.code(), Some(1));
    assert!(stdout(&coarse).starts_with("FAIL"));
}

#[test]
fn rho_against_oracle() {
    for beta in ["1", "eps", "p", "eps*p"] {
        let o = run(&["rho", "--prime", "5", "--beta", beta, "--s", "1.3"]);
        assert_eq!(o.status.code(), Some(0), "{beta}: {}", stdout(&o));
    }
}

#[test]
fn gamma_values() {
    let o = run(&["gamma", "--prime", "3", "2"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = run(&["gamma", "--prime", "3", "--form", "1,-2,-3,6", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let z = v["complex"].as_array().unwrap();
    let norm = z[0].as_f64().unwrap().hypot(z[1].as_f64().unwrap());
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn fourier_output_is_loadable() {
    let o = run(&["fourier", "--prime", "3", "--phi", "lizorkin0", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let hat = TestFunction::<ExtScalar>::from_json_str(&stdout(&o), 64).unwrap();
    assert_eq!(hat, lizorkin0(3, 2).fourier());

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("hat.json");
    std::fs::write(&file, stdout(&o)).unwrap();
    let back = run(&["fourier", "--prime", "3", "--phi", file.to_str().unwrap()]);
    let twice = TestFunction::<ExtScalar>::from_json_str(&stdout(&back), 64).unwrap();
    assert_eq!(twice, lizorkin0(3, 2).reflect());
}

#[test]
fn verify_all_passes_for_three() {
    let o = run(&["verify", "all", "--prime", "3", "--random", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).trim_end().ends_with(", 0 failed"));
}

#[test]
fn golden_reports() {
    let o = run(&["zeta", "--prime", "5", "--form", "1,-2,-5,10", "--phi", "unit_ball", "--out", "json"]);
    assert_eq!(stdout(&o), golden("zeta_p5_unit_ball.json"));
    let o = run(&["verify", "delta", "--prime", "3", "--random", "1", "--out", "json"]);
    assert_eq!(stdout(&o), golden("verify_delta_p3.json"));
    let o = run(&["verify", "funceq", "--prime", "5", "--out", "csv"]);
    assert_eq!(stdout(&o), golden("verify_funceq_p5.csv"));
}

#[test]
fn report_dir_receives_stable_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for threads in ["1", "3"] {
        let o = Command::new(env!("CARGO_BIN_EXE_padic-riesz"))
            .args(["verify", "grouplaw", "--prime", "3", "--grid", "1:2,-1:2", "--random", "1", "--out", "json"])
            .env("PADIC_RIESZ_REPORT_DIR", dir.path())
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        let written = std::fs::read_to_string(dir.path().join("verify-grouplaw-p3.json")).unwrap();
        assert_eq!(written, stdout(&o));
        bodies.push(written);
    }
    assert_eq!(bodies[0], bodies[1]);
}
