//! End-to-end tests of the command-line surface against the bundled
//! definition files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qspectra")
}

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn all_bundled_specs_parse_and_analyze() {
    for name in [
        "thue-morse.toml",
        "queffelec-zeta.toml",
        "rudin-shapiro.toml",
        "table.toml",
        "height-h3.toml",
        "tm-rs-product.toml",
        "six-letter.toml",
    ] {
        let out = run(&["analyze", spec(name).to_str().unwrap()]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn invalid_spec_exits_2_with_diagnostics() {
    let dir = std::env::temp_dir().join("qspectra-badspec");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    std::fs::write(
        &path,
        "q = [2, 2]\nalphabet = [\"0\", \"1\"]\n[rules]\n\"0\" = [\"0\", \"1\", \"0\"]\n\"1\" = [\"1\", \"0\", \"1\", \"0\"]\n",
    )
    .unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("rule '0': expected 4 cells, found 3"), "stderr: {err}");
}

#[test]
fn fourier_k5_emits_quarter_rows() {
    let dir = std::env::temp_dir().join("qspectra-fourier");
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("k5.csv");
    let out = run(&[
        "fourier",
        spec("thue-morse.toml").to_str().unwrap(),
        "--k",
        "5",
        "--emit-csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut data_rows = 0;
    for line in csv.lines().skip(1) {
        assert!(line.ends_with(",1,4"), "unexpected row {line}");
        data_rows += 1;
    }
    assert_eq!(data_rows, 4);
}

#[test]
fn freq_deviation_small() {
    let out = run(&[
        "freq",
        spec("thue-morse.toml").to_str().unwrap(),
        "--n",
        "10",
        "--k",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in text.lines().filter(|l| l.trim_start().starts_with("pair")) {
        let dev: f64 = line
            .split("deviation")
            .nth(1)
            .unwrap()
            .trim()
            .parse()
            .unwrap();
        assert!(dev.abs() < 0.01, "line: {line}");
    }
}

#[test]
fn report_thue_morse_contents_and_exit() {
    let dir = std::env::temp_dir().join("qspectra-tm-report");
    let _ = std::fs::remove_dir_all(&dir);
    let out = run(&[
        "report",
        spec("thue-morse.toml").to_str().unwrap(),
        "-o",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = std::fs::read_to_string(dir.join("report.json")).unwrap();
    assert!(json.contains("\u{3c3}_max ~ \u{3c9}_q \u{2217} (\u{3bb}_1 + \u{3bb}_2)"));
    assert!(json.contains("singular-continuous"));
    assert!(json.contains("\"abc_purely_singular\": true"));
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["components"].as_array().unwrap().len(), 2);
    assert_eq!(doc["components"][0]["classification"]["type"], "discrete");
    assert_eq!(doc["components"][1]["classification"]["type"], "singular-continuous");
    // coefficient CSV present with the header and exact rational columns
    let csv = std::fs::read_to_string(dir.join("coefficients.csv")).unwrap();
    assert!(csv.starts_with("k,pair,numerator,denominator\n"));
    assert!(csv.contains("\"1\",00,1,6"));
}

#[test]
fn report_is_deterministic() {
    let dir1 = std::env::temp_dir().join("qspectra-det-1");
    let dir2 = std::env::temp_dir().join("qspectra-det-2");
    for d in [&dir1, &dir2] {
        let _ = std::fs::remove_dir_all(d);
        let out = run(&[
            "report",
            spec("rudin-shapiro.toml").to_str().unwrap(),
            "-o",
            d.to_str().unwrap(),
            "--jobs",
            "2",
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    for file in ["report.json", "report.txt", "coefficients.csv"] {
        let a = std::fs::read(dir1.join(file)).unwrap();
        let b = std::fs::read(dir2.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between runs");
    }
}

#[test]
fn six_letter_report_flags_incompleteness() {
    let dir = std::env::temp_dir().join("qspectra-six-report");
    let _ = std::fs::remove_dir_all(&dir);
    let out = run(&[
        "report",
        spec("six-letter.toml").to_str().unwrap(),
        "-o",
        dir.to_str().unwrap(),
        "--window",
        "2",
    ]);
    // numeric hull: completes with the incompleteness exit flag
    assert_eq!(out.status.code(), Some(1));
    let json = std::fs::read_to_string(dir.join("report.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["decomposition"]["index_of_imprimitivity"], 2);
    assert_eq!(doc["decomposition"]["classes"][0], serde_json::json!(["1", "3"]));
    assert_eq!(doc["decomposition"]["classes"][1], serde_json::json!(["2", "5"]));
    assert_eq!(doc["decomposition"]["transient"], serde_json::json!(["4", "6"]));
    assert_eq!(doc["hull"]["complete"], false);
}

#[test]
fn hull_candidates_verified() {
    let dir = std::env::temp_dir().join("qspectra-cand");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tm-cand.toml");
    let base = std::fs::read_to_string(spec("thue-morse.toml")).unwrap();
    std::fs::write(
        &path,
        format!(
            "{base}\n[[hull_candidates]]\nentries = [\"1\", \"-1\", \"-1\", \"1\"]\n\n[[hull_candidates]]\nentries = [\"1\", \"2\", \"2\", \"1\"]\n"
        ),
    )
    .unwrap();
    let out = run(&["hull", path.to_str().unwrap(), "--method", "candidates"]);
    // verify-candidates is never certified complete
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("extreme points: 1"), "{text}");
    assert!(text.contains("not a member"), "{text}");
}

#[test]
fn hull_h3_commutative() {
    let out = run(&[
        "hull",
        spec("height-h3.toml").to_str().unwrap(),
        "--method",
        "commutative-exact",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("extreme points: 6"), "{text}");
}

#[test]
fn classify_rudin_shapiro() {
    let out = run(&["classify", spec("rudin-shapiro.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("component 1: discrete(1Z^d)"), "{text}");
    assert!(text.contains("component 2: lebesgue"), "{text}");
}

#[test]
fn analyze_and_hull_write_json_documents() {
    let dir = std::env::temp_dir().join("qspectra-json-docs");
    std::fs::create_dir_all(&dir).unwrap();
    let analyze_json = dir.join("analyze.json");
    let out = run(&[
        "analyze",
        spec("queffelec-zeta.toml").to_str().unwrap(),
        "-o",
        analyze_json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&analyze_json).unwrap()).unwrap();
    assert_eq!(doc["substitution"]["expansion_total"], "3");
    assert_eq!(doc["predicates"]["bijective"], true);
    assert_eq!(doc["predicates"]["commutative"], false);

    let hull_json = dir.join("hull.json");
    let out = run(&[
        "hull",
        spec("queffelec-zeta.toml").to_str().unwrap(),
        "-o",
        hull_json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&hull_json).unwrap()).unwrap();
    assert_eq!(doc["method"], "exact-1d");
    assert_eq!(doc["complete"], true);
    assert_eq!(doc["points"].as_array().unwrap().len(), 2);
}

#[test]
fn fourier_refuses_unknown_aperiodicity() {
    let dir = std::env::temp_dir().join("qspectra-unknown-aper");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("unknown.toml");
    // a two-dimensional input without an aperiodicity assertion
    std::fs::write(
        &path,
        "q = [2, 2]\nalphabet = [\"0\", \"1\"]\n[rules]\n\"0\" = [\"0\", \"1\", \"1\", \"0\"]\n\"1\" = [\"1\", \"0\", \"0\", \"1\"]\n",
    )
    .unwrap();
    let out = run(&["fourier", path.to_str().unwrap(), "--k", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("aperiodicity"), "stderr: {err}");
}

#[test]
fn cell_budget_env_is_honored() {
    let out = Command::new(bin())
        .args(["freq", spec("thue-morse.toml").to_str().unwrap(), "--n", "12", "--k", "1"])
        .env("QSPECTRA_CELL_BUDGET", "64")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget"), "stderr: {err}");
}
