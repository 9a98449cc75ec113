use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workdir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(dir: &Path, job: &str, extra: &[&str]) -> (Output, Value) {
    let input = dir.join("job.json");
    std::fs::write(&input, job).unwrap();
    let out = dir.join("out");
    let output = Command::new(env!("CARGO_BIN_EXE_btriple"))
        .arg("run")
        .arg("--input")
        .arg(&input)
        .arg("--output")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    let doc = std::fs::read_to_string(out.join("results.json"))
        .map(|s| serde_json::from_str(&s).unwrap())
        .unwrap_or(Value::Null);
    (output, doc)
}

#[test]
fn classify_reports_the_verdict() {
    let dir = workdir("classify");
    let job = r#"{"task":"classify","model":{"kind":"schroedinger"},
        "lattice":{"kind":"rule","rule":"one_over_n","N":1000}}"#;
    let (out, doc) = run(&dir, job, &["--plot", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["result"]["verdict"], "ESGeneralizedOnly");
    assert!(dir.join("out/constants.csv").exists());
    assert!(dir.join("out/constants.svg").exists());
}

#[test]
fn spectrum_writes_roots_and_agrees() {
    let dir = workdir("spectrum");
    let job = r#"{"task":"spectrum","model":{"kind":"schroedinger"},
        "lattice":{"kind":"rule","rule":"constant","h":1.0,"N":10},
        "params":{"alpha":[2,2,2,2,2,2,2,2,2],"cutoff":"dirichlet","interval":[-5,40]}}"#;
    let (out, doc) = run(&dir, job, &["--format", "csv", "--grid", "4000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(doc["result"]["agreement"]["count_match"], true);
    for f in ["det_scan.csv", "shooting.csv", "roots.csv"] {
        assert!(dir.join("out").join(f).exists(), "{f}");
    }
    let roots = std::fs::read_to_string(dir.join("out/roots.csv")).unwrap();
    assert!(roots.lines().count() > 5);
}

#[test]
fn validate_passes_for_a_sandbox() {
    let dir = workdir("validate");
    let job = r#"{"task":"validate","seed":7,
        "params":{"sandbox":{"kind":"random","state_dim":4,"boundary_dim":2}}}"#;
    let (out, doc) = run(&dir, job, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(doc["result"]["passed"], true);
}

#[test]
fn malformed_input_exits_with_one() {
    let dir = workdir("malformed");
    let (out, doc) = run(&dir, r#"{"task":"classify","bogus":1}"#, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(doc["status"], "error");
    assert_eq!(doc["error"]["kind"], "input");
    let (out, _) = run(&dir, r#"{"task":"spectrum","model":{"kind":"momentum"}}"#, &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_selfadjoint_theta_exits_with_two() {
    let dir = workdir("theta");
    // f_0 + i f_1 = 0 is not a selfadjoint condition.
    let job = r#"{"task":"spectrum","model":{"kind":"momentum"},
        "lattice":{"kind":"explicit","d":[1.0]},
        "params":{"interval":[-5,5],
          "theta":{"c0":[[[1,0]]],"c1":[[[0,1]]]}}}"#;
    let (out, doc) = run(&dir, job, &[]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(doc["status"], "validation_failed");
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let job = r#"{"task":"spectrum","model":{"kind":"dirac","c":1.0},
        "lattice":{"kind":"rule","rule":"constant","h":1.0,"N":5},
        "params":{"alpha":[1,1,1,1],"interval":[-6,6]}}"#;
    let mut docs = Vec::new();
    for (k, threads) in ["1", "4", "4"].iter().enumerate() {
        let dir = workdir(&format!("determinism{k}"));
        let (out, _) = run(&dir, job, &["--threads", threads]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        docs.push(std::fs::read(dir.join("out/results.json")).unwrap());
    }
    assert!(docs.windows(2).all(|w| w[0] == w[1]));
}
