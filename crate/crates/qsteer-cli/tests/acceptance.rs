//! CLI acceptance: every subcommand run twice with identical flags and seeds
//! produces byte-identical outputs, plus the exit-code contract.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qsteer")
}

struct Dir {
    root: PathBuf,
}

impl Dir {
    fn new(tag: &str) -> Self {
        let root = std::env::temp_dir().join(format!("qsteer-cli-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&root);
        fs::create_dir_all(&root).unwrap();
        Dir { root }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, contents).unwrap();
        p
    }
}

impl Drop for Dir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.root);
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap()
}

const E0: &str = r#"{"offset": 0, "amplitudes": [[1.0, 0.0]]}"#;
const E7: &str = r#"{"offset": 7, "amplitudes": [[1.0, 0.0]]}"#;
const PLUS_DENSITY: &str = r#"{"offset": 0, "matrix": [[[0.5, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.5, 0.0]]]}"#;
const UNIFORM_DENSITY: &str =
    r#"{"offset": 0, "matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}"#;
const NOT_POSITIVE_DENSITY: &str =
    r#"{"offset": 0, "matrix": [[[0.5, 0.0], [0.6, 0.0]], [[0.6, 0.0], [0.5, 0.0]]]}"#;
const SWAP_UNITARY: &str = r#"{"offset": 0, "matrix": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]}"#;

/// Run one subcommand twice into separate output files and require
/// byte-identical results and equal exit codes.
fn assert_deterministic(dir: &Dir, tag: &str, args: &[&str], outputs: &[&str]) {
    let mut first_codes = Vec::new();
    for round in 0..2 {
        let mut full: Vec<String> = Vec::new();
        for a in args {
            full.push(a.replace("{round}", &round.to_string()));
        }
        let out = run(&full.iter().map(String::as_str).collect::<Vec<_>>());
        first_codes.push(code(&out));
    }
    assert_eq!(first_codes[0], first_codes[1], "{tag}: exit codes differ");
    for name in outputs {
        let a = read(&dir.path(&name.replace("{round}", "0")));
        let b = read(&dir.path(&name.replace("{round}", "1")));
        assert!(!a.is_empty(), "{tag}: empty output {name}");
        assert_eq!(a, b, "{tag}: outputs differ for {name}");
    }
}

/// 8. Determinism: every CLI subcommand, run twice with identical flags and
///    seeds, produces byte-identical outputs.
#[test]
fn criterion_8_cli_determinism() {
    let started = Instant::now();
    let dir = Dir::new("det");
    let e0 = dir.write("e0.json", E0);
    let e7 = dir.write("e7.json", E7);
    let plus = dir.write("plus.json", PLUS_DENSITY);
    let uniform = dir.write("uniform.json", UNIFORM_DENSITY);
    let swap = dir.write("swap.json", SWAP_UNITARY);
    let (e0s, e7s) = (e0.to_str().unwrap(), e7.to_str().unwrap());
    let (pluss, uniforms) = (plus.to_str().unwrap(), uniform.to_str().unwrap());
    let swaps = swap.to_str().unwrap();

    let p = |name: &str| dir.path(name).to_string_lossy().into_owned();

    assert_deterministic(
        &dir,
        "steer-state",
        &[
            "steer-state", "--source", e0s, "--target", e7s, "--eps", "1e-9",
            "--out", &p("ss-{round}.json"), "--report", &p("ssr-{round}.json"),
        ],
        &["ss-{round}.json", "ssr-{round}.json"],
    );

    assert_deterministic(
        &dir,
        "steer-density",
        &[
            "steer-density", "--source", pluss, "--target", uniforms, "--eps", "1e-8",
            "--out", &p("sd-{round}.json"), "--report", &p("sdr-{round}.json"),
        ],
        &["sd-{round}.json", "sdr-{round}.json"],
    );

    assert_deterministic(
        &dir,
        "compile-unitary",
        &[
            "compile-unitary", "--matrix", swaps, "--eps", "1e-10",
            "--out", &p("cu-{round}.json"), "--report", &p("cur-{round}.json"),
        ],
        &["cu-{round}.json", "cur-{round}.json"],
    );

    // apply: feed the compiled program back over a state.
    let prog = p("cu-0.json");
    assert_deterministic(
        &dir,
        "apply",
        &[
            "apply", "--input", e0s, "--program", &prog,
            "--out", &p("ap-{round}.json"),
        ],
        &["ap-{round}.json"],
    );

    assert_deterministic(
        &dir,
        "verify-universality",
        &[
            "verify", "--suite", "universality", "--kind", "state", "--dims", "2,4",
            "--trials", "5", "--eps", "1e-9", "--seed", "7",
            "--csv", &p("vu-{round}.csv"), "--out", &p("vu-{round}.json"),
        ],
        &["vu-{round}.csv", "vu-{round}.json"],
    );

    assert_deterministic(
        &dir,
        "verify-negative",
        &[
            "verify", "--suite", "negative", "--seed", "3", "--word-length", "500",
            "--out", &p("vn-{round}.json"),
        ],
        &["vn-{round}.json"],
    );

    assert_deterministic(
        &dir,
        "verify-coverage",
        &[
            "verify", "--suite", "coverage", "--grid-steps", "8", "--max-word-length", "2",
            "--out", &p("vc-{round}.json"),
        ],
        &["vc-{round}.json"],
    );

    assert_deterministic(
        &dir,
        "bench",
        &[
            "bench", "--dims", "2:4", "--trials", "2", "--eps", "1e-9", "--seed", "5",
            "--csv", &p("bench-{round}.csv"),
        ],
        &["bench-{round}.csv"],
    );

    println!(
        "ACCEPTANCE 8 PASS ({:.2}s): all subcommands byte-deterministic",
        started.elapsed().as_secs_f64()
    );
}

#[test]
fn steer_state_trivial_program() {
    let dir = Dir::new("trivial");
    let e0 = dir.write("e0.json", E0);
    let out = dir.path("prog.json");
    let res = run(&[
        "steer-state",
        "--source", e0.to_str().unwrap(),
        "--target", e0.to_str().unwrap(),
        "--eps", "1e-9",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let prog: serde_json::Value = serde_json::from_slice(&read(&out)).unwrap();
    let ops = prog["ops"].as_array().unwrap();
    assert!(ops.len() <= 1, "self-steering should be near-empty: {ops:?}");
}

#[test]
fn validation_failures_exit_2_and_write_nothing() {
    let dir = Dir::new("exit2");
    let bad = dir.write("bad.json", NOT_POSITIVE_DENSITY);
    let good = dir.write("good.json", UNIFORM_DENSITY);
    let out = dir.path("never.json");
    let res = run(&[
        "steer-density",
        "--source", bad.to_str().unwrap(),
        "--target", good.to_str().unwrap(),
        "--eps", "1e-8",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 2);
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("NotPositive"), "stderr: {stderr}");
    assert!(!out.exists(), "no output file may be created on exit 2");
}

#[test]
fn schema_failures_name_the_field() {
    let dir = Dir::new("schema");
    let bad = dir.write("odd.json", r#"{"offset": 0, "amplitudes": [[1.0]]}"#);
    let e7 = dir.write("e7.json", E7);
    let out = dir.path("never.json");
    let res = run(&[
        "steer-state",
        "--source", bad.to_str().unwrap(),
        "--target", e7.to_str().unwrap(),
        "--eps", "1e-9",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 2);
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("amplitudes"), "stderr: {stderr}");
    assert!(!out.exists());
}

#[test]
fn resource_caps_exit_4_and_write_nothing() {
    let dir = Dir::new("exit4");
    let out = dir.path("never.json");
    let res = run(&[
        "verify", "--suite", "coverage",
        "--grid-steps", "16", "--max-word-length", "4",
        "--node-cap", "100",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 4);
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("BudgetExceeded"), "stderr: {stderr}");
    assert!(!out.exists(), "no output file may be created on exit 4");

    // Window cap: steering between windows further apart than the cap.
    let e0 = dir.write("e0.json", E0);
    let far = dir.write("far.json", r#"{"offset": 100, "amplitudes": [[1.0, 0.0]]}"#);
    let res = run(&[
        "--window-cap", "64",
        "steer-state",
        "--source", e0.to_str().unwrap(),
        "--target", far.to_str().unwrap(),
        "--eps", "1e-9",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 4, "stderr: {}", String::from_utf8_lossy(&res.stderr));
    assert!(String::from_utf8_lossy(&res.stderr).contains("WindowOverflow"));
    assert!(!out.exists());
}

#[test]
fn verify_universality_writes_row_per_trial() {
    let dir = Dir::new("rows");
    let csv = dir.path("rows.csv");
    let res = run(&[
        "verify", "--suite", "universality", "--kind", "state",
        "--dims", "2,4,8", "--trials", "50", "--eps", "1e-9", "--seed", "7",
        "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let text = String::from_utf8(read(&csv)).unwrap();
    let rows: Vec<&str> = text.trim_end().split("\r\n").collect();
    assert_eq!(rows.len(), 1 + 150, "header plus 150 trial rows");
    assert_eq!(
        rows[0],
        "dim,trial,op_count,u2_count,shift_count,final_error,wall_time_s"
    );
}

#[test]
fn apply_density_program_end_to_end() {
    let dir = Dir::new("applyd");
    let plus = dir.write("plus.json", PLUS_DENSITY);
    let uniform = dir.write("uniform.json", UNIFORM_DENSITY);
    let prog = dir.path("prog.json");
    let res = run(&[
        "steer-density",
        "--source", plus.to_str().unwrap(),
        "--target", uniform.to_str().unwrap(),
        "--eps", "1e-8",
        "--out", prog.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);

    let out = dir.path("result.json");
    let res = run(&[
        "apply",
        "--input", plus.to_str().unwrap(),
        "--program", prog.to_str().unwrap(),
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let result: serde_json::Value = serde_json::from_slice(&read(&out)).unwrap();
    let m = result["matrix"].as_array().unwrap();
    // diag(1/2, 1/2) up to steering tolerance.
    let d00 = m[0][0][0].as_f64().unwrap();
    let d11 = m[1][1][0].as_f64().unwrap();
    let off = m[0][1][0].as_f64().unwrap();
    assert!((d00 - 0.5).abs() < 1e-8 && (d11 - 0.5).abs() < 1e-8 && off.abs() < 1e-8);
}

#[test]
fn kraus_program_on_state_is_rejected() {
    let dir = Dir::new("kraus-state");
    let e0 = dir.write("e0.json", E0);
    let prog = dir.write(
        "prog.json",
        r#"{"ops": [{"op": "kraus", "elements": [{"weight": 1.0, "swap": 0, "project": false}], "complement": false}]}"#,
    );
    let out = dir.path("never.json");
    let res = run(&[
        "apply",
        "--input", e0.to_str().unwrap(),
        "--program", prog.to_str().unwrap(),
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("KrausOnState"));
    assert!(!out.exists());
}
