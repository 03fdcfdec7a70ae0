//! End-to-end tests of the command-line interface and its exit-status
//! contract (0 ok / 1 oracle mismatch / 2 blow-up / 3 invalid config /
//! 4 bound violated / 5 symmetry violated).

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_triadwave"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn run_cmd(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

const BURGERS_RUN: &str = r#"
[kernel]
name = "burgers"

[initial_data]
profile = "sine"
amplitude = 0.1

[simulation]
n = 24
dt = 1e-3
t_end = 0.2
tracked_s = [0.0, 2.0]
output_every = 20
"#;

#[test]
fn run_completes_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BURGERS_RUN);
    let out_dir = dir.path().join("out");
    let output = run_cmd(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");

    let csv = std::fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,P,H,norm_s_0,norm_s_2,sup_ux,envelope"
    );
    let times: Vec<f64> = lines
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(!times.is_empty());
    assert!(times.windows(2).all(|w| w[0] < w[1]), "t not monotone");

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["exit_status"], 0);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    for artifact in manifest["artifacts"].as_array().unwrap() {
        assert!(
            Path::new(artifact.as_str().unwrap()).exists(),
            "listed artifact missing: {artifact}"
        );
    }
}

#[test]
fn identical_runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BURGERS_RUN);
    let mut outputs = Vec::new();
    for sub in ["a", "b"] {
        let out_dir = dir.path().join(sub);
        let output = bin()
            .args(["run", "--config", cfg.to_str().unwrap()])
            .args(["--out", out_dir.to_str().unwrap()])
            .args(["--threads", if sub == "a" { "1" } else { "2" }])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0));
        outputs.push(std::fs::read(out_dir.join("diagnostics.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "CSV must not depend on run or thread count");
}

#[test]
fn invalid_rayleigh_ratio_exits_3_naming_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[kernel]
name = "rayleigh"
r = 1.5
alpha = 1.0
beta = 1.0
gamma = 1.0

[initial_data]
profile = "sine"
amplitude = 0.1

[simulation]
n = 8
dt = 1e-3
t_end = 0.1
"#,
    );
    let output = run_cmd(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("0 < r < 1"), "stderr: {stderr}");
}

#[test]
fn blowup_exits_2_with_time_in_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[kernel]
name = "surface"

[initial_data]
profile = "sine"
amplitude = 0.8

[simulation]
n = 32
dt = 2e-3
t_end = 50.0
tracked_s = [0.0, 2.0]
output_every = 50
blowup_norm_threshold = 12.0
"#,
    );
    let out_dir = dir.path().join("out");
    let output = run_cmd(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["exit_status"], 2);
    assert!(manifest["blowup"]["t"].as_f64().unwrap() > 0.0);
    // Diagnostics up to detection were still emitted.
    assert!(out_dir.join("diagnostics.csv").exists());
}

fn kernel_only_config(dir: &Path, kernel_block: &str) -> std::path::PathBuf {
    write_config(
        dir,
        &format!(
            r#"
{kernel_block}

[initial_data]
profile = "sine"
amplitude = 0.1

[simulation]
n = 8
dt = 1e-3
t_end = 0.1
"#
        ),
    )
}

#[test]
fn verify_kernel_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    for (block, expected) in [
        ("[kernel]\nname = \"surface\"", 0),
        ("[kernel]\nname = \"burgers\"", 0),
        ("[kernel]\nname = \"hunter_saxton\"", 0),
        ("[kernel]\nname = \"compacton\"", 4),
        (
            "[kernel]\nname = \"broken\"\nexpression = \"k\"\ndegree = 1.0",
            5,
        ),
    ] {
        let cfg = kernel_only_config(dir.path(), block);
        let output = run_cmd(&["verify-kernel", "--config", cfg.to_str().unwrap(), "--R", "100"]);
        assert_eq!(
            output.status.code(),
            Some(expected),
            "kernel block {block}: {}",
            String::from_utf8_lossy(&output.stdout)
        );
        // Reports are machine-readable JSON on stdout.
        let report: serde_json::Value =
            serde_json::from_slice(&output.stdout).expect("stdout is JSON");
        assert_eq!(report["exit_status"], expected);
    }
}

#[test]
fn constants_emits_theory_record() {
    let output = run_cmd(&["constants", "--s", "2.6", "--kernel", "surface"]);
    assert_eq!(output.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(record["kernel"], "surface");
    assert_eq!(record["mu"], 0.5);
    let k_s = record["k_s"].as_f64().unwrap();
    assert!((k_s - 10.70).abs() < 0.02, "k_s = {k_s}");
    let t_star = record["t_star_unit_norm"].as_f64().unwrap();
    assert!((t_star * k_s - 1.0).abs() < 1e-12);
    // Parameterized kernels need a config file.
    let output = run_cmd(&["constants", "--s", "3.0", "--kernel", "rayleigh"]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn convergence_reports_rk4_order_and_spectral_floor() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[kernel]
name = "burgers"

[initial_data]
profile = "sine"
amplitude = 0.1

[simulation]
n = 24
dt = 5e-3
t_end = 1.0
"#,
    );
    let out_dir = dir.path().join("out");
    let output = run_cmd(&[
        "convergence",
        "--config",
        cfg.to_str().unwrap(),
        "--dt-list",
        "4e-2,2e-2,1e-2,5e-3,2.5e-3",
        "--n-list",
        "12,16,24",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let dt_csv = std::fs::read_to_string(out_dir.join("convergence_dt.csv")).unwrap();
    let orders: Vec<f64> = dt_csv
        .lines()
        .skip(2) // header + first row (no previous point)
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    assert!(!orders.is_empty());
    for order in &orders {
        assert!((order - 4.0).abs() < 0.5, "observed order {order}");
    }
    // Smooth data well inside the resolved regime: N-refinement error sits
    // at round-off.
    let n_csv = std::fs::read_to_string(out_dir.join("convergence_n.csv")).unwrap();
    let errs: Vec<f64> = n_csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(errs.iter().all(|&e| e < 1e-10), "errors {errs:?}");
}

#[test]
fn convergence_singleton_lists_are_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BURGERS_RUN);
    let out_dir = dir.path().join("out");
    let output = run_cmd(&[
        "convergence",
        "--config",
        cfg.to_str().unwrap(),
        "--dt-list",
        "1e-3",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let dt_csv = std::fs::read_to_string(out_dir.join("convergence_dt.csv")).unwrap();
    assert_eq!(dt_csv.lines().count(), 1); // header only
}

#[test]
fn oracle_compare_burgers_and_hunter_saxton() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[kernel]
name = "burgers"

[initial_data]
profile = "sine"
amplitude = 0.1

[simulation]
n = 48
dt = 2e-3
t_end = 1.0
"#,
    );
    let output = run_cmd(&["oracle-compare", "--config", cfg.to_str().unwrap()]);
    assert_eq!(
        output.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&output.stdout)
    );
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 2);

    let cfg = write_config(
        dir.path(),
        r#"
[kernel]
name = "hunter_saxton"

[initial_data]
profile = "sine"
amplitude = 0.2

[simulation]
n = 32
dt = 1e-3
t_end = 0.3
"#,
    );
    let output = run_cmd(&["oracle-compare", "--config", cfg.to_str().unwrap()]);
    assert_eq!(
        output.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&output.stdout)
    );
}

#[test]
fn phi_form_initial_data_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[kernel]
name = "surface"

[initial_data]
profile = "sine"
amplitude = 0.05
form = "phi"

[simulation]
n = 16
dt = 1e-3
t_end = 0.1
"#,
    );
    let out_dir = dir.path().join("out");
    let output = run_cmd(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
}

#[test]
fn snapshots_written_when_requested() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("{BURGERS_RUN}\n[output]\nsnapshot_every = 100\n"),
    );
    let out_dir = dir.path().join("out");
    let output = run_cmd(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(out_dir.join("state_00000000.json").exists());
    assert!(out_dir.join("state_00000100.json").exists());
    assert!(out_dir.join("state_00000200.json").exists());
    // Snapshots are valid field dumps.
    let text = std::fs::read_to_string(out_dir.join("state_00000100.json")).unwrap();
    let dump: triadwave::field::FieldDump = serde_json::from_str(&text).unwrap();
    assert_eq!(dump.n, 24);
}
