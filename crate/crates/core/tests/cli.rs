//! End-to-end tests against the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn evpsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evpsim"))
        .args(args)
        .output()
        .expect("failed to spawn evpsim")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn csv_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect()
}

#[test]
fn run_preset_writes_trajectory_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let result = evpsim(&[
        "run",
        "--preset",
        "bingham_n1_case1",
        "--t-end",
        "0.1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "stderr: {}", stderr(&result));

    let rows = csv_rows(&out);
    assert_eq!(rows[0], "t,u,v,f_s,f_d,E_d");
    // 0.1 / 1e-4 steps plus header and initial state
    assert_eq!(rows.len(), 1 + 1001);
    assert!(stdout(&result).contains("# E_d(T)"));
}

#[test]
fn run_with_storage_stride_thins_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let result = evpsim(&[
        "run",
        "--preset",
        "bingham_n1_case1",
        "--t-end",
        "0.1",
        "--storage-stride",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "stderr: {}", stderr(&result));
    assert_eq!(csv_rows(&out).len(), 1 + 101);
}

#[test]
fn run_config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let show = evpsim(&["preset", "show", "bingham_n1_case1"]);
    assert!(show.status.success());
    let config_path = dir.path().join("case1.toml");
    std::fs::write(&config_path, stdout(&show)).unwrap();

    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    let from_file = evpsim(&[
        "run",
        "--config",
        config_path.to_str().unwrap(),
        "--t-end",
        "0.05",
        "--out",
        out_a.to_str().unwrap(),
    ]);
    let from_preset = evpsim(&[
        "run",
        "--preset",
        "bingham_n1_case1",
        "--t-end",
        "0.05",
        "--out",
        out_b.to_str().unwrap(),
    ]);
    assert!(from_file.status.success(), "stderr: {}", stderr(&from_file));
    assert!(from_preset.status.success());
    assert_eq!(csv_rows(&out_a), csv_rows(&out_b));
}

#[test]
fn converge_reports_first_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("conv.csv");
    let result = evpsim(&[
        "converge",
        "--preset",
        "bingham_n1_case1",
        "--t-end",
        "1.0",
        "--dts",
        "1e-3,5e-4",
        "--dt-ref",
        "1e-4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "stderr: {}", stderr(&result));

    let text = stdout(&result);
    assert!(text.contains("# observed_order_u"));
    assert!(text.contains("# observed_order_v"));
    let rows = csv_rows(&out);
    assert_eq!(rows[0], "dt,e_u,e_v");
    assert!(rows.iter().any(|r| r.starts_with("# observed_order_u")));
}

#[test]
fn converge_rejects_non_commensurate_steps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("conv.csv");
    let result = evpsim(&[
        "converge",
        "--preset",
        "bingham_n1_case1",
        "--t-end",
        "0.5",
        "--dts",
        "1e-3",
        "--dt-ref",
        "3e-4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!result.status.success());
    assert!(stderr(&result).contains("error:"));
    assert!(!out.exists());
}

#[test]
fn compare_two_presets() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cmp.csv");
    let result = evpsim(&[
        "compare",
        "--preset-a",
        "bingham_n1_case2",
        "--preset-b",
        "bingham_n1_case3",
        "--t-end",
        "0.1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "stderr: {}", stderr(&result));
    let rows = csv_rows(&out);
    assert_eq!(rows[0], "t,u_a,u_b,v_a,v_b,f_d_a,f_d_b,E_d_a,E_d_b");
    assert_eq!(rows.len(), 1 + 1001);
}

#[test]
fn preset_list_names_all_presets() {
    let result = evpsim(&["preset", "list"]);
    assert!(result.status.success());
    let listing = stdout(&result);
    let names: Vec<&str> = listing.lines().collect();
    assert_eq!(names.len(), 9);
    assert!(names.contains(&"bingham_n1_benchmark"));
    assert!(names.contains(&"norton_n3_case3"));
    assert!(names.contains(&"imex"));
}

#[test]
fn unknown_preset_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let result = evpsim(&[
        "run",
        "--preset",
        "no_such_preset",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!result.status.success());
    assert!(stderr(&result).contains("no_such_preset"));
}

#[test]
fn invalid_config_fails_naming_key() {
    let dir = tempfile::tempdir().unwrap();
    let show = evpsim(&["preset", "show", "bingham_n1_case1"]);
    let bad = stdout(&show).replace("alpha = 1.0", "alpha = 0.0");
    let config_path = dir.path().join("bad.toml");
    std::fs::write(&config_path, bad).unwrap();

    let out = dir.path().join("x.csv");
    let result = evpsim(&[
        "run",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!result.status.success());
    assert!(stderr(&result).contains("integrator.alpha"));
}

#[test]
fn unwritable_output_path_names_the_path() {
    let result = evpsim(&[
        "run",
        "--preset",
        "bingham_n1_case1",
        "--t-end",
        "0.01",
        "--out",
        "/nonexistent-dir/out.csv",
    ]);
    assert!(!result.status.success());
    assert!(stderr(&result).contains("/nonexistent-dir/out.csv"));
}

#[test]
fn requires_exactly_one_config_source() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let result = evpsim(&["run", "--out", out.to_str().unwrap()]);
    assert!(!result.status.success());
}
