use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ris_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ris-sim"))
        .args(args)
        .env("RIS_SIM_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&[
        "simulate",
        "--sweep",
        "t=0:8:0.5",
        "--draws",
        "4",
        "--out",
        path(dir.path()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("t_s,model,max_side,subarray_count"));
    assert_eq!(lines.count(), 17);
}

#[test]
fn simulate_is_deterministic() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let out = ris_sim(&[
            "simulate",
            "--sweep",
            "dt=0:0.004:0.001",
            "--model",
            "subarray,beam",
            "--draws",
            "16",
            "--seed",
            "9",
            "--out",
            path(dir.path()),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        fs::read(dir.path().join("sweep.csv")).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn preset_writes_named_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&["preset", "fig3", "--out", path(dir.path())]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("fig3_subarray_count.csv").is_file());
    assert!(String::from_utf8_lossy(&out.stdout).contains("fig3_subarray_count.csv"));
}

#[test]
fn partition_report_lists_bounds() {
    let out = ris_sim(&["partition-report", "--t", "4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fraunhofer_distance_m = 150.0625"));
    for key in ["g1 = ", "g2 = ", "max_side = ", "subarray_count = ", "sizes_x = "] {
        assert!(text.contains(key), "missing {key}");
    }
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = ris_sim(&["preset", "fig99", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("fig3"), "valid presets are listed");

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "Q = 8\nP = -1\n").unwrap();
    let out = ris_sim(&["partition-report", "--scenario", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("`P`") && err.contains("line 2"), "{err}");

    let out = ris_sim(&["simulate", "--sweep", "nope=0:1:1", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("coincident.toml");
    // a single RIS element placed on the UAV array midpoint
    fs::write(
        &file,
        "H_0 = 20.0\n[ris]\ncenter = [0.0, 0.0, 20.0]\nM_x = 1\nM_z = 1\n",
    )
    .unwrap();
    let out = ris_sim(&[
        "simulate",
        "--scenario",
        path(&file),
        "--sweep",
        "t=0:0:1",
        "--draws",
        "2",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn io_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = ris_sim(&["preset", "fig3", "--out", path(&blocker.join("sub"))]);
    assert_eq!(out.status.code(), Some(1));

    let out = ris_sim(&["partition-report", "--scenario", path(&dir.path().join("missing.toml"))]);
    assert_eq!(out.status.code(), Some(1));
}
