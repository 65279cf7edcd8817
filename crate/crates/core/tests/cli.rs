use std::process::{Command, Output};

fn wavetraj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavetraj"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn classify_reports_label_and_constant() {
    let out = wavetraj(&["classify", "--c0", "0.5", "--shear", "-0.54"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["theorem_label"], "Peculiar");
    assert_eq!(v["class"], "Peculiar");
    assert_eq!(v["condition_met"], true);
    assert!(v["C"].as_f64().unwrap() > 0.0);
}

#[test]
fn degenerate_start_exits_2() {
    let out = wavetraj(&["classify", "--shear", "1", "--x0", "0", "--z0", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DegeneratePhase"));
}

#[test]
fn conflicting_vorticity_flags_exit_2() {
    let out = wavetraj(&["trace", "--shear", "1", "--omega0", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = wavetraj(&["trace", "--c0", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_start_height_exits_2() {
    let out = wavetraj(&["classify", "--shear", "1", "--z0", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trace_csv_starts_at_initial_point() {
    let out = wavetraj(&[
        "trace", "--c0", "-0.5", "--shear", "0", "--t-max", "2", "--dt", "0.01",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,z,u,v"));
    assert!(lines.next().unwrap().starts_with("0,0.5,0.5,"));
    assert_eq!(text.lines().count(), 202);
}

#[test]
fn trace_writes_file() {
    let dir = std::env::temp_dir().join(format!("wavetraj-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("path.svg");
    let out = wavetraj(&[
        "trace",
        "--shear",
        "10",
        "--format",
        "svg",
        "--t-max",
        "1",
        "--dt",
        "0.01",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.contains("UndulatingRight"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn portrait_grid() {
    let dir = std::env::temp_dir().join(format!("wavetraj-portrait-{}", std::process::id()));
    let out = wavetraj(&[
        "portrait",
        "--c0-range",
        "-1:1:3",
        "--shear-range",
        "-2:2:4",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.join("portrait.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.split(',').count() == 5));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn portrait_rejects_oversized_grid() {
    let out = wavetraj(&[
        "portrait",
        "--c0-range",
        "0:1:200",
        "--shear-range",
        "0:1:200",
        "--out",
        "/nonexistent",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = wavetraj(&["selftest"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 failed"));
}
