//! End-to-end checks of the binary: exit codes, determinism, and the data
//! directory override.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mineralcap"));
    cmd.env_remove("MINERALCAP_DATA");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn capacity_optimal_reports_the_reference_figures() {
    let out = run(&["capacity", "--basis", "production", "--mode", "optimal"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("NMC811"), "{text}");
    assert!(text.contains("848806"), "{text}");
    assert!(text.contains("5092836"), "{text}");
}

#[test]
fn scenarios_high_2023() {
    let out = run(&["scenarios", "--kind", "high", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let sales_row = text.lines().find(|l| l.starts_with("ev_sales")).unwrap();
    // 2023 is the second data column
    let cell: f64 = sales_row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((cell - 5_521_946.0).abs() / 5_521_946.0 < 0.001, "{cell}");
}

#[test]
fn report_table_lookup_and_unknown_id() {
    let out = run(&["report", "--table", "T5.3", "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["table_id"], "T5.3");
    assert!(json["rows"].is_array());
    assert!(json["units"].is_string());

    let out = run(&["report", "--table", "T9.9"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("T9.9"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let first = run(&["report", "--format", "json"]);
    let second = run(&["report", "--format", "json"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn diff_subcommand_passes_on_bundled_data() {
    let out = run(&["diff"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(
        text.lines().filter(|l| l.ends_with("pass")).count() >= 26,
        "{text}"
    );
}

#[test]
fn bad_data_dir_fails_with_context() {
    let out = bin()
        .args(["--data-dir", "/nonexistent", "scenarios", "--kind", "low"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("production.csv"), "{err}");
}

#[test]
fn env_var_overrides_data_dir() {
    let out = Command::new(env!("CARGO_BIN_EXE_mineralcap"))
        .env("MINERALCAP_DATA", "/nonexistent")
        .args(["scenarios", "--kind", "low"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent"));
}

#[test]
fn malformed_record_reports_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for entry in std::fs::read_dir(&data).unwrap() {
        let entry = entry.unwrap();
        if entry.path().is_file() {
            std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
        }
    }
    // corrupt one production quantity
    let path = dir.path().join("production.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("48000,", "-48000,")).unwrap();
    let out = bin()
        .args(["--data-dir", dir.path().to_str().unwrap(), "capacity"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("production.csv") && err.contains("negative"),
        "{err}"
    );
}

#[test]
fn emit_series_writes_plot_points_and_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    let out = bin()
        .args([
            "report",
            "--table",
            "T6.3",
            "--emit-series",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 13); // header + 2 series x 6 points
    assert!(text.starts_with("x,y,series\n"));

    // unknown table: nonzero exit, no partial file
    let missing = dir.path().join("missing.csv");
    let out = bin()
        .args([
            "report",
            "--table",
            "T9.9",
            "--emit-series",
            missing.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(!missing.exists());
}

#[test]
fn emissions_subcommand_single_cell() {
    let out = run(&[
        "emissions",
        "--year",
        "2027",
        "--powertrain",
        "NMC811",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let lifecycle: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((lifecycle - 26.77).abs() / 26.77 < 0.01, "{row}");

    let out = run(&["emissions", "--year", "2027", "--powertrain", "steam"]);
    assert!(!out.status.success());
}

#[test]
fn pathways_subcommands_run() {
    for mode in ["thresholds", "ramp", "hev-only", "supplement"] {
        let out = run(&["pathways", "--mode", mode, "--scenario", "medium"]);
        assert!(out.status.success(), "pathways --mode {mode}");
    }
    let out = run(&[
        "pathways",
        "--mode",
        "ramp",
        "--required",
        "200000",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let sufficient = text.lines().find(|l| l.starts_with("sufficient")).unwrap();
    assert_eq!(sufficient, "sufficient,no,no,no,no,no,yes,yes,yes,yes,yes");
}
