use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;

fn bsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsq"))
        .args(args)
        .env_remove("BSQ_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// The JSON failure record on the last line of standard error.
fn failure(out: &Output) -> Value {
    let err = String::from_utf8_lossy(&out.stderr);
    let line = err.lines().last().expect("stderr has a record");
    serde_json::from_str(line).expect("record is JSON")
}

fn assert_exit(out: &Output, expected: i32) {
    assert_eq!(
        code(out),
        expected,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    if expected != 0 {
        let rec = failure(out);
        assert_eq!(rec["exit_code"], expected);
        assert_eq!(rec["status"], "error");
    }
}

/// Data rows of a grid file.
fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn write_zero_data(p: &Path) {
    let mut s = String::from("x,u0,v0\n");
    for i in 0..201 {
        s.push_str(&format!("{},0,0\n", -5.0 + 0.05 * i as f64));
    }
    fs::write(p, s).unwrap();
}

#[test]
fn soliton_profile_has_the_closed_form_peak() {
    let out = bsq(&["soliton", "--k0", "2", "--x0", "0", "--grid", "default"]);
    assert_exit(&out, 0);
    let r = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(r.len(), 6001);
    let max = r.iter().map(|row| row[2]).fold(f64::MIN, f64::max);
    assert!((max - 27.0 / 32.0).abs() < 1e-10, "max {max}");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "nsoliton",
        "--pole",
        "2,0,2.142857142857143,0.7423074889580904",
        "--pole",
        "1.9318516525781366,0.5176380902050415,1,0",
        "--grid=-10:10:201,0:1:3",
    ];
    let a = bsq(&args);
    let b = bsq(&args);
    assert_exit(&a, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_exits_cleanly() {
    assert_exit(&bsq(&["--help"]), 0);
    assert_exit(&bsq(&["scatter", "--help"]), 0);
}

#[test]
fn scatter_of_zero_data_is_reflectionless() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("zero.csv");
    write_zero_data(&data);
    let out_dir = path(&dir, "out");
    let out = bsq(&[
        "scatter",
        "--data",
        data.to_str().unwrap(),
        "--out-dir",
        &out_dir,
        "--per-decade",
        "4",
        "--arc-nodes",
        "8",
    ]);
    assert_exit(&out, 0);
    for name in ["r1.csv", "r2.csv"] {
        let r = rows(&fs::read_to_string(dir.path().join("out").join(name)).unwrap());
        assert!(!r.is_empty());
        assert!(r.iter().all(|row| row[4] == 0.0 && row[5] == 0.0), "{name}");
    }
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/scattering.json")).unwrap())
            .unwrap();
    assert_eq!(summary["poles"].as_array().unwrap().len(), 0);
    assert!(summary["existence_time_estimate"].is_null());
}

#[test]
fn roundtrip_passes_for_the_default_soliton() {
    let out = bsq(&["roundtrip", "--k0", "2"]);
    assert_exit(&out, 0);
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["pass"], true);
}

#[test]
fn emitted_initial_data_scatters_back_to_its_pole() {
    let dir = TempDir::new().unwrap();
    let init = path(&dir, "init.csv");
    assert_exit(
        &bsq(&[
            "soliton",
            "--k0",
            "2",
            "--grid=-40:40:8001",
            "--emit-initial",
            "-o",
            &init,
        ]),
        0,
    );
    let out_dir = path(&dir, "sc");
    let out = bsq(&[
        "scatter",
        "--data",
        &init,
        "--out-dir",
        &out_dir,
        "--per-decade",
        "8",
        "--arc-nodes",
        "16",
        "--search",
        "1.5,2.5,-0.3,0.3",
    ]);
    assert_exit(&out, 0);
    let s: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sc/scattering.json")).unwrap())
            .unwrap();
    let poles = s["poles"].as_array().unwrap();
    assert_eq!(poles.len(), 1);
    let k = poles[0]["k0"][0].as_f64().unwrap();
    assert!((k - 2.0).abs() < 1e-3);
}

#[test]
fn verify_accepts_an_exact_field() {
    let dir = TempDir::new().unwrap();
    let field = path(&dir, "f.csv");
    assert_exit(
        &bsq(&[
            "soliton",
            "--k0",
            "2",
            "--grid=-30:30:6001,0:0.004:5",
            "-o",
            &field,
        ]),
        0,
    );
    let out = bsq(&["verify", "--field", &field]);
    assert_exit(&out, 0);
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(rep["pde"]["max_abs_residual"].as_f64().unwrap() < 1e-4);
}

#[test]
fn jumps_have_unit_determinant() {
    let dir = TempDir::new().unwrap();
    let regions = path(&dir, "regions.csv");
    let out = bsq(&[
        "jumps",
        "--samples",
        "8",
        "--x",
        "0.5",
        "--t",
        "0.2",
        "--regions",
        &regions,
        "--region-grid",
        "2,21",
    ]);
    assert_exit(&out, 0);
    let r = rows(&String::from_utf8(out.stdout).unwrap());
    assert!(r.iter().all(|row| row[4] < 1e-10));
    assert_eq!(rows(&fs::read_to_string(&regions).unwrap()).len(), 441);
}

#[test]
fn run_executes_a_job_file() {
    let dir = TempDir::new().unwrap();
    let job = dir.path().join("job.json");
    let out_file = path(&dir, "s.csv");
    fs::write(
        &job,
        format!(r#"{{"command": "soliton", "parameters": {{"k0": 2, "x0": 0, "grid": "-10:10:201", "output": {out_file:?}}}}}"#),
    )
    .unwrap();
    assert_exit(&bsq(&["run", "--config", job.to_str().unwrap()]), 0);
    assert_eq!(rows(&fs::read_to_string(&out_file).unwrap()).len(), 201);
}

// Exit code 1: configuration and IO errors.

#[test]
fn config_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let job = dir.path().join("job.json");
    fs::write(
        &job,
        r#"{"command": "soliton", "parameters": {"k0": 2, "bogus": 1}}"#,
    )
    .unwrap();
    let bad_top = dir.path().join("top.json");
    fs::write(
        &bad_top,
        r#"{"command": "soliton", "parameters": {}, "extra": true}"#,
    )
    .unwrap();
    let nonuniform = dir.path().join("nonuniform.csv");
    fs::write(
        &nonuniform,
        "x,u0,v0\n0,0,0\n1,0,0\n2,0,0\n3.5,0,0\n4,0,0\n5,0,0\n6,0,0\n7,0,0\n8,0,0\n",
    )
    .unwrap();
    let out_dir = path(&dir, "o");
    let cases: Vec<Vec<&str>> = vec![
        vec!["frobnicate"],
        vec!["soliton"],
        vec!["soliton", "--k0", "0.5"],
        vec!["soliton", "--k0", "2", "--grid", "1:0:10"],
        vec!["soliton", "--k0", "2", "--emit-initial"],
        vec![
            "scatter",
            "--data",
            "/nonexistent/data.csv",
            "--out-dir",
            &out_dir,
        ],
        vec![
            "scatter",
            "--data",
            nonuniform.to_str().unwrap(),
            "--out-dir",
            &out_dir,
        ],
        vec!["run", "--config", job.to_str().unwrap()],
        vec!["run", "--config", bad_top.to_str().unwrap()],
        vec!["run", "--config", "/nonexistent/job.json"],
        vec!["verify", "--field", "/nonexistent/field.csv"],
    ];
    for args in cases {
        let out = bsq(&args);
        assert_eq!(
            code(&out),
            1,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(failure(&out)["kind"], "config", "{args:?}");
    }
}

#[test]
fn invalid_thread_count_is_a_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_bsq"))
        .args(["soliton", "--k0", "2"])
        .env("BSQ_THREADS", "zero")
        .output()
        .unwrap();
    assert_exit(&out, 1);
    let out = Command::new(env!("CARGO_BIN_EXE_bsq"))
        .args(["soliton", "--k0", "2", "--grid=-1:1:11"])
        .env("BSQ_THREADS", "2")
        .output()
        .unwrap();
    assert_exit(&out, 0);
}

// Exit code 2: numerical failures.

#[test]
fn numerical_failures_exit_with_two() {
    // The exact box data overflow for a box this wide.
    let out = bsq(&["jumps", "--box=-40,40,0.5", "--samples", "4"]);
    assert_exit(&out, 2);
    assert_eq!(failure(&out)["kind"], "numeric");
}

// Exit code 3: validation failures.

#[test]
fn validation_failures_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let field = path(&dir, "f.csv");
    assert_exit(
        &bsq(&[
            "soliton",
            "--k0",
            "2",
            "--grid=-30:30:6001,0:0.004:5",
            "-o",
            &field,
        ]),
        0,
    );
    let text = fs::read_to_string(&field).unwrap();
    // Swap the sign of v: u and v no longer satisfy the system.
    let mut bad = String::new();
    for line in text.lines() {
        let mut parts: Vec<String> = line.split(',').map(str::to_string).collect();
        if parts.len() == 4 && !line.starts_with('x') && !line.starts_with('#') {
            let v: f64 = parts[3].parse().unwrap();
            parts[3] = format!("{:.16e}", -v);
        }
        bad.push_str(&parts.join(","));
        bad.push('\n');
    }
    let bad_path = path(&dir, "bad.csv");
    fs::write(&bad_path, bad).unwrap();

    let cases: Vec<Vec<&str>> = vec![
        vec![
            "soliton",
            "--k0",
            "2",
            "--c=-2.142857142857143,-0.7423074889580904",
        ],
        vec![
            "nsoliton",
            "--pole",
            "1.9318516525781366,-0.5176380902050415,1,0",
        ],
        vec!["breather", "--k0=1.9318516525781366,-0.5176380902050415"],
        vec!["roundtrip", "--k0", "2", "--k-tol", "1e-30"],
        vec!["verify", "--field", &bad_path, "--check", "system"],
    ];
    for args in cases {
        let out = bsq(&args);
        assert_eq!(
            code(&out),
            3,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(failure(&out)["kind"], "validation", "{args:?}");
    }
}
