use std::process::{Command, Output};

use serde_json::Value;

fn optodrag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optodrag"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = optodrag(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header row and parsed data rows of a CSV document.
fn table(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn meta<'a>(csv: &'a str, key: &str) -> Option<&'a str> {
    csv.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["figure", "fig3", "--points", "401"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn header_records_parameters_and_convention() {
    let csv = stdout(&[
        "spectrum", "--kappa", "2e4", "--beta", "7", "--points", "11",
    ]);
    assert_eq!(meta(&csv, "kappa"), Some("2e4"));
    assert_eq!(meta(&csv, "beta"), Some("7e0"));
    assert_eq!(meta(&csv, "beta_policy"), Some("fixed"));
    assert_eq!(meta(&csv, "units"), Some("gamma-m"));
    assert_eq!(meta(&csv, "omega_probe"), Some("1e8"));
    assert!(meta(&csv, "tool").unwrap().starts_with("optodrag "));
    assert!(meta(&csv, "convention").unwrap().contains("absorption"));
}

#[test]
fn nonpositive_kappa_is_a_validation_error_naming_the_field() {
    let out = optodrag(&["spectrum", "--kappa", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "validation");
    assert!(err["messages"][0].as_str().unwrap().contains("kappa"));
}

#[test]
fn every_bad_field_is_reported() {
    let out = optodrag(&[
        "spectrum",
        "--kappa",
        "-1",
        "--gamma-m",
        "-2",
        "--points",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    let text = err["messages"].to_string();
    for field in ["kappa", "gamma_m", "points"] {
        assert!(text.contains(field), "{field} missing from {text}");
    }
}

#[test]
fn usage_errors_exit_with_validation_code() {
    assert_eq!(optodrag(&["figure", "fig9"]).status.code(), Some(1));
    assert_eq!(optodrag(&["spectrum", "--bogus"]).status.code(), Some(1));
    assert_eq!(
        optodrag(&["spectrum", "--format", "text"]).status.code(),
        Some(1)
    );
    assert_eq!(optodrag(&["--help"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = optodrag(&["poles", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "io");
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let args = ["spectrum", "--points", "21", "--format", "json"];
    let out = optodrag(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&args));
}

#[test]
fn empty_cavity_columns() {
    let csv = stdout(&["spectrum", "--beta", "0", "--kappa", "3", "--points", "41"]);
    let (header, rows) = table(&csv);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for r in &rows {
        let (x, k) = (r[col("x")], 3.0);
        let d = k * k + x * x;
        assert!((r[col("re_eps_t")] - 2.0 * k * k / d).abs() <= 1e-15);
        assert!((r[col("im_eps_t")] - 2.0 * k * x / d).abs() <= 1e-15);
        assert_eq!(r[col("at_pole")], 0.0);
    }
}

#[test]
fn csv_and_json_carry_identical_bits() {
    let args = ["spectrum", "--points", "31", "--gamma-m", "0.3"];
    let (_, rows) = table(&stdout(&args));
    let json = stdout(&[&args[..], &["--format", "json"]].concat());
    let v: Value = serde_json::from_str(&json).unwrap();
    let json_rows = v["series"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), json_rows.len());
    for (a, b) in rows.iter().zip(json_rows) {
        for (x, y) in a.iter().zip(b.as_array().unwrap()) {
            let y = y
                .as_f64()
                .unwrap_or_else(|| f64::from(u8::from(y.as_bool().unwrap())));
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn velocity_rows_are_odd() {
    let csv = stdout(&[
        "drag",
        "--length",
        "0.25",
        "--sweep-over",
        "v",
        "--v-values",
        "-3,-1.5,0,1.5,3",
    ]);
    let (header, rows) = table(&csv);
    assert_eq!(header, ["v", "dx", "singular"]);
    assert_eq!(rows.len(), 5);
    for i in 0..5 {
        assert_eq!(rows[i][1], -rows[4 - i][1]);
    }
    assert_eq!(rows[2][1], 0.0);
}

#[test]
fn fig8_has_four_mirrored_velocity_series() {
    let json = stdout(&["figure", "fig8", "--points", "201", "--format", "json"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    let series = v["series"].as_array().unwrap();
    let values: Vec<f64> = series
        .iter()
        .map(|s| s["value"].as_f64().unwrap())
        .collect();
    assert_eq!(values, [-4.0, -2.0, 2.0, 4.0]);
    let dx = |i: usize| -> Vec<f64> {
        let cols = series[i]["columns"].as_array().unwrap();
        let c = cols.iter().position(|c| c == "dx").unwrap();
        series[i]["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r[c].as_f64().unwrap())
            .collect()
    };
    for (a, b) in [(0, 3), (1, 2)] {
        let (lo, hi) = (dx(a), dx(b));
        assert!(lo.iter().zip(&hi).all(|(l, h)| *l == -*h));
    }
}

#[test]
fn poles_report() {
    let csv = stdout(&[
        "poles",
        "--kappa",
        "2",
        "--omega-m",
        "3",
        "--gamma-m",
        "0.1",
    ]);
    let (header, rows) = table(&csv);
    assert_eq!(
        header,
        ["x0", "beta0", "abs_eps_t_x0_beta0", "abs_eps_t_x0_beta"]
    );
    assert!((rows[0][0] + 0.15).abs() < 1e-15);
    assert!((rows[0][1] - 1.0).abs() < 1e-15);
    assert_eq!(rows[0][2], 0.0);
}

#[test]
fn sweep_emits_one_block_per_value() {
    let csv = stdout(&[
        "sweep", "--vary", "gamma_m", "--values", "0.5,2", "--points", "5",
    ]);
    let (header, rows) = table(&csv);
    assert_eq!(header[0], "gamma_m");
    assert_eq!(rows.len(), 10);
    assert_eq!(meta(&csv, "series.1.value"), Some("2e0"));
    // ideal beta is re-derived per series
    assert_eq!(meta(&csv, "series.0.beta"), Some("1.25e4"));
    assert_eq!(meta(&csv, "series.1.beta"), Some("5e4"));
}

#[test]
fn velocity_sweep_requires_a_length() {
    let out = optodrag(&["sweep", "--vary", "v", "--values", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selfcheck_passes() {
    let out = optodrag(&["selfcheck", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
}
