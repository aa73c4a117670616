use std::path::Path;
use std::process::{Command, Output};

fn ngqkd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ngqkd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn error_line(out: &Output) -> serde_json::Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1, "stderr: {text}");
    serde_json::from_str(lines[0]).unwrap()
}

#[test]
fn sweep_writes_one_row_per_point() {
    let out = ngqkd(&[
        "sweep", "--model", "thermal-bath", "--criteria", "security,nc,ng", "--p", "1", "--e", "0",
        "--d", "0", "--t-grid", "1e-4:1:60:log",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("model,criterion,T,mu_max,feasible\n"));
    assert!(!text.contains('\r'));
    let (_, rows) = read_csv(&text);
    assert_eq!(rows.len(), 180);

    let column = |criterion: &str| -> Vec<f64> {
        rows.iter()
            .filter(|r| r[1] == criterion)
            .map(|r| r[3].parse().unwrap())
            .collect()
    };
    let (security, nc, ng) = (column("security"), column("nc"), column("ng"));
    // Low transmittance: nonclassicality, then security, then non-Gaussianity.
    assert!(nc[0] > security[0] && security[0] > ng[0]);
    for r in &rows {
        assert_eq!(r[0], "thermal-bath");
        let mantissa = r[3].split('e').next().unwrap();
        assert_eq!(mantissa.len(), "1.00000000".len());
    }
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = ngqkd(&[
            "sweep", "--model", "noise-before", "--noise", "poisson", "--t-grid", "1e-3:1:12:log",
            "--format", "json", "--output", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(&path).unwrap()
    };
    let a = run("a.json");
    let b = run("b.json");
    assert_eq!(a, b);

    let doc: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(doc["meta"]["command"], "sweep");
    assert_eq!(doc["meta"]["model"]["noise"], "poisson");
    assert_eq!(doc["meta"]["t_grid"]["count"], 12);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 36);
    assert!(doc["rows"][0]["feasible"].is_boolean());
}

#[test]
fn mc_validation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = ngqkd(&[
            "mc-validate", "--model", "noise-before", "--noise", "poisson", "--mu", "0.1",
            "--samples", "2e5", "--seed", "7", "--output", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read_to_string(&path).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let (header, rows) = read_csv(&a);
    assert_eq!(header[0], "statistic");
    assert_eq!(rows.len(), 7);
    for row in rows {
        assert_eq!(row[6], "true");
    }
}

#[test]
fn spec_mc_example_passes() {
    let out = ngqkd(&["mc-validate", "--model", "noise-before", "--noise", "poisson", "--samples", "1e6", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&stdout(&out));
    for row in rows {
        let sigma: f64 = row[5].parse().unwrap();
        assert!(sigma <= 4.0);
    }
}

#[test]
fn point_reports_secure_non_gaussian_light() {
    let out = ngqkd(&["point", "--model", "spdc", "--nu", "1e-4", "--t", "1e-2", "--mu", "1e-6", "--e", "0", "--d", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&stdout(&out));
    let get = |name: &str| rows[0][header.iter().position(|h| h == name).unwrap()].clone();
    assert!(get("delta_i").parse::<f64>().unwrap() > 0.0);
    assert_eq!(get("secure"), "true");
    assert_eq!(get("ng"), "true");
    assert_eq!(get("nc"), "true");
}

#[test]
fn witness_tmin_and_curve() {
    let out = ngqkd(&["witness", "--p-single", "0.5", "--p-coincidence", "0.3"]);
    assert_eq!(stdout(&out), "P_S,P_C,nc,ng\n5.00000000e-1,3.00000000e-1,false,false\n");

    let out = ngqkd(&["tmin", "--p", "1", "--d", "1e-3"]);
    let (_, rows) = read_csv(&stdout(&out));
    assert_eq!(rows[0][1], "numeric");
    assert_eq!(rows[1][1], "analytic-single-photon");
    let numeric: f64 = rows[0][2].parse().unwrap();
    let analytic: f64 = rows[1][2].parse().unwrap();
    assert!((numeric / analytic - 1.0).abs() < 0.1);

    let out = ngqkd(&["ng-curve", "--points", "64"]);
    let (header, rows) = read_csv(&stdout(&out));
    assert_eq!(header, ["V", "n_of_V", "P_S", "P_C"]);
    assert_eq!(rows.len(), 64);
}

#[test]
fn invalid_configs_exit_with_one_line() {
    for args in [
        &["sweep", "--t-grid", "0:1:10:log"][..],
        &["sweep", "--t-grid", "1e-3:1:1:log"],
        &["sweep", "--t-grid", "garbage"],
        &["sweep", "--model", "spdc"],
        &["sweep", "--nu", "0.1"],
        &["point", "--model", "spdc", "--nu", "0.1", "--p", "1", "--t", "0.5"],
        &["point", "--noise", "poisson", "--t", "0.5"],
        &["point", "--t", "0.5", "--e", "2"],
        &["point", "--t", "0.5", "--mu", "-1"],
        &["mc-validate", "--samples", "lots"],
        &["frobnicate"],
    ] {
        let out = ngqkd(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = error_line(&out);
        assert_eq!(err["error"], "config", "{args:?}");
        assert!(err["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
}

#[test]
fn nothing_feasible_exits_three() {
    let out = ngqkd(&["sweep", "--criteria", "security", "--e", "0.3", "--t-grid", "0.1:1:4:linear"]);
    assert_eq!(out.status.code(), Some(3));
    let (_, rows) = read_csv(&stdout(&out));
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[4] == "false"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let out = ngqkd(&["ng-curve", "--output", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_line(&out)["error"], "io");
    assert!(!Path::new("/nonexistent-dir/x.csv").exists());
}

#[test]
fn help_exits_zero() {
    let out = ngqkd(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sweep"));
}
