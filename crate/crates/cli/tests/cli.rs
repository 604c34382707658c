use std::f64::consts::PI;
use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn fermi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Parses CSV output into (header, rows of raw fields).
fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(out));
    let text = stdout(out);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(out));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn col(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn transform_to_rw_milne() {
    let (h, rows) = csv_rows(&fermi(&[
        "transform",
        "to-rw",
        "--model",
        "milne",
        "--tau",
        "2",
        "--rho",
        "1.7320508",
    ]));
    let t: f64 = rows[0][col(&h, "t")].parse().unwrap();
    let chi: f64 = rows[0][col(&h, "chi")].parse().unwrap();
    assert!((t - 1.0).abs() < 1e-6, "{t}");
    assert!((chi - 1.316_957_9).abs() < 1e-6, "{chi}");
    assert_eq!(rows[0][col(&h, "rho_max")].parse::<f64>().unwrap(), 2.0);
}

#[test]
fn transform_to_fermi_at_the_observer() {
    let (h, rows) = csv_rows(&fermi(&[
        "transform",
        "to-fermi",
        "--model",
        "power-law",
        "--alpha",
        "1",
        "--t",
        "1",
        "--chi",
        "0",
    ]));
    assert_eq!(rows[0][col(&h, "tau")].parse::<f64>().unwrap(), 1.0);
    assert_eq!(rows[0][col(&h, "rho")].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn transforms_invert_each_other() {
    let v = json(&fermi(&[
        "transform",
        "to-rw",
        "--model",
        "matter",
        "--tau",
        "1.5",
        "--rho",
        "0.9",
        "--format",
        "json",
    ]));
    let row = &v["rows"][0];
    let (t, chi) = (row["t"].as_f64().unwrap(), row["chi"].as_f64().unwrap());
    let back = json(&fermi(&[
        "transform",
        "to-fermi",
        "--model",
        "matter",
        "--t",
        &t.to_string(),
        "--chi",
        &chi.to_string(),
        "--format",
        "json",
    ]));
    assert!((back["rows"][0]["tau"].as_f64().unwrap() - 1.5).abs() < 1e-9);
    assert!((back["rows"][0]["rho"].as_f64().unwrap() - 0.9).abs() < 1e-9);
}

#[test]
fn out_of_slice_is_a_domain_error_naming_the_radius() {
    let out = fermi(&["transform", "to-rw", "--model", "milne", "--tau", "1", "--rho", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("rho_M(tau)=1"), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert!(out.stdout.is_empty());
}

#[test]
fn domain_errors_exit_2() {
    for args in [
        &[
            "transform",
            "to-rw",
            "--model",
            "radiation",
            "--k",
            "1",
            "--tau",
            "1",
            "--rho",
            "0.5",
        ][..],
        &[
            "transform",
            "to-rw",
            "--model",
            "de-sitter",
            "--tau",
            "1",
            "--rho",
            "1.58",
        ],
        &[
            "transform",
            "to-fermi",
            "--model",
            "matter",
            "--t",
            "-1",
            "--chi",
            "0.1",
        ],
        &[
            "sweep",
            "radius",
            "--model",
            "tabulated",
            "--table",
            "/nonexistent/table.csv",
            "--from",
            "1",
            "--to",
            "2",
        ],
    ] {
        let out = fermi(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn accuracy_errors_exit_3() {
    let out = fermi(&[
        "transform",
        "to-rw",
        "--model",
        "matter",
        "--tau",
        "1",
        "--rho",
        "1",
        "--max-iter",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("accuracy"));
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["--bogus"][..],
        &["transform", "to-rw", "--tau", "1", "--rho", "0.5"],
        &[
            "transform",
            "to-rw",
            "--model",
            "power-law",
            "--tau",
            "1",
            "--rho",
            "0.5",
        ],
        &[
            "transform",
            "to-rw",
            "--model",
            "milne",
            "--alpha",
            "0.5",
            "--tau",
            "1",
            "--rho",
            "0.5",
        ],
        &[
            "transform",
            "to-rw",
            "--model",
            "milne",
            "--k",
            "0",
            "--tau",
            "1",
            "--rho",
            "0.5",
        ],
        &[
            "sweep",
            "radius",
            "--model",
            "matter",
            "--from",
            "1",
            "--to",
            "2",
            "--samples",
            "1",
        ],
        &["sweep", "metric", "--model", "matter", "--from", "0", "--to", "1"],
        &[
            "sweep",
            "geodesic",
            "--model",
            "matter",
            "--tau",
            "1",
            "--from",
            "0",
            "--to",
            "1",
            "--spacing",
            "log",
        ],
        &[
            "sweep", "radius", "--model", "matter", "--from", "1", "--to", "2", "--format", "xml",
        ],
        &["verify", "all", "--root-tol", "-1"],
    ] {
        let out = fermi(args);
        assert_eq!(out.status.code(), Some(64), "{args:?}: {}", stderr(&out));
    }
    assert_eq!(fermi(&["--help"]).status.code(), Some(0));
}

#[test]
fn radiation_radius_sweep_is_linear_in_tau() {
    let v = json(&fermi(&[
        "sweep",
        "radius",
        "--model",
        "radiation",
        "--from",
        "1",
        "--to",
        "10",
        "--samples",
        "10",
        "--format",
        "json",
    ]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for r in rows {
        let tau = r["tau"].as_f64().unwrap();
        assert!((r["rho_max"].as_f64().unwrap() - 0.5 * PI * tau).abs() < 1e-8);
        assert!(r["error"].is_null());
    }
    let names: Vec<&str> = v["schema"]["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["tau", "rho_max", "hubble_radius", "error"]);
    assert_eq!(v["model"]["family"], "radiation");
}

#[test]
fn milne_geodesic_sweep_matches_closed_form() {
    let (h, rows) = csv_rows(&fermi(&[
        "sweep",
        "geodesic",
        "--model",
        "milne",
        "--tau",
        "1",
        "--from",
        "1",
        "--to",
        "100",
        "--samples",
        "25",
        "--spacing",
        "log",
    ]));
    assert_eq!(rows.len(), 25);
    for r in rows {
        let s: f64 = r[col(&h, "sigma")].parse().unwrap();
        let t: f64 = r[col(&h, "t")].parse().unwrap();
        assert!((t - 1.0 / s.sqrt()).abs() < 1e-12, "{s}");
    }
}

#[test]
fn matter_velocity_sweep_records_horizon_errors_and_stays_monotone() {
    let (h, rows) = csv_rows(&fermi(&[
        "sweep",
        "velocity",
        "--model",
        "matter",
        "--tau",
        "1",
        "--from",
        "0",
        "--to",
        "20",
        "--samples",
        "50",
    ]));
    assert_eq!(rows.len(), 50);
    let (v_col, e_col) = (col(&h, "v_fermi"), col(&h, "error"));
    let ok: Vec<f64> = rows
        .iter()
        .filter(|r| r[e_col].is_empty())
        .map(|r| r[v_col].parse().unwrap())
        .collect();
    let failed: Vec<&Vec<String>> = rows.iter().filter(|r| !r[e_col].is_empty()).collect();
    // chi0 beyond about 3.93 tau^(1/3) never meets the slice
    assert!(ok.len() >= 9 && !failed.is_empty());
    assert!(failed
        .iter()
        .all(|r| r[e_col].contains("horizon") && r[v_col].is_empty()));
    assert!(ok.windows(2).all(|w| w[1] >= w[0]));
    assert!(ok.iter().all(|&v| v < 1.31103));

    // late enough that the whole range is inside the horizon
    let (h, rows) = csv_rows(&fermi(&[
        "sweep",
        "velocity",
        "--model",
        "matter",
        "--tau",
        "1000",
        "--from",
        "0",
        "--to",
        "20",
        "--samples",
        "50",
    ]));
    let v: Vec<f64> = rows.iter().map(|r| r[col(&h, "v_fermi")].parse().unwrap()).collect();
    assert!(v.windows(2).all(|w| w[1] >= w[0]));
    assert!(v[49] < 1.31103 && v[49] > 1.1);
}

#[test]
fn metric_sweep_has_unit_radial_component() {
    let (h, rows) = csv_rows(&fermi(&[
        "sweep",
        "metric",
        "--model",
        "de-sitter",
        "--h0",
        "2",
        "--tau",
        "3",
        "--from",
        "0",
        "--to",
        "0.7",
        "--samples",
        "8",
    ]));
    for r in rows {
        let rho: f64 = r[col(&h, "rho")].parse().unwrap();
        let g: f64 = r[col(&h, "g_tau_tau")].parse().unwrap();
        assert_eq!(r[col(&h, "g_rho_rho")].parse::<f64>().unwrap(), 1.0);
        assert!((g + (2.0 * rho).cos().powi(2)).abs() < 1e-8);
    }
}

#[test]
fn output_is_deterministic_and_file_matches_stdout() {
    let args = [
        "sweep",
        "velocity",
        "--model",
        "radiation",
        "--tau",
        "2",
        "--from",
        "0",
        "--to",
        "3",
        "--samples",
        "64",
    ];
    let a = fermi(&args);
    let b = fermi(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains(&b'\r'));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let c = fermi(&with_file);
    assert_eq!(c.status.code(), Some(0));
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn csv_numbers_round_trip() {
    let (h, rows) = csv_rows(&fermi(&[
        "sweep",
        "radius",
        "--model",
        "radiation",
        "--from",
        "0.1",
        "--to",
        "0.3",
        "--samples",
        "3",
    ]));
    let field = &rows[0][col(&h, "tau")];
    assert_eq!(field, "1.0000000000000001e-1");
    assert_eq!(field.parse::<f64>().unwrap(), 0.1);
}

#[test]
fn meta_adds_provenance_only_on_request() {
    let base = [
        "sweep",
        "radius",
        "--model",
        "matter",
        "--from",
        "1",
        "--to",
        "2",
        "--samples",
        "2",
    ];
    assert!(!stdout(&fermi(&base)).contains('#'));
    let mut with_meta = base.to_vec();
    with_meta.push("--meta");
    let text = stdout(&fermi(&with_meta));
    assert!(text.starts_with("# generator: fermi "));
    assert!(text.contains("# model: "));
    let v = json(&fermi(&[&with_meta[..], &["--format", "json"]].concat()));
    assert!(v["meta"]["generator"].as_str().unwrap().starts_with("fermi"));
}

#[test]
fn verify_all_reports_named_checks() {
    let v = json(&fermi(&["verify", "all", "--format", "json"]));
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.len() >= 12);
    let mut names: Vec<String> = rows
        .iter()
        .map(|r| format!("{}/{}/{}", r["suite"], r["check"], r["model"]))
        .collect();
    names.dedup();
    assert_eq!(names.len(), rows.len());
    for r in rows {
        assert_eq!(r["status"], "PASS", "{r}");
        assert!(r["max_residual"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap());
    }
    for suite in ["closed-forms", "ode-oracle", "invariants"] {
        assert!(rows.iter().any(|r| r["suite"] == suite));
    }
}

#[test]
fn verify_closed_forms_residuals_are_small() {
    let v = json(&fermi(&["verify", "closed-forms", "--format", "json"]));
    for r in v["rows"].as_array().unwrap() {
        let check = r["check"].as_str().unwrap();
        let res = r["max_residual"].as_f64().unwrap();
        // the two asymptotic checks compare against rounded or large-sigma limits
        if !matches!(check, "radiation-speed-limit" | "matter-speed-supremum") {
            assert!(res < 1e-8, "{check}: {res}");
        }
    }
}

#[test]
fn verify_ode_oracle_for_radiation() {
    let v = json(&fermi(&[
        "verify",
        "ode-oracle",
        "--model",
        "power-law",
        "--alpha",
        "0.5",
        "--format",
        "json",
    ]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0]["max_residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["model"]["alpha"], 0.5);
}

#[test]
fn verify_failure_exits_1() {
    // a one-panel quadrature budget cannot meet the tolerances
    let out = fermi(&["verify", "closed-forms", "--max-iter", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains(",FAIL,"));
}

#[test]
fn tabulated_matter_table_tracks_the_analytic_radius() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("matter.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "t,a").unwrap();
    for i in 0..400 {
        let t = 1e-3 * 4e3f64.powf(i as f64 / 399.0);
        writeln!(f, "{t},{}", t.powf(2.0 / 3.0)).unwrap();
    }
    drop(f);
    let v = json(&fermi(&[
        "sweep",
        "radius",
        "--model",
        "tabulated",
        "--table",
        path.to_str().unwrap(),
        "--from",
        "0.5",
        "--to",
        "2",
        "--samples",
        "4",
        "--format",
        "json",
    ]));
    // default budget scales with the table length
    assert_eq!(v["model"]["numerics"]["max_iter"], 6400);
    let sup = 1.311_028_777_146_06;
    for r in v["rows"].as_array().unwrap() {
        assert!(r["error"].is_null(), "{r}");
        let tau = r["tau"].as_f64().unwrap();
        assert!((r["rho_max"].as_f64().unwrap() - sup * tau).abs() < 1e-3 * tau, "{r}");
    }
}
