mod common;

use std::process::Command as Process;

use clap::Parser;
use common::{GridSpec, WaveTetrad};
use gaugeframe::geometry::{structure_coefficients, TetradJet};
use gaugeframe_cli::{execute, load_config, Cli};
use serde_json::{json, Value};

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_gaugeframe"))
}

/// Runs a field subcommand through the library and parses the JSON report.
fn report(args: &[&str], config: &Value, h_scale: f64) -> Value {
    let path = common::write_temp(&format!("{}.json", args.join("-")), config);
    let cli = Cli::parse_from(std::iter::once("gaugeframe").chain(args.iter().copied()));
    let cfg = load_config(&path, h_scale).unwrap();
    let mut out = Vec::new();
    assert_eq!(execute(&cli, Some(&cfg), &mut out).unwrap(), 0);
    serde_json::from_slice(&out).unwrap()
}

fn quantity<'a>(rep: &'a Value, name: &str) -> impl Iterator<Item = &'a Value> + 'a {
    let name = name.to_string();
    rep["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(move |r| &r["values"][&name])
}

fn wave_config(grid: &GridSpec) -> Value {
    let w = WaveTetrad::fixed();
    common::config(
        grid,
        json!("u1"),
        common::couplings(1.0, 1.0, 1.0, 1.0, 1.0),
        json!({
            "tetrad": grid.sample(|x| json!(w.oprime(x))),
            "G": grid.sample(|x| json!([[0.1 * x[0], 0.0, 0.2, 0.0, x[1] * x[2], 0.0], [0.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.3, 0.0, 0.0, 0.0, x[3]]])),
            "psi": [[[0.3, -0.2]], [[0.5, 0.1]], [[-0.4, 0.6]], [[0.2, 0.25]]],
            "N": 1.0,
            "V": [1.0, 0.0, 0.0, 0.0],
        }),
    )
}

#[test]
fn verify_is_byte_stable_and_passes() {
    let a = bin().args(["verify", "--seed", "42"]).output().unwrap();
    let b = bin().args(["verify", "--seed", "42"]).output().unwrap();
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("12 of 12 suites passed"));
}

#[test]
fn verify_fails_with_exit_one_under_an_impossible_tolerance() {
    let out = bin().args(["verify", "--tolerance", "1e-300"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn non_antihermitian_generator_is_an_input_error() {
    let cfg = json!({
        "schema": 1,
        "internal_group": {"m": 1, "generators": [[[[1.0, 0.0]]]]},
    });
    let path = common::write_temp("bad-generator.json", &cfg);
    let out = bin().args(["verify", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(err.contains("antihermitian"), "{err}");
}

#[test]
fn missing_field_is_named() {
    let grid = GridSpec::cube(3, 0.1, [0.0; 4]);
    let cfg = common::config(
        &grid,
        json!("u1"),
        common::couplings(1.0, 1.0, 1.0, 1.0, 1.0),
        json!({}),
    );
    let path = common::write_temp("missing-field.json", &cfg);
    let out = bin().args(["curvature", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fields.tetrad"));
}

#[test]
fn two_point_axis_is_rejected() {
    let mut grid = GridSpec::cube(3, 0.1, [0.0; 4]);
    grid.shape[2] = 2;
    let path = common::write_temp("two-point.json", &wave_config(&grid));
    let out = bin().args(["solve-gravity", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("axis 2"));
}

#[test]
fn constant_fields_have_vanishing_derivative_outputs() {
    let grid = GridSpec::cube(3, 0.2, [0.1, -0.3, 0.2, 0.0]);
    let op = [
        [1.1, 0.2, 0.0, 0.1],
        [0.0, 0.9, 0.3, 0.0],
        [0.2, 0.0, 1.2, -0.1],
        [0.0, 0.1, 0.0, 1.0],
    ];
    let cfg = common::config(
        &grid,
        json!("u1"),
        common::couplings(1.0, 1.0, 1.0, 1.0, 1.0),
        json!({
            "tetrad": op,
            "G": vec![[0.0f64; 6]; 4],
            "psi": [[[0.3, -0.2]], [[0.5, 0.1]], [[-0.4, 0.6]], [[0.2, 0.25]]],
            "N": 1.0,
            "V": [1.0, 0.0, 0.0, 0.0],
        }),
    );
    let grav = report(&["solve-gravity"], &cfg, 1.0);
    let curv = report(&["curvature"], &cfg, 1.0);
    assert_eq!(grav["records"].as_array().unwrap().len(), 81);
    for name in ["structure_coefficients", "jacobi_residual"] {
        assert!(quantity(&grav, name).all(|v| common::max_abs(v) == 0.0), "{name}");
    }
    for name in ["F_G", "ricci", "scalar_curvature", "torsion", "structure_coefficients"] {
        assert!(quantity(&curv, name).all(|v| common::max_abs(v) == 0.0), "{name}");
    }
}

/// Worst structure-coefficient error against the analytic jet.
fn structure_error(grid: &GridSpec, sample_h: f64, h_scale: f64) -> f64 {
    let w = WaveTetrad::fixed();
    let sampled = GridSpec {
        spacing: [sample_h; 4],
        ..*grid
    };
    let mut cfg = wave_config(&sampled);
    cfg["grid"] = grid.grid_json();
    let rep = report(&["solve-gravity"], &cfg, h_scale);
    sampled
        .points()
        .iter()
        .zip(quantity(&rep, "structure_coefficients"))
        .map(|(x, got)| {
            let jet = TetradJet::from_oprime_jet(w.oprime(x), w.d_oprime(x)).unwrap();
            let exact = structure_coefficients(&jet);
            let got = common::leaves(got);
            (0..6)
                .flat_map(|a| (0..4).map(move |r| (a, r)))
                .map(|(a, r)| (got[4 * a + r] - exact.c[a][r]).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

#[test]
fn structure_coefficients_converge_at_second_order() {
    let grid = GridSpec::cube(5, 0.1, [0.2, -0.1, 0.3, 0.0]);
    let coarse = structure_error(&grid, 0.1, 1.0);
    // Same declared grid, sampled at half the spacing, read with --h-scale 0.5.
    let fine = structure_error(&grid, 0.05, 0.5);
    assert!(coarse / fine >= 3.5, "{coarse} {fine}");
}

#[test]
fn gauss_law_residual_is_small_for_uniform_density() {
    let mut grid = GridSpec::cube(3, 1e-2, [0.0, 0.4, 0.0, 0.0]);
    grid.shape[1] = 9;
    let rep = report(&["em"], &common::gauss_config(&grid, 0.0), 1.0);
    assert!(rep["maxima"]["source_residual"].as_f64().unwrap() <= 1e-6);
    assert!(quantity(&rep, "mu0").all(|v| (v.as_f64().unwrap() - 1.3 / 1.6).abs() <= 1e-15));
}

#[test]
fn gauss_law_residual_converges_for_varying_density() {
    let err = |h: f64| {
        let mut grid = GridSpec::cube(3, h, [0.0, 0.4, 0.0, 0.0]);
        grid.shape[1] = (0.4 / h).round() as usize + 1;
        let rep = report(&["em"], &common::gauss_config(&grid, 0.5), 1.0);
        rep["maxima"]["source_residual"].as_f64().unwrap()
    };
    let (coarse, fine) = (err(0.05), err(0.025));
    assert!(coarse > 0.0 && coarse / fine >= 3.5, "{coarse} {fine}");
}

#[test]
fn parallel_and_serial_sweeps_agree() {
    let grid = GridSpec::cube(4, 0.1, [0.0; 4]);
    let cfg = wave_config(&grid);
    let path = common::write_temp("parallel.json", &cfg);
    let cli = Cli::parse_from(["gaugeframe", "curvature", "--format", "csv"]);
    let loaded = load_config(&path, 1.0).unwrap();
    let run = || {
        let mut out = Vec::new();
        execute(&cli, Some(&loaded), &mut out).unwrap();
        out
    };
    let parallel = run();
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(run);
    assert_eq!(parallel, serial);
    assert!(!parallel.is_empty());
}

#[test]
fn csv_output_has_a_header_and_one_row_per_point() {
    let grid = GridSpec::cube(3, 0.1, [0.0; 4]);
    let path = common::write_temp("csv.json", &wave_config(&grid));
    let out = bin()
        .args(["solve-gravity", "--format", "csv", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 82);
    assert!(lines[0].starts_with("i0,i1,i2,i3,x0,x1,x2,x3,"));
    let width = lines[0].split(',').count();
    assert!(lines.iter().all(|l| l.split(',').count() == width));
}
