use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use maxent_tomo::maxent::{GridAxis, MeasurementRecord, ReconstructOptions, Target};
use maxent_tomo_cli::config::{BackendKind, ExperimentConfig};
use maxent_tomo_cli::experiment::{case_ab_row, median, run_case_ab, run_sweep};
use maxent_tomo_cli::output::sweep_csv;
use num_complex::Complex64;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maxent-tomo"))
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn corpus(name: &str) -> String {
    std::fs::read_to_string(crate_dir().join("corpus").join(name)).unwrap()
}

fn full_axis() -> GridAxis<f64> {
    GridAxis::new(0.0, 2.0 * PI, 21).unwrap()
}

#[test]
fn bell_sweep_predicts_half() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(crate_dir().join("corpus/bell.circ"), dir.path().join("bell.circ")).unwrap();
    let cfg = write(
        dir.path(),
        "bell.toml",
        "circuit = \"bell.circ\"\nk_targets = [4]\nbackend = \"exact\"\n",
    );
    let out = run(&["sweep", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("theta,k,x11,"));
    let fields: Vec<f64> = lines[1].split(',').take(9).map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields[1], 4.0);
    assert!((fields[6] - 0.5).abs() < 1e-12, "xkk_pred {}", fields[6]);
    assert!((fields[8] - 1.0).abs() < 1e-9, "fidelity {}", fields[8]);
}

#[test]
fn empty_sweep_is_an_error() {
    assert!(sweep_csv(&[]).is_err());
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = crate_dir().join("configs/model1_shots.toml");
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&["sweep", cfg.to_str().unwrap(), "--out", p.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let c = dir.path().join("c.csv");
    run(&["sweep", cfg.to_str().unwrap(), "--seed", "8", "--out", c.to_str().unwrap()]);
    let (a, b, c) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), std::fs::read(c).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "c.circ", "qubits 2\nh 0\nfoo 1\n");
    let parse = write(d, "parse.toml", "circuit = \"c.circ\"\nbackend = \"exact\"\n");
    let unknown = write(d, "unknown.toml", "circuit = \"c.circ\"\nbackend = \"exact\"\ncolour = 1\n");
    let no_shots = write(d, "noshots.toml", "circuit = \"c.circ\"\nbackend = \"shots\"\n");
    let infeasible = write(d, "inf.toml", "n = 4\nk = 2\nx11 = 0.1\nre_x1k = 0.5\n");
    let degenerate = write(d, "deg.toml", "n = 4\nk = 2\nx11 = 0.0\nre_x1k = 0.0\n");
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["sweep", parse.to_str().unwrap()]), 2);
    assert_eq!(code(&["sweep", unknown.to_str().unwrap()]), 2);
    assert_eq!(code(&["sweep", no_shots.to_str().unwrap()]), 2);
    assert_eq!(code(&["reconstruct", infeasible.to_str().unwrap()]), 3);
    assert_eq!(code(&["reconstruct", degenerate.to_str().unwrap()]), 3);
    assert_eq!(code(&["reconstruct", d.join("missing.toml").to_str().unwrap()]), 1);
    assert_eq!(code(&["decompose", "5", "1", "2"]), 2);
}

#[test]
fn reconstruct_bell_record() {
    let out = run(&["reconstruct", crate_dir().join("configs/bell_record.toml").to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("xkk = 0.5"), "{text}");
    assert!(text.contains("# density matrix"));
}

#[test]
fn case_ab_exact_agrees() {
    for name in ["model1.circ", "model3.circ", "model8.circ"] {
        let cfg = ExperimentConfig::for_circuit(corpus(name), full_axis(), BackendKind::Exact);
        let report = run_case_ab(&cfg).unwrap();
        for row in &report.rows {
            assert!(row.fidelity_ab >= 1.0 - 1e-8, "{name} theta {} k {}: {}", row.theta, row.k, row.fidelity_ab);
            assert!((row.xkk_a - row.xkk_b).abs() < 1e-9);
        }
    }
}

#[test]
fn maximally_mixed_record() {
    let rec = MeasurementRecord::new(Target::new(4, 2).unwrap(), 0.25, Complex64::new(0.0, 0.0), Some(0.25)).unwrap();
    let row = case_ab_row(0.0, &rec, ReconstructOptions::default()).unwrap();
    let b = row.lambda_b.unwrap();
    assert!(b.lam_11.abs() < 1e-12 && b.lam_1k.norm() < 1e-12 && b.lam_kk.abs() < 1e-12);
    // Case A only sees x11 and x1K, and the pure-state prediction puts nothing in x_KK.
    assert_eq!(row.xkk_a, 0.0);
    assert!(row.fidelity_ab < 0.99);
}

// Worst seed of 20 at 8192 shots: median abs_diff below 0.009, median case A/B fidelity above 0.998.
#[test]
fn finite_shots_stay_close() {
    for name in ["model1.circ", "model2.circ", "model3.circ", "model8.circ"] {
        for seed in [1, 2, 3] {
            let cfg = ExperimentConfig::for_circuit(corpus(name), full_axis(), BackendKind::Shots)
                .with_shots(8192)
                .with_seed(seed);
            let rows = run_sweep(&cfg).unwrap();
            let d = median(rows.iter().map(|r| r.abs_diff).collect());
            assert!(d <= 0.03, "{name} seed {seed}: median abs_diff {d}");
            let f = run_case_ab(&cfg).unwrap().median_fidelity();
            assert!(f >= 0.99, "{name} seed {seed}: median fidelity {f}");
        }
    }
}

#[test]
fn corpus_keeps_population_above_floor() {
    for name in ["model1.circ", "model2.circ", "model3.circ", "model8.circ"] {
        let cfg = ExperimentConfig::for_circuit(corpus(name), full_axis(), BackendKind::Exact);
        for row in run_sweep(&cfg).unwrap() {
            assert!(row.x11 > 0.008, "{name} theta {}: x11 {}", row.theta, row.x11);
            assert!(!row.degenerate);
        }
    }
}

#[test]
fn heatmap_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("h.csv");
    let out = run(&[
        "heatmap",
        crate_dir().join("configs/heatmap.toml").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 41 * 41);
    let cols = lines[0].split(',').count();
    assert!(lines[1..].iter().all(|l| l.split(',').count() == cols));
}

#[test]
fn decompose_prints_exact_terms() {
    let out = run(&["decompose", "1", "2", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().collect::<Vec<_>>(), vec!["X +1/2", "Y +i/2"]);
}
