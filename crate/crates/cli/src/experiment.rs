use maxent_tomo::circuit::{parse_circuit, simulate, Circuit};
use maxent_tomo::maxent::{
    fidelity, reconstruct, LagrangeSet, MeasurementRecord, ReconstructOptions, Reconstruction, Regularization,
    Target,
};
use maxent_tomo::sampler::{Backend, StreamKey};
use maxent_tomo::{Error, Result};

use crate::config::{BackendKind, ExperimentConfig};

/// One (theta, K) point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub k: usize,
    pub x11: f64,
    pub re_x1k: f64,
    pub im_x1k: f64,
    pub xkk_true: f64,
    /// NaN when the point is degenerate.
    pub xkk_pred: f64,
    pub abs_diff: f64,
    pub fidelity: f64,
    pub near_singular: bool,
    /// `x11` was below the prediction floor; no reconstruction was made.
    pub degenerate: bool,
}

/// Case A and case B reconstructions of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseAbRow {
    pub theta: f64,
    pub k: usize,
    pub xkk_a: f64,
    pub xkk_b: f64,
    pub lambda_a: Option<LagrangeSet<f64>>,
    pub lambda_b: Option<LagrangeSet<f64>>,
    /// Fidelity between the two reconstructions; NaN if either failed.
    pub fidelity_ab: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseAbReport {
    pub rows: Vec<CaseAbRow>,
}

impl CaseAbReport {
    /// `(x_KK^A, x_KK^B)` pairs.
    pub fn scatter(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.xkk_a, r.xkk_b)).collect()
    }

    pub fn median_fidelity(&self) -> f64 {
        median(self.rows.iter().map(|r| r.fidelity_ab).filter(|f| !f.is_nan()).collect())
    }
}

/// Median of the finite values; NaN for an empty list.
pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.retain(|x| !x.is_nan());
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

struct Point {
    theta: f64,
    circuit: Circuit<f64>,
    targets: Vec<Target>,
}

fn points(cfg: &ExperimentConfig) -> Result<Vec<Point>> {
    cfg.theta
        .values()
        .into_iter()
        .map(|theta| {
            let circuit = parse_circuit(&cfg.circuit_text, Some(theta))?;
            let n = 1usize << circuit.num_qubits();
            if n < 4 {
                return Err(Error::Validation("sweeps need at least two qubits".into()));
            }
            let ks = cfg.k_targets.clone().unwrap_or_else(|| (2..=n).collect());
            let targets = ks.into_iter().map(|k| Target::new(n, k)).collect::<Result<_>>()?;
            Ok(Point {
                theta,
                circuit,
                targets,
            })
        })
        .collect()
}

/// Streams of point `p`: 256 consecutive streams starting at `p << 8`.
fn point_key(seed: u64, point: usize) -> StreamKey {
    StreamKey::new(seed, (point as u64) << 8)
}

fn options(cfg: &ExperimentConfig) -> ReconstructOptions {
    ReconstructOptions {
        regularization: match cfg.backend {
            BackendKind::Exact => Regularization::Boundary,
            _ => Regularization::Project,
        },
        ..Default::default()
    }
}

/// Measured record (with `xkk` from the backend) for every point, theta outer and K inner.
fn measure(cfg: &ExperimentConfig) -> Result<Vec<(f64, Circuit<f64>, MeasurementRecord<f64>)>> {
    let pts = points(cfg)?;
    let num_qubits = pts.first().map(|p| p.circuit.num_qubits()).unwrap_or(1);
    let backend: Backend<f64> = cfg.backend(num_qubits)?;
    let mut out = Vec::new();
    let mut index = 0;
    for p in pts {
        for &t in &p.targets {
            let rec = backend.record(&p.circuit, t, true, point_key(cfg.seed, index))?;
            out.push((p.theta, p.circuit.clone(), rec));
            index += 1;
        }
    }
    Ok(out)
}

fn case_a(rec: &MeasurementRecord<f64>, opts: ReconstructOptions) -> Result<Reconstruction<f64>> {
    let partial = MeasurementRecord { xkk: None, ..*rec };
    reconstruct(&partial, opts)
}

/// Sweeps theta and K, predicting `x_KK` from `(x11, x1K)` and comparing with the backend's value.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let opts = options(cfg);
    let mut rows = Vec::new();
    for (theta, circuit, rec) in measure(cfg)? {
        let xkk_true = rec.xkk.unwrap_or(f64::NAN);
        let mut row = SweepRow {
            theta,
            k: rec.target.index_k(),
            x11: rec.x11,
            re_x1k: rec.x1k.re,
            im_x1k: rec.x1k.im,
            xkk_true,
            xkk_pred: f64::NAN,
            abs_diff: f64::NAN,
            fidelity: f64::NAN,
            near_singular: true,
            degenerate: false,
        };
        match case_a(&rec, opts) {
            Ok(out) => {
                let pred = out.record.xkk.unwrap_or(f64::NAN);
                row.xkk_pred = pred;
                row.abs_diff = (xkk_true - pred).abs();
                row.fidelity = fidelity(&out.density, &simulate(&circuit).density())?;
                row.near_singular = out.near_singular;
            }
            Err(Error::Degenerate(_)) => row.degenerate = true,
            Err(e) => return Err(e),
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Runs case B (`x_KK` from the backend) and case A (`x_KK` predicted) at every point.
pub fn run_case_ab(cfg: &ExperimentConfig) -> Result<CaseAbReport> {
    let opts = options(cfg);
    let mut rows = Vec::new();
    for (theta, _, rec) in measure(cfg)? {
        rows.push(case_ab_row(theta, &rec, opts)?);
    }
    Ok(CaseAbReport { rows })
}

/// Case A/B comparison for a single complete record.
pub fn case_ab_row(theta: f64, rec: &MeasurementRecord<f64>, opts: ReconstructOptions) -> Result<CaseAbRow> {
    let a = match case_a(rec, opts) {
        Ok(a) => Some(a),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e),
    };
    let b = reconstruct(rec, opts)?;
    let fidelity_ab = match &a {
        Some(a) => fidelity(&a.density, &b.density)?,
        None => f64::NAN,
    };
    Ok(CaseAbRow {
        theta,
        k: rec.target.index_k(),
        xkk_a: a.as_ref().and_then(|a| a.record.xkk).unwrap_or(f64::NAN),
        xkk_b: rec.xkk.unwrap_or(f64::NAN),
        lambda_a: a.map(|a| a.lagrange),
        lambda_b: Some(b.lagrange),
        fidelity_ab,
    })
}
