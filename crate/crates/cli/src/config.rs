use std::path::{Path, PathBuf};

use maxent_tomo::circuit::eval_angle;
use maxent_tomo::maxent::GridAxis;
use maxent_tomo::sampler::{build_calibration, build_calibration_empirical, Backend, ReadoutNoise, StreamKey};
use serde::Deserialize;

use crate::CliError;

/// Angle given either as a number or as an expression such as `"2*pi"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Value(f64),
    Expr(String),
}

impl Angle {
    pub fn radians(&self) -> Result<f64, String> {
        match self {
            Angle::Value(v) => Ok(*v),
            Angle::Expr(e) => eval_angle(e, None),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Exact,
    Shots,
    Noisy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CalibrationKind {
    /// Tensor product of the configured flip rates.
    #[default]
    Model,
    /// Estimated by sampling every basis state with `calibration_shots` shots.
    Empirical,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    circuit: PathBuf,
    #[serde(default = "zero_angle")]
    theta_start: Angle,
    #[serde(default = "zero_angle")]
    theta_stop: Angle,
    #[serde(default = "one")]
    theta_steps: usize,
    k_targets: Option<Vec<usize>>,
    backend: BackendKind,
    shots: Option<u64>,
    #[serde(default = "default_p01")]
    p01: f64,
    #[serde(default = "default_p10")]
    p10: f64,
    #[serde(default)]
    mitigate: bool,
    #[serde(default)]
    calibration: CalibrationKind,
    calibration_shots: Option<u64>,
    #[serde(default)]
    seed: u64,
    output: Option<PathBuf>,
}

fn zero_angle() -> Angle {
    Angle::Value(0.0)
}

fn one() -> usize {
    1
}

// Illustrative readout flip rates; not calibrated to any device.
fn default_p01() -> f64 {
    0.02
}

fn default_p10() -> f64 {
    0.04
}

/// A sweep experiment as read from its TOML file.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Circuit source text.
    pub circuit_text: String,
    pub circuit_path: PathBuf,
    pub theta: GridAxis<f64>,
    /// `None` means every K in `2..=N`.
    pub k_targets: Option<Vec<usize>>,
    pub backend: BackendKind,
    pub shots: Option<u64>,
    pub p01: f64,
    pub p10: f64,
    pub mitigate: bool,
    pub calibration: CalibrationKind,
    pub calibration_shots: Option<u64>,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Reads a config; relative paths resolve against the config's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut cfg = Self::parse(&text, base, path)?;
        let circuit_path = base.join(&cfg.circuit_path);
        cfg.circuit_text = std::fs::read_to_string(&circuit_path).map_err(|e| CliError::io(&circuit_path, e))?;
        cfg.circuit_path = circuit_path;
        Ok(cfg)
    }

    /// Parses config text without touching the file system; `circuit_text` is left empty.
    pub fn parse(text: &str, base: &Path, origin: &Path) -> Result<Self, CliError> {
        let raw: RawExperiment = toml::from_str(text).map_err(|e| CliError::config(origin, e.message()))?;
        let bad = |m: String| CliError::config(origin, m);
        let theta = GridAxis::new(
            raw.theta_start.radians().map_err(bad)?,
            raw.theta_stop.radians().map_err(bad)?,
            raw.theta_steps,
        )
        .map_err(|e| CliError::config(origin, e.to_string()))?;
        if raw.backend != BackendKind::Exact && raw.shots.unwrap_or(0) == 0 {
            return Err(CliError::config(origin, "`shots` (at least 1) is required unless backend = \"exact\""));
        }
        if raw.mitigate && raw.backend != BackendKind::Noisy {
            return Err(CliError::config(origin, "`mitigate` needs backend = \"noisy\""));
        }
        if let Some(ks) = &raw.k_targets {
            if ks.is_empty() {
                return Err(CliError::config(origin, "`k_targets` is empty"));
            }
        }
        Ok(ExperimentConfig {
            circuit_text: String::new(),
            circuit_path: raw.circuit,
            theta,
            k_targets: raw.k_targets,
            backend: raw.backend,
            shots: raw.shots,
            p01: raw.p01,
            p10: raw.p10,
            mitigate: raw.mitigate,
            calibration: raw.calibration,
            calibration_shots: raw.calibration_shots,
            seed: raw.seed,
            output_path: raw.output.map(|o| base.join(o)),
        })
    }

    /// Config for an in-memory circuit.
    pub fn for_circuit(circuit_text: impl Into<String>, theta: GridAxis<f64>, backend: BackendKind) -> Self {
        ExperimentConfig {
            circuit_text: circuit_text.into(),
            circuit_path: PathBuf::new(),
            theta,
            k_targets: None,
            backend,
            shots: None,
            p01: default_p01(),
            p10: default_p10(),
            mitigate: false,
            calibration: CalibrationKind::Model,
            calibration_shots: None,
            seed: 0,
            output_path: None,
        }
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = Some(shots);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// The measurement backend for `num_qubits` qubits.
    pub fn backend(&self, num_qubits: usize) -> maxent_tomo::Result<Backend<f64>> {
        let shots = self.shots.unwrap_or(0);
        Ok(match self.backend {
            BackendKind::Exact => Backend::exact(),
            BackendKind::Shots => Backend::with_shots(shots),
            BackendKind::Noisy => {
                let noise = ReadoutNoise::uniform(num_qubits, self.p01, self.p10)?;
                let cal = if !self.mitigate {
                    None
                } else {
                    Some(match self.calibration {
                        CalibrationKind::Model => build_calibration(&noise),
                        CalibrationKind::Empirical => build_calibration_empirical(
                            &noise,
                            self.calibration_shots.unwrap_or(shots),
                            // Stream block after all sweep points.
                            StreamKey::new(self.seed, u64::MAX << 32),
                        )?,
                    })
                };
                let b = Backend::with_shots(shots).noisy(noise);
                match cal {
                    Some(c) => b.with_calibration(c),
                    None => b,
                }
            }
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHeatmap {
    #[serde(default = "four")]
    n: usize,
    #[serde(default = "two")]
    k: usize,
    lam11_start: f64,
    lam11_stop: f64,
    lam11_steps: usize,
    lam1k_start: f64,
    lam1k_stop: f64,
    lam1k_steps: usize,
    #[serde(default)]
    lam1k_im: f64,
    #[serde(default)]
    lamkk: f64,
    output: Option<PathBuf>,
}

fn four() -> usize {
    4
}

fn two() -> usize {
    2
}

/// Heat-map grid as read from its TOML file.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapConfig {
    pub grid: maxent_tomo::maxent::HeatmapGrid<f64>,
    pub output_path: Option<PathBuf>,
}

impl HeatmapConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, path)
    }

    pub fn parse(text: &str, base: &Path, origin: &Path) -> Result<Self, CliError> {
        let raw: RawHeatmap = toml::from_str(text).map_err(|e| CliError::config(origin, e.message()))?;
        let target = maxent_tomo::maxent::Target::new(raw.n, raw.k)?;
        Ok(HeatmapConfig {
            grid: maxent_tomo::maxent::HeatmapGrid {
                target,
                lam_11: GridAxis::new(raw.lam11_start, raw.lam11_stop, raw.lam11_steps)?,
                lam_1k_re: GridAxis::new(raw.lam1k_start, raw.lam1k_stop, raw.lam1k_steps)?,
                lam_1k_im: raw.lam1k_im,
                lam_kk: raw.lamkk,
            },
            output_path: raw.output.map(|o| base.join(o)),
        })
    }
}
