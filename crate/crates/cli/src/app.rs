use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use maxent_tomo::maxent::{heatmap_scan, reconstruct, MeasurementRecord, ReconstructOptions};
use maxent_tomo::pauli::decompose_ketbra;

use crate::config::{ExperimentConfig, HeatmapConfig};
use crate::experiment::{run_case_ab, run_sweep};
use crate::output::{case_ab_csv, format_sig, heatmap_csv, sweep_csv};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "maxent-tomo", version, about = "Maximal-entropy state reconstruction from partial measurements")]
pub struct Cli {
    /// Override the seed given in a config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write results here instead of the config's output path or stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format for `reconstruct` and `decompose`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complete a record file, solve for the multipliers and print the density matrix.
    Reconstruct { record: PathBuf },
    /// Run a theta/K sweep and write one CSV row per point.
    Sweep { config: PathBuf },
    /// Compare case A (predicted x_KK) with case B (measured x_KK).
    Caseab { config: PathBuf },
    /// Evaluate the forward map on a grid of multipliers.
    Heatmap { config: PathBuf },
    /// Print the Pauli expansion of |i><j| on n qubits.
    Decompose { i: usize, j: usize, n: usize },
}

/// Runs a parsed command line, writing reports to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Reconstruct { record } => {
            let text = std::fs::read_to_string(record).map_err(|e| CliError::io(record, e))?;
            let rec = MeasurementRecord::<f64>::from_text(&text)?;
            let out = reconstruct(&rec, ReconstructOptions::default())?;
            let report = match cli.format {
                Format::Text => reconstruction_text(&out),
                Format::Csv => reconstruction_csv(&out),
            };
            deliver(&report, cli.out.as_deref(), stdout)
        }
        Command::Sweep { config } => {
            let cfg = load_experiment(config, cli.seed)?;
            let csv = sweep_csv(&run_sweep(&cfg)?)?;
            deliver(&csv, cli.out.as_deref().or(cfg.output_path.as_deref()), stdout)
        }
        Command::Caseab { config } => {
            let cfg = load_experiment(config, cli.seed)?;
            let csv = case_ab_csv(&run_case_ab(&cfg)?);
            deliver(&csv, cli.out.as_deref(), stdout)
        }
        Command::Heatmap { config } => {
            let cfg = HeatmapConfig::load(config)?;
            let csv = heatmap_csv(&heatmap_scan(&cfg.grid)?);
            deliver(&csv, cli.out.as_deref().or(cfg.output_path.as_deref()), stdout)
        }
        Command::Decompose { i, j, n } => {
            let d = decompose_ketbra(*i, *j, *n)?;
            let report = match cli.format {
                Format::Text => d.to_string(),
                Format::Csv => {
                    let mut s = String::from("pauli,re,im\n");
                    for (p, c) in d.terms() {
                        let z = c.to_complex::<f64>();
                        s.push_str(&format!("{p},{},{}\n", format_sig(z.re), format_sig(z.im)));
                    }
                    s
                }
            };
            deliver(&report, cli.out.as_deref(), stdout)
        }
    }
}

fn load_experiment(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn deliver(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn reconstruction_text(out: &maxent_tomo::maxent::Reconstruction<f64>) -> String {
    let l = &out.lagrange;
    let mut s = String::new();
    s.push_str("# record\n");
    s.push_str(&out.record.to_text());
    s.push_str(&format!(
        "# multipliers\nlam_11 = {}\nlam_1k = {}\nlam_kk = {}\n",
        format_sig(l.lam_11),
        complex_text(l.lam_1k),
        format_sig(l.lam_kk)
    ));
    let flags: Vec<&str> = [
        (out.near_singular, "near_singular"),
        (out.regularized, "regularized"),
        (out.prediction_clamped, "prediction_clamped"),
    ]
    .iter()
    .filter(|(on, _)| *on)
    .map(|(_, name)| *name)
    .collect();
    if !flags.is_empty() {
        s.push_str(&format!("# flags: {}\n", flags.join(", ")));
    }
    s.push_str("# density matrix\n");
    let m = out.density.matrix();
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|j| complex_text(m[(i, j)]))
            .collect();
        s.push_str(&row.join("  "));
        s.push('\n');
    }
    s
}

fn complex_text(z: num_complex::Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", format_sig(z.re), format_sig(z.im.abs()))
}

fn reconstruction_csv(out: &maxent_tomo::maxent::Reconstruction<f64>) -> String {
    let m = out.density.matrix();
    let mut s = String::from("row,col,re,im\n");
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                i + 1,
                j + 1,
                format_sig(m[(i, j)].re),
                format_sig(m[(i, j)].im)
            ));
        }
    }
    s
}
