use std::path::Path;

use maxent_tomo::maxent::{HeatmapRow, LagrangeSet};

use crate::experiment::{CaseAbReport, SweepRow};
use crate::CliError;

pub const SWEEP_HEADER: [&str; 10] = [
    "theta",
    "k",
    "x11",
    "re_x1k",
    "im_x1k",
    "xkk_true",
    "xkk_pred",
    "abs_diff",
    "fidelity",
    "near_singular",
];

/// Formats with 12 significant digits, fixed or scientific like C's `%.12g`.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-4..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn write_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut put = |rec: &[String]| w.write_record(rec).expect("in-memory write");
    put(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for r in rows {
        put(&r);
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

/// Sweep rows as CSV text; empty input is an error.
pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    if rows.is_empty() {
        return Err(CliError::Core(maxent_tomo::Error::Validation("no rows to write".into())));
    }
    Ok(write_table(
        &SWEEP_HEADER,
        rows.iter().map(|r| {
            vec![
                format_sig(r.theta),
                r.k.to_string(),
                format_sig(r.x11),
                format_sig(r.re_x1k),
                format_sig(r.im_x1k),
                format_sig(r.xkk_true),
                format_sig(r.xkk_pred),
                format_sig(r.abs_diff),
                format_sig(r.fidelity),
                r.near_singular.to_string(),
            ]
        }),
    ))
}

/// Writes [`sweep_csv`] to `path`.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<(), CliError> {
    let text = sweep_csv(rows)?;
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn lambda_fields(ls: &Option<LagrangeSet<f64>>) -> [String; 4] {
    match ls {
        Some(l) => [
            format_sig(l.lam_11),
            format_sig(l.lam_1k.re),
            format_sig(l.lam_1k.im),
            format_sig(l.lam_kk),
        ],
        None => std::array::from_fn(|_| "nan".to_string()),
    }
}

pub fn case_ab_csv(report: &CaseAbReport) -> String {
    let header = [
        "theta", "k", "xkk_a", "xkk_b", "lam11_a", "re_lam1k_a", "im_lam1k_a", "lamkk_a", "lam11_b", "re_lam1k_b",
        "im_lam1k_b", "lamkk_b", "fidelity_ab",
    ];
    write_table(
        &header,
        report.rows.iter().map(|r| {
            let mut v = vec![format_sig(r.theta), r.k.to_string(), format_sig(r.xkk_a), format_sig(r.xkk_b)];
            v.extend(lambda_fields(&r.lambda_a));
            v.extend(lambda_fields(&r.lambda_b));
            v.push(format_sig(r.fidelity_ab));
            v
        }),
    )
}

pub fn heatmap_csv(rows: &[HeatmapRow<f64>]) -> String {
    let header = ["lam11", "re_lam1k", "im_lam1k", "x11", "re_x1k", "im_x1k"];
    write_table(
        &header,
        rows.iter().map(|r| {
            vec![
                format_sig(r.lam_11),
                format_sig(r.lam_1k.re),
                format_sig(r.lam_1k.im),
                format_sig(r.x11),
                format_sig(r.x1k.re),
                format_sig(r.x1k.im),
            ]
        }),
    )
}
