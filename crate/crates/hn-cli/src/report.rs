//! Report and file emission.
//!
//! All reports are built as complete strings before anything is written, so
//! repeated invocations are byte-identical and files never contain partial
//! output: file writes go to a sibling temp file first and are renamed into
//! place on success.

use std::fs;
use std::path::Path;

use hn_core::prob::{distribution_with, sample_walk, tail_table_with, ProbConfig};
use hn_core::rational::decimal_string;
use hn_core::tensor::tensor_report_with;
use hn_core::{HNData, HNPolygon, Rational};

use crate::CliError;

/// Significant digits for decimal renderings of exact rationals.
const DECIMAL_DIGITS: usize = 20;

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(".tmp");
    let tmp = Path::new(&tmp_name);
    let io_err = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    fs::write(tmp, contents).map_err(io_err)?;
    fs::rename(tmp, path).map_err(io_err)
}

fn comment_lines(warnings: &[String]) -> String {
    warnings
        .iter()
        .map(|w| format!("# warning: {w}\n"))
        .collect()
}

fn join<T: ToString>(values: impl IntoIterator<Item = T>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn float_cell(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v}"),
        None => "n/a".to_string(),
    }
}

/// Plain-text report of the HN data and everything derived from it.
pub fn analyze(data: &HNData, warnings: &[String]) -> String {
    let derived = data.derive();
    let mut out = comment_lines(warnings);
    out.push_str(&format!("slopes: {}\n", join(data.slopes())));
    out.push_str(&format!("ranks: {}\n", join(data.ranks())));
    out.push_str(&format!("degrees: {}\n", join(&derived.degrees)));
    out.push_str(&format!("total_rank: {}\n", derived.total_rank));
    out.push_str(&format!("total_degree: {}\n", derived.total_degree));
    out.push_str(&format!(
        "probabilities: {}\n",
        join(&derived.probabilities)
    ));
    out.push_str(&format!("mean: {}\n", derived.mean));
    out.push_str(&format!("variance: {}\n", derived.variance));
    out.push_str(&format!(
        "positive_degree: {}\n",
        derived.is_positive_degree()
    ));
    out
}

/// CSV table of exact tails against the normal approximation and the
/// Chebyshev lower bound, one row per requested walk length.
pub fn prob_csv(
    data: &HNData,
    z: &Rational,
    ms: &[u32],
    mc_samples: Option<u64>,
    seed: u64,
    config: &ProbConfig,
    warnings: &[String],
) -> Result<String, CliError> {
    let mut all_warnings = warnings.to_vec();
    if !data.derive().is_positive_degree() {
        all_warnings
            .push("data does not have positive degree; the tail need not converge to 1".into());
    }
    let table = tail_table_with(data, z, ms, config)?;
    let mut out = comment_lines(&all_warnings);
    out.push_str("m,exact_tail,exact_tail_decimal,clt_approx,chebyshev_bound,abs_error_clt");
    if mc_samples.is_some() {
        out.push_str(",mc_estimate");
    }
    out.push('\n');
    for report in &table {
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            report.m,
            report.exact_tail,
            decimal_string(&report.exact_tail, DECIMAL_DIGITS),
            float_cell(report.clt_approx),
            float_cell(report.chebyshev_bound),
            float_cell(report.abs_error_clt),
        ));
        if let Some(n) = mc_samples {
            let estimate = sample_walk(data, report.m, z, n, seed);
            out.push_str(&format!(",{}", estimate.empirical_tail));
        }
        out.push('\n');
    }
    Ok(out)
}

/// CSV table of tensor-power dimension counts; the `consistency` column
/// re-derives the exact tail through the probability path and reports `ok`
/// when the dimension ratio reproduces it exactly.
pub fn tensor_csv(
    data: &HNData,
    z: &Rational,
    ms: &[u32],
    config: &ProbConfig,
    warnings: &[String],
) -> Result<String, CliError> {
    let mut all_warnings = warnings.to_vec();
    if !data.derive().is_positive_degree() {
        all_warnings
            .push("data does not have positive degree; the ratio need not converge to 1".into());
    }
    let mut out = comment_lines(&all_warnings);
    out.push_str("m,card_S,dim_H,dim_total,ratio,ratio_decimal,consistency\n");
    for &m in ms {
        let report = tensor_report_with(data, m, z, config)?;
        let tail = distribution_with(data, m, config)?.exact_tail(z);
        let consistency = if report.ratio == tail { "ok" } else { "MISMATCH" };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            report.m,
            report.tuple_count,
            report.subspace_dim,
            report.total_dim,
            report.ratio,
            decimal_string(&report.ratio, DECIMAL_DIGITS),
            consistency,
        ));
    }
    Ok(out)
}

pub fn polygon_csv(polygon: &HNPolygon, warnings: &[String]) -> String {
    let mut out = comment_lines(warnings);
    out.push_str(&polygon.to_csv());
    out
}
