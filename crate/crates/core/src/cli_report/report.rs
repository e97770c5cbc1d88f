use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::fixtures::Fixture;
use crate::asymptotics::{corrected_estimate, AsymptoticError, SciNumber, DEFAULT_PRECISION};
use crate::problem_model::ProblemSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub alpha: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub degree: u32,
    pub estimate: SciNumber,
    pub exact: Option<String>,
    pub source: Option<String>,
    /// `(exact - estimate) / estimate`
    pub rel_residual: Option<f64>,
    pub scaled_residual: Option<f64>,
    /// `exact / estimate`
    pub ratio: Option<f64>,
    pub warning: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportConfig {
    pub correction_order: usize,
    /// Residuals are multiplied by `N^scale_power`; `None` picks 3 for
    /// degree 1 and 2 for degree 2.
    pub scale_power: Option<u32>,
    /// Significant digits of the printed estimate.
    pub digits: usize,
    pub precision: u32,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig { correction_order: 2, scale_power: None, digits: 13, precision: DEFAULT_PRECISION }
    }
}

impl ReportConfig {
    /// Highest supported correction order for the degree.
    pub fn for_degree(degree: u32) -> Self {
        let correction_order = match degree {
            1 => 2,
            2 => 1,
            _ => 0,
        };
        ReportConfig { correction_order, ..ReportConfig::default() }
    }
}

fn default_scale_power(degree: u32) -> Option<u32> {
    match degree {
        1 => Some(3),
        2 => Some(2),
        _ => None,
    }
}

/// Rows for `specs`, matched against `exact` values by `(alpha, N, degree)`,
/// sorted by `(alpha, N)`.
pub fn build_report(
    specs: &[ProblemSpec],
    exact: &[Fixture],
    config: &ReportConfig,
) -> Result<Vec<ReportRow>, AsymptoticError> {
    let mut specs = specs.to_vec();
    specs.sort_by_key(|s| (s.alpha, s.n, s.degree));
    specs.dedup();
    specs
        .iter()
        .map(|spec| {
            let precision = config.precision.max(crate::asymptotics::required_precision(spec.n, spec.alpha));
            let est = corrected_estimate(spec, config.correction_order, precision)?;
            let fx = exact.iter().find(|f| f.spec() == *spec);
            let mut row = ReportRow {
                alpha: spec.alpha,
                n: spec.n,
                degree: spec.degree,
                estimate: est.value.round_to(config.digits),
                exact: fx.map(|f| f.exact.to_string()),
                source: fx.map(|f| f.source.clone()),
                rel_residual: None,
                scaled_residual: None,
                ratio: None,
                warning: est.warning,
            };
            if let Some(f) = fx {
                let e = est.value.to_rational();
                let x = f.exact.to_rational();
                let rel = (&x - &e) / &e;
                row.ratio = (&x / &e).to_f64();
                row.rel_residual = rel.to_f64();
                if let Some(k) = config.scale_power.or_else(|| default_scale_power(spec.degree)) {
                    let scale = num_traits::pow(BigRational::from_integer(spec.n.into()), k as usize);
                    row.scaled_residual = (rel * scale).to_f64();
                }
            }
            Ok(row)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Error)]
pub enum EmitError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed report: {0}")]
    Malformed(String),
}

const COLUMNS: [&str; 10] =
    ["alpha", "N", "degree", "estimate", "exact", "source", "rel_residual", "scaled_residual", "ratio", "warning"];

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn float(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn emit(rows: &[ReportRow], format: Format) -> Result<String, EmitError> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS)?;
            for r in rows {
                w.write_record([
                    r.alpha.to_string(),
                    r.n.to_string(),
                    r.degree.to_string(),
                    r.estimate.to_string(),
                    cell(&r.exact),
                    cell(&r.source),
                    float(r.rel_residual),
                    float(r.scaled_residual),
                    float(r.ratio),
                    cell(&r.warning),
                ])?;
            }
            let bytes = w.into_inner().map_err(|e| EmitError::Malformed(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("utf8 csv"))
        }
        Format::Md => {
            let mut s = String::new();
            writeln!(s, "| {} |", COLUMNS.join(" | ")).unwrap();
            writeln!(s, "|{}", "---|".repeat(COLUMNS.len())).unwrap();
            for r in rows {
                writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                    r.alpha,
                    r.n,
                    r.degree,
                    r.estimate,
                    cell(&r.exact),
                    cell(&r.source),
                    float(r.rel_residual),
                    float(r.scaled_residual),
                    float(r.ratio),
                    cell(&r.warning)
                )
                .unwrap();
            }
            Ok(s)
        }
    }
}

fn row_from_cells(cells: &[&str]) -> Result<ReportRow, String> {
    if cells.len() != COLUMNS.len() {
        return Err(format!("expected {} cells, got {}", COLUMNS.len(), cells.len()));
    }
    let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
    let optf = |s: &str| -> Result<Option<f64>, String> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| format!("{s}: {e}"))
        }
    };
    Ok(ReportRow {
        alpha: cells[0].parse().map_err(|e| format!("alpha: {e}"))?,
        n: cells[1].parse().map_err(|e| format!("N: {e}"))?,
        degree: cells[2].parse().map_err(|e| format!("degree: {e}"))?,
        estimate: cells[3].parse().map_err(|e| format!("{e}"))?,
        exact: opt(cells[4]),
        source: opt(cells[5]),
        rel_residual: optf(cells[6])?,
        scaled_residual: optf(cells[7])?,
        ratio: optf(cells[8])?,
        warning: opt(cells[9]),
    })
}

/// Reads back the output of [`emit`].
pub fn parse_report(text: &str, format: Format) -> Result<Vec<ReportRow>, EmitError> {
    match format {
        Format::Json => Ok(serde_json::from_str(text)?),
        Format::Csv => {
            let mut rdr = csv::Reader::from_reader(text.as_bytes());
            rdr.records()
                .map(|rec| {
                    let rec = rec?;
                    let cells: Vec<&str> = rec.iter().collect();
                    row_from_cells(&cells).map_err(EmitError::Malformed)
                })
                .collect()
        }
        Format::Md => text
            .lines()
            .skip(2)
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let inner = l.trim().trim_start_matches('|').trim_end_matches('|');
                let cells: Vec<&str> = inner.split('|').map(str::trim).collect();
                row_from_cells(&cells).map_err(EmitError::Malformed)
            })
            .collect(),
    }
}
