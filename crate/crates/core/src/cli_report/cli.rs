use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use super::fixtures::{builtin_fixtures, load_fixtures, ExactValue, Fixture};
use super::report::{build_report, emit, Format, ReportConfig};
use super::verify::run_verify;
use crate::asymptotics::{canonical_formula, corrected_estimate, DEFAULT_PRECISION};
use crate::diagram_engine::correction_coefficients;
use crate::exact_enum::{
    count_dft, count_exhaustive, count_series, dp_fits, series_query, DftConfig, DpConfig,
    DEFAULT_ENUMERATION_CAP,
};
use crate::problem_model::{check_feasibility, make_problem};

#[derive(Parser, Debug)]
#[command(name = "magicser", version, about = "Exact counts and asymptotic estimates of magic series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Dp,
    Exhaustive,
    Dft,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact number of series
    Count {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        order: u64,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
        /// DP state-space cap (cells times items)
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Asymptotic estimate
    Estimate {
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        order: u64,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long)]
        correction_order: Option<usize>,
        /// Working precision in decimal digits
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        /// Printed significant digits
        #[arg(long, default_value_t = 13)]
        digits: usize,
    },
    /// Correction coefficients and assembled series as exact fractions
    Coeffs {
        #[arg(long, default_value_t = 2)]
        dimension: usize,
    },
    /// Estimates against exact counts
    Compare {
        #[arg(long)]
        alpha: u32,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
        /// Fixture file; defaults to the built-in table values
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        correction_order: Option<usize>,
        #[arg(long)]
        scale_power: Option<u32>,
        #[arg(long, default_value_t = 13)]
        digits: usize,
        /// Only use fixtures, never run the DP
        #[arg(long)]
        no_compute: bool,
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Internal identity checks
    Verify,
}

fn dp_config(degree: u32, cap: Option<u128>) -> DpConfig {
    let mut cfg = DpConfig::for_degree(degree);
    if let Some(c) = cap {
        cfg.cap = c;
    }
    cfg
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match cli.command {
        Command::Count { alpha, order, degree, method, cap } => {
            let spec = make_problem(alpha, order, degree)?;
            let count = match method {
                Method::Dp => count_series(&spec, &dp_config(degree, cap))?,
                Method::Exhaustive | Method::Dft => match series_query(&spec)? {
                    None => crate::exact_enum::BigCount::zero(),
                    Some(q) if matches!(method, Method::Exhaustive) => {
                        count_exhaustive(&q, cap.unwrap_or(DEFAULT_ENUMERATION_CAP))?
                    }
                    Some(q) => count_dft(&q, &DftConfig::default())?,
                },
            };
            writeln!(out, "{count}")?;
        }
        Command::Estimate { alpha, order, degree, correction_order, precision, digits } => {
            let spec = make_problem(alpha, order, degree)?;
            let c = correction_order.unwrap_or(ReportConfig::for_degree(degree).correction_order);
            let est = corrected_estimate(&spec, c, precision)?;
            if let Some(w) = &est.warning {
                writeln!(err, "warning: {w}")?;
            }
            writeln!(out, "{}", est.value.round_to(digits))?;
        }
        Command::Coeffs { dimension } => {
            let k = correction_coefficients(dimension)?;
            writeln!(out, "d = {dimension}")?;
            writeln!(out, "K1 = {}", k.k1)?;
            writeln!(out, "K2 = {}", k.k2)?;
            writeln!(out, "K3 = {}", k.k3)?;
            let degree = dimension as u32 - 1;
            let max = ReportConfig::for_degree(degree).correction_order;
            for alpha in 2..=5 {
                let spec = make_problem(alpha, 1, degree)?;
                writeln!(out, "alpha = {alpha}: {}", canonical_formula(&spec, max)?)?;
            }
        }
        Command::Compare {
            alpha,
            degree,
            orders,
            fixtures,
            format,
            correction_order,
            scale_power,
            digits,
            no_compute,
            cap,
        } => {
            let mut table = match &fixtures {
                Some(p) => {
                    let loaded = load_fixtures(p).with_context(|| format!("loading {}", p.display()))?;
                    for w in &loaded.warnings {
                        writeln!(err, "warning: {w}")?;
                    }
                    loaded.fixtures
                }
                None => builtin_fixtures(),
            };
            let cfg = dp_config(degree, cap);
            let mut specs = Vec::new();
            for &n in &orders {
                let spec = make_problem(alpha, n, degree)?;
                specs.push(spec);
                if no_compute || table.iter().any(|f| f.spec() == spec) {
                    continue;
                }
                let within = match series_query(&spec) {
                    Ok(Some(q)) => dp_fits(&q, &cfg).is_ok(),
                    Ok(None) => true,
                    Err(_) => false,
                };
                if within {
                    let count = count_series(&spec, &cfg)?;
                    let source = if check_feasibility(&spec).feasible { "magicser-dp" } else { "infeasible" };
                    table.push(Fixture { alpha, n, degree, exact: ExactValue::Integer(count), source: source.into() });
                }
            }
            let mut config = ReportConfig::for_degree(degree);
            if let Some(c) = correction_order {
                config.correction_order = c;
            }
            config.scale_power = scale_power;
            config.digits = digits;
            let rows = build_report(&specs, &table, &config)?;
            write!(out, "{}", emit(&rows, format)?)?;
        }
        Command::Verify => {
            if !run_verify(out)? {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    if let Some(n) = std::env::var("MAGICSER_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        // only the first call can size the global pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}
