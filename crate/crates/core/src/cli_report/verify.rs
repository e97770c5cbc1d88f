use num_bigint::BigUint;
use num_integer::binomial;

use crate::asymptotics::{canonical_formula, compose_series, SciNumber};
use crate::diagram_engine::{compute_k1, compute_k2, compute_k3, pairing_count};
use crate::exact_enum::{
    count_dp, count_exhaustive, count_series, BigCount, CountQuery, DftConfig, DftGrid, DpConfig,
    DEFAULT_ENUMERATION_CAP,
};
use crate::problem_model::make_problem;
use crate::series_calculus::{covariance_leading, propagator, rat, RatMatrix};

type Check = fn() -> Result<(), String>;

fn expect<T: PartialEq + std::fmt::Display>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn coefficients() -> Result<(), String> {
    expect("K1(2)", compute_k1(2).map_err(err)?, rat(-7, 30))?;
    expect("K2(2)", compute_k2(2).map_err(err)?, rat(-1, 2))?;
    expect("K3(2)", compute_k3(2).map_err(err)?, rat(11, 2520))?;
    expect("K1(3)", compute_k1(3).map_err(err)?, rat(-711, 980))
}

fn propagator_inverse() -> Result<(), String> {
    for d in 2..=4 {
        let p = propagator(d).map_err(err)?;
        let c = covariance_leading(d).map_err(err)?;
        if p.0.mul(&c.matrix) != RatMatrix::identity(d) {
            return Err(format!("d = {d}"));
        }
    }
    Ok(())
}

fn composition() -> Result<(), String> {
    for alpha in 2..=6 {
        for (degree, max) in [(1, 2), (2, 1), (3, 0)] {
            for order in 0..=max {
                let spec = make_problem(alpha, 1, degree).map_err(err)?;
                let a = compose_series(alpha, degree, order).map_err(err)?;
                let b = canonical_formula(&spec, order).map_err(err)?;
                if a != b {
                    return Err(format!("alpha={alpha} degree={degree} order={order}: {a} vs {b}"));
                }
            }
        }
    }
    Ok(())
}

fn small_counts() -> Result<(), String> {
    let cfg = DpConfig::default();
    for (n, want) in [(3u64, 8u64), (4, 86)] {
        let spec = make_problem(2, n, 1).map_err(err)?;
        expect("dp", count_series(&spec, &cfg).map_err(err)?, BigCount::from(want))?;
        let q = CountQuery::new((n * n) as usize, n as usize, vec![n * (n * n + 1) / 2]);
        expect("exhaustive", count_exhaustive(&q, DEFAULT_ENUMERATION_CAP).map_err(err)?, BigCount::from(want))?;
    }
    expect("trimagic N=6", count_series(&make_problem(2, 6, 3).map_err(err)?, &cfg).map_err(err)?, BigCount::zero())
}

fn dft_agrees() -> Result<(), String> {
    let m = 12;
    let grid = DftGrid::new(m, &DftConfig::default()).map_err(err)?;
    for a in 0..=m {
        let sums: Vec<u64> = (0..=(m * (m + 1) / 2) as u64).collect();
        for (s, c) in sums.iter().zip(grid.counts_for_size(a, &sums).map_err(err)?) {
            expect("dft", c, count_dp(&CountQuery::new(m, a, vec![*s]), &DpConfig::default()).map_err(err)?)?;
        }
    }
    Ok(())
}

fn symmetries() -> Result<(), String> {
    let cfg = DpConfig::default();
    for m in [7usize, 13, 20] {
        let total = (m * (m + 1) / 2) as u64;
        for a in 0..=m {
            let mut sum = BigUint::default();
            for b in 0..=total {
                let c = count_dp(&CountQuery::new(m, a, vec![b]), &cfg).map_err(err)?;
                let comp = count_dp(&CountQuery::new(m, m - a, vec![total - b]), &cfg).map_err(err)?;
                expect("complement", &c, &comp)?;
                if let Some(rb) = (a as u64 * (m as u64 + 1)).checked_sub(b) {
                    expect("reflection", &c, &count_dp(&CountQuery::new(m, a, vec![rb]), &cfg).map_err(err)?)?;
                }
                sum += c.0;
            }
            expect("row sum", sum, binomial(BigUint::from(m), BigUint::from(a)))?;
        }
    }
    Ok(())
}

fn pairings() -> Result<(), String> {
    let mut dfact = 1u64;
    for n in 1..=6u64 {
        dfact *= 2 * n - 1;
        expect("pairings", pairing_count(2 * n as usize), dfact)?;
    }
    Ok(())
}

fn sci_round_trip() -> Result<(), String> {
    for s in ["1.148464537053e+1558", "-2.50e-3", "7e+0", "3.1187e+4"] {
        let x: SciNumber = s.parse().map_err(err)?;
        expect("round trip", x.to_string().as_str(), s)?;
    }
    Ok(())
}

pub const CHECKS: [(&str, Check); 8] = [
    ("correction coefficients K1, K2, K3", coefficients),
    ("propagator inverts leading covariance", propagator_inverse),
    ("composed series equal assembled formulas", composition),
    ("small exact counts", small_counts),
    ("DFT inversion equals DP", dft_agrees),
    ("complement, reflection and row-sum identities", symmetries),
    ("pairing counts are double factorials", pairings),
    ("scientific notation round trip", sci_round_trip),
];

/// Runs every check, writing one line each; true when all pass.
pub fn run_verify(out: &mut dyn std::io::Write) -> std::io::Result<bool> {
    let mut ok = true;
    for (name, check) in CHECKS {
        match check() {
            Ok(()) => writeln!(out, "PASS  {name}")?,
            Err(e) => {
                ok = false;
                writeln!(out, "FAIL  {name}: {e}")?;
            }
        }
    }
    Ok(ok)
}
