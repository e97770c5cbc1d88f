//! High-precision evaluation of the asymptotic formulas, and exact composition
//! of their `1/N` correction series.
//!
//! Every magnitude is handled as a natural logarithm and only converted to a
//! decimal mantissa and exponent at the end, so `(Ne)^N` is never formed.

mod sci;

pub use sci::{SciNumber, SciParseError};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diagram_engine::{correction_polynomial, DiagramError};
use crate::precise::{bits_for_digits, Real};
use crate::problem_model::{check_feasibility, make_problem, ProblemSpec};
use crate::series_calculus::{covariance_leading, int, rat, Rational, Series};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision of {requested} digits is too low, need at least {required}")]
    PrecisionTooLow { requested: u32, required: u32 },
    #[error("correction order {order} not available for degree {degree}")]
    UnsupportedOrder { degree: u32, order: usize },
    #[error("correction series is not positive at N = {0}")]
    NonPositiveCorrection(u64),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

pub const MIN_PRECISION: u32 = 30;
pub const DEFAULT_PRECISION: u32 = 50;

/// `rational * pi^pi_power * e^e_power * sqrt(sqrt_arg)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingConstant {
    pub rational: Rational,
    pub pi_power: Rational,
    pub e_power: Rational,
    pub sqrt_arg: Rational,
}

impl LeadingConstant {
    fn ln(&self, bits: u32) -> Real {
        Real::ln_ratio(&self.rational, bits)
            + Real::pi(bits).ln().mul_ratio(&self.pi_power)
            + Real::from_ratio(&self.e_power, bits)
            + Real::ln_ratio(&self.sqrt_arg, bits).div_int(2)
    }
}

/// `(N^(alpha-1) e)^N / N^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Growth {
    pub alpha: u32,
    pub power: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticFormula {
    pub leading_constant: LeadingConstant,
    pub growth: Growth,
    /// `(k, c)` meaning `c / N^k`; the `k = 0` entry is 1.
    pub correction: Vec<(u32, Rational)>,
}

fn frac_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for AsymptoticFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.leading_constant;
        let mut factors = Vec::new();
        if !c.rational.is_one() {
            factors.push(frac_str(&c.rational));
        }
        if !c.sqrt_arg.is_one() {
            factors.push(format!("sqrt({})", frac_str(&c.sqrt_arg)));
        }
        if !c.pi_power.is_zero() {
            factors.push(format!("pi^({})", frac_str(&c.pi_power)));
        }
        if !c.e_power.is_zero() {
            factors.push(format!("e^({})", frac_str(&c.e_power)));
        }
        let growth = match self.growth.alpha {
            2 => "(N e)^N".to_string(),
            a => format!("(N^{} e)^N", a - 1),
        };
        factors.push(format!("{growth} / N^({})", frac_str(&self.growth.power)));
        write!(f, "{} * (1", factors.join(" * "))?;
        for (k, v) in self.correction.iter().filter(|(k, v)| *k > 0 && !v.is_zero()) {
            let sign = if v.is_negative() { '-' } else { '+' };
            let nk = if *k == 1 { "N".to_string() } else { format!("N^{k}") };
            let v = v.abs();
            write!(f, " {sign} {}/({} {nk})", v.numer(), v.denom())?;
        }
        write!(f, ")")
    }
}

impl AsymptoticFormula {
    /// Natural log of the formula at `n`, with `bits` fractional bits.
    pub fn ln_at(&self, n: u64, bits: u32) -> Result<Real, AsymptoticError> {
        let nn = BigRational::from_integer(n.into());
        let mut series = Rational::zero();
        for (k, c) in &self.correction {
            series += c / num_traits::pow(nn.clone(), *k as usize);
        }
        if !series.is_positive() {
            return Err(AsymptoticError::NonPositiveCorrection(n));
        }
        let ln_n = Real::ln_ratio(&nn, bits);
        let per = ln_n.mul_int(self.growth.alpha as i64 - 1) + Real::one(bits);
        Ok(self.leading_constant.ln(bits) + per.mul_ratio(&nn) - ln_n.mul_ratio(&self.growth.power)
            + Real::ln_ratio(&series, bits))
    }

    pub fn evaluate(&self, n: u64, precision: u32) -> Result<SciNumber, AsymptoticError> {
        let l = self.ln_at(n, working_bits(n, self.growth.alpha, precision))?;
        Ok(SciNumber::from_ln(&l, output_digits(n, self.growth.alpha, precision)))
    }
}

fn magnitude_digits(n: u64, alpha: u32) -> u32 {
    let mag = (n as f64) * (alpha as f64) * (n.max(2) as f64).log10();
    (mag.ceil().max(1.0) as u64).to_string().len() as u32
}

/// Smallest accepted working precision for an instance.
pub fn required_precision(n: u64, alpha: u32) -> u32 {
    MIN_PRECISION.max(20 + magnitude_digits(n, alpha))
}

fn working_bits(n: u64, alpha: u32, precision: u32) -> u32 {
    bits_for_digits(precision + magnitude_digits(n, alpha)) + 16
}

/// Mantissa digits reported for a given working precision.
fn output_digits(n: u64, alpha: u32, precision: u32) -> usize {
    (precision - magnitude_digits(n, alpha) - 10) as usize
}

fn check_precision(n: u64, alpha: u32, precision: u32) -> Result<(), AsymptoticError> {
    let required = required_precision(n, alpha);
    if precision < required {
        return Err(AsymptoticError::PrecisionTooLow { requested: precision, required });
    }
    Ok(())
}

/// `beta^(-beta m) (1-beta)^(-(1-beta) m)`.
pub fn prefactor_exact(m: &BigInt, beta: &Rational, precision: u32) -> Result<SciNumber, AsymptoticError> {
    if !(beta.is_positive() && beta < &Rational::one()) {
        return Err(AsymptoticError::Domain(format!("beta = {beta} outside (0, 1)")));
    }
    if precision < MIN_PRECISION {
        return Err(AsymptoticError::PrecisionTooLow { requested: precision, required: MIN_PRECISION });
    }
    let mr = BigRational::from_integer(m.clone());
    let q = Rational::one() - beta;
    let mag = (m.bits() as u32).max(1);
    let bits = bits_for_digits(precision) + mag + 16;
    let l = -(Real::ln_ratio(beta, bits).mul_ratio(&(beta * &mr)) + Real::ln_ratio(&q, bits).mul_ratio(&(&q * &mr)));
    Ok(SciNumber::from_ln(&l, precision as usize - 10))
}

/// Exponent of the prefactor minus its `N ln(N^(alpha-1)) + N` growth, as a
/// series in `x = 1/N`, with its constant term split off.
fn prefactor_exponent(alpha: u32, order: usize) -> (Rational, Series<Rational>) {
    // -(m - N) ln(1 - beta) = sum_k (N^(alpha - k(alpha-1)) - N^(1 - k(alpha-1))) / k
    let a = alpha as i64;
    let mut coeffs = vec![Rational::zero(); order + 1];
    for k in 1..=(order as i64 + a) {
        let first = k * (a - 1) - a;
        let second = k * (a - 1) - 1;
        if k >= 2 && (0..=order as i64).contains(&first) {
            coeffs[first as usize] += rat(1, k);
        }
        if (0..=order as i64).contains(&second) {
            coeffs[second as usize] -= rat(1, k);
        }
    }
    let c0 = std::mem::replace(&mut coeffs[0], Rational::zero());
    (c0, Series::new(coeffs, order))
}

/// Coefficients of `1/N^k`, `k = 0..=order`, in the prefactor divided by
/// `(N^(alpha-1) e)^N e^c0`.
pub fn prefactor_series(alpha: u32, order: usize) -> Vec<Rational> {
    prefactor_exponent(alpha, order).1.exp().into_coeffs()
}

/// `(1 - x^k)^p` truncated at `order`.
fn one_minus_pow(k: usize, p: &Rational, order: usize) -> Series<Rational> {
    let mut h = vec![Rational::zero(); order + 1];
    if k <= order {
        h[k] = int(-1);
    }
    Series::new(h, order).binomial_pow(p)
}

/// Splits `r = s^2 t` with `t` squarefree, for integer numerator and denominator.
fn square_part(r: &Rational) -> (Rational, Rational) {
    fn split(n: &BigInt) -> (BigInt, BigInt) {
        let mut n = n.clone();
        let (mut s, mut t) = (BigInt::one(), BigInt::one());
        let mut p = BigInt::from(2);
        while &p * &p <= n {
            while (&n % (&p * &p)).is_zero() {
                n /= &p * &p;
                s *= &p;
            }
            if (&n % &p).is_zero() {
                n /= &p;
                t *= &p;
            }
            p += 1;
        }
        (s, t * n)
    }
    // sqrt(a/b) = sqrt(a b) / b
    let (s, t) = split(&(r.numer() * r.denom()));
    (BigRational::new(s, r.denom().clone()), BigRational::from_integer(t))
}

fn check_order(degree: u32, order: usize) -> Result<(), AsymptoticError> {
    let max = match degree {
        1 => 2,
        2 => 1,
        _ => 0,
    };
    if order > max {
        return Err(AsymptoticError::UnsupportedOrder { degree, order });
    }
    Ok(())
}

/// Derives the assembled formula from its pieces: prefactor series, the
/// `1/N` expansion of the Gaussian peak probability, and the diagrammatic
/// correction polynomial.
pub fn compose_series(alpha: u32, degree: u32, order: usize) -> Result<AsymptoticFormula, AsymptoticError> {
    let spec = make_problem(alpha, 1, degree).map_err(|e| AsymptoticError::Domain(e.to_string()))?;
    check_order(degree, order)?;
    let d = spec.dimension();
    let corr = correction_polynomial(&spec, order)?;
    let order = series_order(degree, order);
    let (c0, exponent) = prefactor_exponent(alpha, order);
    let mut series = exponent.exp();
    // (1 - beta)^(-d/2), and for one target the exact (1 - 1/m^2)^(-1/2)
    series = series.mul(&one_minus_pow(alpha as usize - 1, &rat(-(d as i64), 2), order));
    if degree == 1 {
        series = series.mul(&one_minus_pow(2 * alpha as usize, &rat(-1, 2), order));
    }
    let mut cvec = vec![Rational::zero(); order + 1];
    for (k, c) in corr {
        cvec[k as usize] += c;
    }
    series = series.mul(&Series::new(cvec, order));

    // (2 pi)^(-d/2) det^(-1/2) (beta (1-beta))^(-d/2) m^(-d^2/2)
    let det = covariance_leading(d).map_err(DiagramError::from)?.matrix.det();
    let (s, t) = square_part(&(Rational::one() / (det * num_traits::pow(int(2), d))));
    let leading_constant = LeadingConstant { rational: s, pi_power: rat(-(d as i64), 2), e_power: c0, sqrt_arg: t };
    let power = rat(d as i64, 2) + int(alpha as i64 * (d * (d - 1)) as i64 / 2);
    Ok(AsymptoticFormula {
        leading_constant,
        growth: Growth { alpha, power },
        correction: series.into_coeffs().into_iter().enumerate().map(|(k, c)| (k as u32, c)).collect(),
    })
}

fn r(n: i64, d: i64) -> Rational {
    rat(n, d)
}

/// Correction coefficients of the assembled formulas, `1/N^0` first.
fn canonical_coefficients(alpha: u32, degree: u32, order: usize) -> Vec<Rational> {
    let full: Vec<Rational> = match (degree, order, alpha) {
        (1, 0, 2) => vec![r(1, 1), r(5, 6), r(55, 72)],
        (1, 0, 3) => vec![r(1, 1), r(-1, 2), r(9, 8)],
        (1, 0, 4) => vec![r(1, 1), r(0, 1), r(-1, 2)],
        (1, 0, _) => vec![r(1, 1), r(0, 1), r(0, 1)],
        (1, _, 2) => vec![r(1, 1), r(3, 5), r(31, 420)],
        (1, _, 3) => vec![r(1, 1), r(-11, 15), r(157, 126)],
        (1, _, 4) => vec![r(1, 1), r(-7, 30), r(-1249, 2520)],
        (1, _, _) => vec![r(1, 1), r(-7, 30), r(11, 2520)],
        (2, 0, 2) => vec![r(1, 1), r(4, 3)],
        (2, 0, 3) => vec![r(1, 1), r(-1, 2)],
        (2, 0, _) => vec![r(1, 1), r(0, 1)],
        (2, _, 2) => vec![r(1, 1), r(1787, 2940)],
        (2, _, 3) => vec![r(1, 1), r(-1201, 980)],
        (2, _, _) => vec![r(1, 1), r(-711, 980)],
        _ => vec![r(1, 1)],
    };
    full.into_iter().take(series_order(degree, order) + 1).collect()
}

/// Highest power of `1/N` carried: the Gaussian-only forms keep their own
/// expansion, corrected forms stop at the correction order.
fn series_order(degree: u32, order: usize) -> usize {
    match (degree, order) {
        (1, 0) => 2,
        (2, 0) => 1,
        _ => order,
    }
}

/// The assembled formula used at runtime.
pub fn canonical_formula(spec: &ProblemSpec, order: usize) -> Result<AsymptoticFormula, AsymptoticError> {
    check_order(spec.degree, order)?;
    let alpha = spec.alpha;
    let e_power = if alpha == 2 { r(-1, 2) } else { Rational::zero() };
    let (rational, pi_power, sqrt_arg, power) = match spec.degree {
        1 => (int(1), r(-1, 1), int(3), int(alpha as i64 + 1)),
        2 => (int(6), r(-3, 2), int(30), r(3 + 6 * alpha as i64, 2)),
        _ => (int(720), r(-2, 1), int(105), int(2 + 6 * alpha as i64)),
    };
    let correction = canonical_coefficients(alpha, spec.degree, order)
        .into_iter()
        .enumerate()
        .map(|(k, c)| (k as u32, c))
        .collect();
    Ok(AsymptoticFormula {
        leading_constant: LeadingConstant { rational, pi_power, e_power, sqrt_arg },
        growth: Growth { alpha, power },
        correction,
    })
}

/// An estimate together with a note when the instance has no series at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Estimate {
    pub value: SciNumber,
    pub warning: Option<String>,
}

pub fn corrected_estimate(spec: &ProblemSpec, order: usize, precision: u32) -> Result<Estimate, AsymptoticError> {
    if spec.n < 2 {
        return Err(AsymptoticError::Domain("N must be at least 2".into()));
    }
    check_precision(spec.n, spec.alpha, precision)?;
    let value = canonical_formula(spec, order)?.evaluate(spec.n, precision)?;
    let feas = check_feasibility(spec);
    let warning = (!feas.feasible).then(|| format!("no series exist for this instance ({})", feas.reason));
    Ok(Estimate { value, warning })
}

/// Peak density of the multivariate normal approximation at the mean.
pub fn gaussian_central_probability(spec: &ProblemSpec, precision: u32) -> Result<SciNumber, AsymptoticError> {
    if precision < MIN_PRECISION {
        return Err(AsymptoticError::PrecisionTooLow { requested: precision, required: MIN_PRECISION });
    }
    let model = spec.model();
    if spec.degree == 1 && model.m < BigInt::from(2) {
        return Err(AsymptoticError::Domain("m must be at least 2 for a nondegenerate covariance".into()));
    }
    let bits = bits_for_digits(precision) + 16;
    let m = BigRational::from_integer(model.m.clone());
    let bq = &model.beta * (Rational::one() - &model.beta);
    let l = if spec.degree == 1 {
        // 1/(pi beta (1-beta) m) * sqrt(3/(m^2 - 1))
        -(Real::pi(bits).ln() + Real::ln_ratio(&(&bq * &m), bits))
            + Real::ln_ratio(&(int(3) / (&m * &m - int(1))), bits).div_int(2)
    } else {
        let d = spec.dimension();
        let det = covariance_leading(d).map_err(DiagramError::from)?.matrix.det();
        let scale = num_traits::pow(bq, d) * num_traits::pow(m, d * d);
        -(Real::pi(bits).mul_int(2).ln().mul_int(d as i64).div_int(2)) - Real::ln_ratio(&(det * scale), bits).div_int(2)
    };
    Ok(SciNumber::from_ln(&l, precision as usize - 10))
}

/// Empirical magic-square-series formula with the `3/5` and `2/7` denominator
/// terms; `corrected` replaces `2/7` by `2/7 + 1/2100`.
pub fn bottomley(n: u64, corrected: bool) -> Result<SciNumber, AsymptoticError> {
    if n < 2 {
        return Err(AsymptoticError::Domain("N must be at least 2".into()));
    }
    let precision = required_precision(n, 2).max(DEFAULT_PRECISION);
    let bits = working_bits(n, 2, precision);
    let nn = BigRational::from_integer(n.into());
    let c = if corrected { r(2, 7) + r(1, 2100) } else { r(2, 7) };
    let denom = num_traits::pow(nn.clone(), 3) - r(3, 5) * &nn * &nn + c * &nn;
    let ln_n = Real::ln_ratio(&nn, bits);
    let l = (ln_n + Real::one(bits)).mul_ratio(&nn) - Real::ln_ratio(&denom, bits) - Real::pi(bits).ln()
        + Real::from_int(3, bits).ln().div_int(2)
        - Real::one(bits).div_int(2);
    Ok(SciNumber::from_ln(&l, output_digits(n, 2, precision)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn est(alpha: u32, n: u64, degree: u32, order: usize) -> SciNumber {
        corrected_estimate(&make_problem(alpha, n, degree).unwrap(), order, DEFAULT_PRECISION).unwrap().value
    }

    #[test]
    fn prefactor_series_examples() {
        assert_eq!(prefactor_series(2, 2), vec![r(1, 1), r(-1, 6), r(-5, 72)]);
        assert_eq!(prefactor_series(3, 2), vec![r(1, 1), r(-1, 2), r(1, 8)]);
        assert_eq!(prefactor_series(5, 2), vec![r(1, 1), r(0, 1), r(0, 1)]);
        assert_eq!(prefactor_series(5, 3)[3], r(-1, 2));
        assert_eq!(prefactor_exponent(2, 2).0, r(-1, 2));
        assert_eq!(prefactor_exponent(3, 2).0, Rational::zero());
    }

    #[test]
    fn prefactor_exact_small() {
        let p = prefactor_exact(&BigInt::from(2), &r(1, 2), 40).unwrap();
        assert_eq!(p.round_to(20).to_string(), "4.0000000000000000000e+0");
        assert!(prefactor_exact(&BigInt::from(2), &r(3, 2), 40).is_err());
    }

    #[test]
    fn prefactor_exact_matches_series() {
        for (alpha, n) in [(2u32, 10u64), (2, 30), (2, 100), (3, 10), (3, 30), (3, 100), (4, 10)] {
            let spec = make_problem(alpha, n, 1).unwrap();
            let model = spec.model();
            let exact = prefactor_exact(&model.m, &model.beta, 60).unwrap().to_rational();
            let (c0, _) = prefactor_exponent(alpha, 2);
            let coeffs = prefactor_series(alpha, 2);
            let growth = LeadingConstant { rational: int(1), pi_power: int(0), e_power: c0, sqrt_arg: int(1) };
            let f = AsymptoticFormula {
                leading_constant: growth,
                growth: Growth { alpha, power: int(0) },
                correction: coeffs.into_iter().enumerate().map(|(k, c)| (k as u32, c)).collect(),
            };
            let approx = f.evaluate(n, 60).unwrap().to_rational();
            let rel = ((exact - &approx) / approx).abs().to_f64().unwrap();
            let bound = 2.0 / (n as f64).powi(3);
            assert!(rel < bound, "alpha={alpha} N={n}: {rel:e}");
        }
    }

    #[test]
    fn composed_series_match_canonical() {
        for alpha in 2..=7 {
            for order in 0..=2 {
                let spec = make_problem(alpha, 1, 1).unwrap();
                assert_eq!(compose_series(alpha, 1, order).unwrap(), canonical_formula(&spec, order).unwrap(), "alpha={alpha} order={order}");
            }
            for order in 0..=1 {
                let spec = make_problem(alpha, 1, 2).unwrap();
                assert_eq!(compose_series(alpha, 2, order).unwrap(), canonical_formula(&spec, order).unwrap(), "alpha={alpha} bimagic order={order}");
            }
            let spec = make_problem(alpha, 1, 3).unwrap();
            assert_eq!(compose_series(alpha, 3, 0).unwrap(), canonical_formula(&spec, 0).unwrap());
        }
        assert!(compose_series(2, 2, 2).is_err());
    }

    #[test]
    fn table_estimates() {
        assert_eq!(est(2, 500, 1, 2).round_to(15).to_string(), "1.14846453705361e+1558");
        assert_eq!(est(2, 1000, 1, 2).round_to(13).to_string(), "6.591829225199e+3424");
        assert_eq!(est(2, 28, 2, 1).round_to(7).to_string(), "2.455567e+42");
        assert_eq!(est(2, 12, 3, 0).round_to(3).to_string(), "5.12e+5");
        assert_eq!(est(2, 29, 2, 1).round_to(5).to_string(), "3.9714e+44");
        assert_eq!(est(3, 12, 2, 1).round_to(5).to_string(), "3.1966e+20");
    }

    #[test]
    fn first_order_effect() {
        let spec = make_problem(2, 10_000, 1).unwrap();
        let a = corrected_estimate(&spec, 2, 60).unwrap().value.to_rational();
        let b = corrected_estimate(&spec, 0, 60).unwrap().value.to_rational();
        // 3/5 against the Gaussian 5/6 at 1/N
        let ratio = (a / b - int(1)).to_f64().unwrap();
        let expect = (0.6 - 5.0 / 6.0) * 1e-4;
        assert!((ratio - expect).abs() < 0.01 * expect.abs(), "{ratio}");
    }

    #[test]
    fn increasing_in_n() {
        let mut prev = est(2, 5, 1, 2).to_rational();
        for n in 6..=100 {
            let cur = est(2, n, 1, 2).to_rational();
            assert!(cur > prev, "N = {n}");
            prev = cur;
        }
    }

    #[test]
    fn gaussian_probability() {
        let spec = make_problem(2, 5, 1).unwrap();
        let p = gaussian_central_probability(&spec, 40).unwrap().to_f64();
        let expect = 1.0 / (std::f64::consts::PI * 4.0) * (3.0f64 / 624.0).sqrt();
        assert!((p / expect - 1.0).abs() < 1e-14);
        // times the prefactor, the degree-3 constant is 720 sqrt(105/e) / pi^2 at leading order
        let spec = make_problem(2, 400, 3).unwrap();
        let model = spec.model();
        let g = gaussian_central_probability(&spec, 60).unwrap().to_rational();
        let pre = prefactor_exact(&model.m, &model.beta, 60).unwrap().to_rational();
        let lead = canonical_formula(&spec, 0).unwrap().evaluate(400, 60).unwrap().to_rational();
        let rel = (g * pre / lead - int(1)).to_f64().unwrap();
        assert!(rel.abs() < 0.01, "{rel}");
    }

    #[test]
    fn bottomley_variants() {
        let b = bottomley(2, false).unwrap().to_f64();
        let expect = (3.0 / std::f64::consts::E).sqrt() / std::f64::consts::PI * (2.0 * std::f64::consts::E).powi(2)
            / (8.0 - 12.0 / 5.0 + 4.0 / 7.0);
        assert!((b / expect - 1.0).abs() < 1e-14);
        let n = 1_000_000;
        let ratio = (bottomley(n, true).unwrap().to_rational() / bottomley(n, false).unwrap().to_rational()
            - int(1))
        .to_f64()
        .unwrap();
        assert!(ratio.abs() < 1e-14);
    }

    #[test]
    fn precision_and_feasibility() {
        let spec = make_problem(2, 1000, 1).unwrap();
        assert!(matches!(corrected_estimate(&spec, 2, 20), Err(AsymptoticError::PrecisionTooLow { .. })));
        let spec = make_problem(2, 6, 3).unwrap();
        let e = corrected_estimate(&spec, 0, 50).unwrap();
        assert!(e.warning.is_some());
        assert!(e.value.to_f64() > 0.0);
        assert!(corrected_estimate(&spec, 1, 50).is_err());
    }
}
