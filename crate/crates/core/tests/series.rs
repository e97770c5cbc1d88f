use magicser::asymptotics::{
    canonical_formula, compose_series, corrected_estimate, prefactor_series, SciNumber,
};
use magicser::diagram_engine::{correction_polynomial, pairing_count};
use magicser::problem_model::make_problem;
use magicser::series_calculus::{covariance_leading, propagator, rat, RatMatrix, Rational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

fn coeffs(alpha: u32, degree: u32, order: usize) -> Vec<Rational> {
    compose_series(alpha, degree, order).unwrap().correction.into_iter().map(|(_, c)| c).collect()
}

#[test]
fn composed_coefficients() {
    assert_eq!(coeffs(2, 1, 2), vec![rat(1, 1), rat(3, 5), rat(31, 420)]);
    assert_eq!(coeffs(3, 1, 2), vec![rat(1, 1), rat(-11, 15), rat(157, 126)]);
    assert_eq!(coeffs(4, 1, 2), vec![rat(1, 1), rat(-7, 30), rat(-1249, 2520)]);
    for alpha in 5..=9 {
        assert_eq!(coeffs(alpha, 1, 2), vec![rat(1, 1), rat(-7, 30), rat(11, 2520)]);
    }
    assert_eq!(coeffs(2, 2, 1), vec![rat(1, 1), rat(1787, 2940)]);
    assert_eq!(coeffs(3, 2, 1), vec![rat(1, 1), rat(-1201, 980)]);
    // the Gaussian-only forms
    assert_eq!(coeffs(2, 1, 0), vec![rat(1, 1), rat(5, 6), rat(55, 72)]);
    assert_eq!(coeffs(3, 1, 0), vec![rat(1, 1), rat(-1, 2), rat(9, 8)]);
}

#[test]
fn leading_constants() {
    let f = compose_series(2, 3, 0).unwrap();
    assert_eq!(f.leading_constant.rational, rat(720, 1));
    assert_eq!(f.leading_constant.sqrt_arg, rat(105, 1));
    assert_eq!(f.leading_constant.e_power, rat(-1, 2));
    assert_eq!(f.growth.power, rat(14, 1));
    let f = compose_series(3, 2, 1).unwrap();
    assert_eq!(f.leading_constant.rational, rat(6, 1));
    assert_eq!(f.leading_constant.sqrt_arg, rat(30, 1));
    assert_eq!(f.growth.power, rat(21, 2));
}

#[test]
fn correction_polynomial_places_k2_at_alpha() {
    let p = correction_polynomial(&make_problem(2, 1, 1).unwrap(), 2).unwrap();
    assert_eq!(p, vec![(0, rat(1, 1)), (1, rat(-7, 30)), (2, rat(-1249, 2520))]);
    let p = correction_polynomial(&make_problem(3, 1, 1).unwrap(), 2).unwrap();
    assert_eq!(p, vec![(0, rat(1, 1)), (1, rat(-7, 30)), (2, rat(11, 2520))]);
}

#[test]
fn prefactor_series_values() {
    assert_eq!(prefactor_series(2, 2), vec![rat(1, 1), rat(-1, 6), rat(-5, 72)]);
    assert_eq!(prefactor_series(3, 2), vec![rat(1, 1), rat(-1, 2), rat(1, 8)]);
}

#[test]
fn propagator_times_covariance() {
    for d in 2..=4 {
        let p = propagator(d).unwrap();
        let c = covariance_leading(d).unwrap();
        assert_eq!(p.0.mul(&c.matrix), RatMatrix::identity(d));
    }
}

#[test]
fn pairings() {
    let mut f = 1;
    for n in 1..=6u64 {
        f *= 2 * n - 1;
        assert_eq!(pairing_count(2 * n as usize), f);
    }
}

#[test]
fn canonical_orders_rejected() {
    let spec = make_problem(2, 10, 3).unwrap();
    assert!(canonical_formula(&spec, 1).is_err());
    let spec = make_problem(2, 10, 2).unwrap();
    assert!(corrected_estimate(&spec, 2, 50).is_err());
}

proptest! {
    #[test]
    fn sci_round_trip(neg in any::<bool>(), digits in "[1-9][0-9]{0,30}", exp in -5000i64..5000) {
        let s = format!("{}{}{}e{}{}",
            if neg { "-" } else { "" },
            &digits[..1],
            if digits.len() > 1 { format!(".{}", &digits[1..]) } else { String::new() },
            if exp < 0 { "-" } else { "+" },
            exp.abs());
        let x: SciNumber = s.parse().unwrap();
        prop_assert_eq!(x.to_string(), s.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<SciNumber>(&json).unwrap(), x.clone());
        prop_assert_eq!(SciNumber::from_rational(&x.to_rational(), digits.len()), x);
    }

    #[test]
    fn rounding_stays_close(num in 1u64..u64::MAX, den in 1u64..1_000_000, digits in 1usize..20) {
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        let x = SciNumber::from_rational(&r, digits);
        prop_assert_eq!(x.significant_digits(), digits);
        let rel = ((x.to_rational() - &r) / &r).abs();
        let bound = BigRational::new(BigInt::from(1), BigInt::from(10).pow(digits as u32 - 1) * 2);
        prop_assert!(rel <= bound);
    }
}

#[test]
fn estimates_increase_with_n() {
    let mut prev = None;
    for n in 5..=100 {
        let v = corrected_estimate(&make_problem(2, n, 1).unwrap(), 2, 50).unwrap().value.to_rational();
        if let Some(p) = prev {
            assert!(v > p, "N = {n}");
        }
        prev = Some(v);
    }
}
