//! Exact rational machinery: vertex-correction polynomials, covariance
//! matrices, propagators and normalized vertex tensors.
//!
//! Axis `r` of every `d`-dimensional object corresponds to the weight
//! `C(i, r)`; axis 0 counts elements, axis 1 sums them, and so on.

mod matrix;
mod series;
mod tensor;

pub use matrix::RatMatrix;
pub use series::{factorial, int, rat, BetaPoly, Coeff, Rational, Series};
pub use tensor::{count_vectors, counts_to_indices, indices_to_counts, multinomial, SymTensor};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error("dimension must be between 2 and 4, got {0}")]
    Dimension(usize),
    #[error("vertex degree must be at least 3, got {0}")]
    VertexDegree(usize),
    #[error("population size must be at least 1")]
    EmptyPopulation,
}

fn check_dim(d: usize) -> Result<(), CalculusError> {
    if (2..=4).contains(&d) {
        Ok(())
    } else {
        Err(CalculusError::Dimension(d))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovKind {
    /// Rescaled two-dimensional covariance at finite `m`.
    Exact2d { m: u64 },
    /// The `m -> infinity` limit in any dimension.
    Leading,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovMatrix {
    pub kind: CovKind,
    pub matrix: RatMatrix,
}

impl CovMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Inverse of the leading-order covariance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagatorMatrix(pub RatMatrix);

impl PropagatorMatrix {
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, a: usize, b: usize) -> &Rational {
        self.0.get(a, b)
    }
}

/// `f_k(beta)`: the coefficient of `(iz)^k / k!` in
/// `ln(1 - beta (1 - e^{iz}))`, divided by `beta`.
pub fn vertex_correction(k: usize) -> Result<BetaPoly, CalculusError> {
    if k < 3 {
        return Err(CalculusError::VertexDegree(k));
    }
    // h(u) = beta (e^u - 1), coefficients are polynomials in beta
    let h: Vec<BetaPoly> = (0..=k)
        .map(|n| match n {
            0 => BetaPoly::zero(),
            _ => BetaPoly::beta().scale(&Rational::new(BigInt::one(), factorial(n as u64))),
        })
        .collect();
    let log = Series::new(h, k).ln1p();
    let kth = log.coeff(k).scale(&Rational::from_integer(factorial(k as u64)));
    Ok(kth.div_beta().expect("cumulant has no constant term"))
}

/// `(1 - beta)^{-k/2} f_k(beta)` expanded through `beta^order`.
pub fn rescaled_vertex_correction(k: usize, order: usize) -> Result<BetaPoly, CalculusError> {
    let f = vertex_correction(k)?;
    let minus_beta = Series::new(vec![Rational::zero(), -Rational::one()], order);
    let prefactor = minus_beta.binomial_pow(&rat(-(k as i64), 2));
    let fk = Series::new(f.coeffs().to_vec(), order);
    Ok(BetaPoly::new(prefactor.mul(&fk).into_coeffs()))
}

/// Rescaled two-dimensional covariance at population size `m`.
pub fn covariance_exact_2d(m: u64) -> Result<CovMatrix, CalculusError> {
    if m == 0 {
        return Err(CalculusError::EmptyPopulation);
    }
    let inv_m = rat(1, m as i64);
    let one = Rational::one();
    let xy = rat(1, 2) * (&one + &inv_m);
    let yy = rat(1, 3) * (&one + &inv_m) * (&one + &inv_m * rat(1, 2));
    let matrix = RatMatrix::from_rows(vec![vec![one, xy.clone()], vec![xy, yy]]);
    Ok(CovMatrix { kind: CovKind::Exact2d { m }, matrix })
}

/// Leading-order rescaled covariance: entry `(a, b)` is `1 / (a! b! (a + b + 1))`.
pub fn covariance_leading(d: usize) -> Result<CovMatrix, CalculusError> {
    check_dim(d)?;
    let matrix = RatMatrix::from_fn(d, |a, b| {
        let den = factorial(a as u64) * factorial(b as u64) * BigInt::from(a + b + 1);
        Rational::new(BigInt::one(), den)
    });
    Ok(CovMatrix { kind: CovKind::Leading, matrix })
}

pub fn propagator(d: usize) -> Result<PropagatorMatrix, CalculusError> {
    let cov = covariance_leading(d)?;
    let inv = cov.matrix.inverse().expect("leading covariance is positive definite");
    Ok(PropagatorMatrix(inv))
}

/// Normalized vertex of rank `k`: with `n_r` indices on axis `r`, the value
/// is `prod_r (1/r!)^{n_r} / (1 + sum_r r n_r)`.
pub fn vertex_tensor(d: usize, k: usize) -> Result<SymTensor, CalculusError> {
    check_dim(d)?;
    if k < 3 {
        return Err(CalculusError::VertexDegree(k));
    }
    Ok(SymTensor::from_counts(d, k, vertex_value))
}

fn vertex_value(counts: &[usize]) -> Rational {
    let mut value = Rational::one();
    let mut weight = 1u64;
    for (r, &n) in counts.iter().enumerate() {
        let f = factorial(r as u64);
        for _ in 0..n {
            value /= Rational::from_integer(f.clone());
        }
        weight += (r * n) as u64;
    }
    value / Rational::from_integer(weight.into())
}

/// Exact covariance `beta (1 - beta) sum_j w_a(j) w_b(j)` with the
/// `beta (1 - beta)` factor stripped, by direct summation.
pub fn weight_moment_matrix(m: u64, d: usize) -> RatMatrix {
    use num_integer::binomial;
    let mut sums = vec![BigInt::zero(); d * d];
    for j in 1..=m {
        let w: Vec<BigInt> = (0..d).map(|r| BigInt::from(binomial(j, r as u64))).collect();
        for a in 0..d {
            for b in 0..d {
                sums[a * d + b] += &w[a] * &w[b];
            }
        }
    }
    RatMatrix::from_fn(d, |a, b| Rational::from_integer(sums[a * d + b].clone()))
}
