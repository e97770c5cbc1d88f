//! Problem instances and the Bernoulli sampling model behind them.
//!
//! A magic series of order `N` for an `alpha`-dimensional hypercube is an
//! `N`-subset of `1..=N^alpha` hitting the magic constant; multimagic degrees
//! add further targets on binomial weights of the entries. Choosing
//! `m = N^alpha` and `beta = N^(1-alpha)` puts the mean of the sampling model
//! exactly on those targets.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("hypercube dimension must be at least 2, got {0}")]
    Dimension(u32),
    #[error("order must be at least 1, got {0}")]
    Order(u64),
    #[error("multimagic degree must be 1, 2 or 3, got {0}")]
    Degree(u32),
}

/// Which hypercube (`alpha`), which order (`n`), and which multimagic degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProblemSpec {
    pub alpha: u32,
    pub n: u64,
    pub degree: u32,
}

/// Population size `m` and inclusion probability `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingModel {
    pub m: BigInt,
    pub beta: BigRational,
}

/// Mean targets `(mu_x, mu_y[, mu_z[, mu_w]])` in the binomial-weight convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetVector {
    pub mu: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    pub reason: String,
}

pub fn make_problem(alpha: u32, n: u64, degree: u32) -> Result<ProblemSpec, ProblemError> {
    if alpha < 2 {
        return Err(ProblemError::Dimension(alpha));
    }
    if n < 1 {
        return Err(ProblemError::Order(n));
    }
    if !(1..=3).contains(&degree) {
        return Err(ProblemError::Degree(degree));
    }
    Ok(ProblemSpec { alpha, n, degree })
}

impl ProblemSpec {
    /// Dimension of the moment vectors: one size coordinate plus one per power.
    pub fn dimension(&self) -> usize {
        self.degree as usize + 1
    }

    pub fn model(&self) -> SamplingModel {
        let n = BigInt::from(self.n);
        let m = Pow::pow(&n, self.alpha);
        let beta = BigRational::new(BigInt::one(), Pow::pow(&n, self.alpha - 1));
        SamplingModel { m, beta }
    }

    /// `m` as a machine integer, when it fits.
    pub fn population(&self) -> Option<u64> {
        self.n.checked_pow(self.alpha)
    }
}

/// Weight `w_r(i) = C(i, r)`: 1, i, i(i-1)/2, i(i-1)(i-2)/6.
pub fn weight(r: u32, i: u64) -> u64 {
    binomial(i, r as u64)
}

pub fn target_moments(spec: &ProblemSpec) -> TargetVector {
    let model = spec.model();
    // sum_{i=0}^{m} C(i, r) = C(m+1, r+1); only r = 0 picks up the i = 0 term
    let mu = (0..=spec.degree)
        .map(|r| {
            let mut total = binomial(&model.m + 1, BigInt::from(r + 1));
            if r == 0 {
                total -= 1;
            }
            &model.beta * BigRational::from_integer(total)
        })
        .collect();
    TargetVector { mu }
}

impl TargetVector {
    pub fn is_integral(&self) -> bool {
        self.mu.iter().all(|x| x.is_integer())
    }

    /// Targets re-expressed as plain power sums `(count, sum i, sum i^2, sum i^3)`.
    ///
    /// `i^2 = 2 C(i,2) + C(i,1)` and `i^3 = 6 C(i,3) + 6 C(i,2) + C(i,1)`.
    pub fn power_sums(&self) -> Vec<BigRational> {
        let c = |k: i64| BigRational::from_integer(BigInt::from(k));
        let mut out = vec![self.mu[0].clone()];
        if self.mu.len() > 1 {
            out.push(self.mu[1].clone());
        }
        if self.mu.len() > 2 {
            out.push(c(2) * &self.mu[2] + &self.mu[1]);
        }
        if self.mu.len() > 3 {
            out.push(c(6) * &self.mu[3] + c(6) * &self.mu[2] + &self.mu[1]);
        }
        out
    }
}

pub fn check_feasibility(spec: &ProblemSpec) -> Feasibility {
    const NAMES: [&str; 4] = ["size", "sum", "square-weight", "cube-weight"];
    let targets = target_moments(spec);
    for (r, mu) in targets.mu.iter().enumerate() {
        if !mu.is_integer() {
            return Feasibility {
                feasible: false,
                reason: format!("non-integer {} target {}", NAMES[r], mu),
            };
        }
    }
    Feasibility { feasible: true, reason: String::new() }
}

/// Exact targets by direct summation; the oracle for [`target_moments`].
pub fn target_moments_by_summation(spec: &ProblemSpec) -> TargetVector {
    let model = spec.model();
    let m: u64 = spec.population().expect("population too large for summation");
    let mut sums = vec![BigInt::zero(); spec.dimension()];
    for i in 1..=m {
        for (r, s) in sums.iter_mut().enumerate() {
            *s += weight(r as u32, i);
        }
    }
    TargetVector {
        mu: sums.into_iter().map(|s| &model.beta * BigRational::from_integer(s)).collect(),
    }
}
