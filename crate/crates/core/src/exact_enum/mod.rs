//! Exact counts of subsets of `1..=m` with prescribed size and weight sums.
//!
//! Three independent routes: a layered big-integer DP ([`count_dp`]), brute
//! force ([`count_exhaustive`]), and inversion of the characteristic
//! function on a grid of roots of unity ([`count_dft`]).

mod dft;
mod dp;
mod exhaustive;

pub use dft::{count_dft, DftConfig, DftGrid};
pub use dp::{count_dp, dp_fits, dp_state_space, DpConfig};
pub use exhaustive::{count_exhaustive, DEFAULT_ENUMERATION_CAP};

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::problem_model::{check_feasibility, target_moments, ProblemSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnumError {
    #[error("DP state space of {needed} cell updates exceeds the cap of {cap}")]
    ResourceLimit { needed: u128, cap: u128 },
    #[error("DP table of {bytes} bytes exceeds the memory cap of {cap}")]
    MemoryLimit { bytes: u128, cap: u128 },
    #[error("enumeration of {combinations} subsets exceeds the cap of {cap}")]
    EnumerationCap { combinations: u128, cap: u128 },
    #[error("DFT inversion limited to m <= {cap}, got m = {m}")]
    DftCap { m: usize, cap: usize },
    #[error("DFT result {value} is {gap:e} away from the nearest integer")]
    Precision { value: f64, gap: f64 },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
}

/// Exact nonnegative count; serialized as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::str::FromStr for BigCount {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<BigUint>().map(BigCount)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Subsets of `1..=m` with `size` elements whose weight sums hit `targets`.
///
/// `targets[r - 1]` is the required value of `sum C(i, r)`; one to three
/// targets (sum, pair weight, triple weight).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountQuery {
    pub m: usize,
    pub size: usize,
    pub targets: Vec<u64>,
}

impl CountQuery {
    pub fn new(m: usize, size: usize, targets: Vec<u64>) -> Self {
        CountQuery { m, size, targets }
    }

    pub fn validate(&self) -> Result<(), EnumError> {
        if self.size > self.m {
            return Err(EnumError::InvalidQuery(format!("size {} exceeds m = {}", self.size, self.m)));
        }
        if !(1..=3).contains(&self.targets.len()) {
            return Err(EnumError::InvalidQuery(format!("expected 1 to 3 targets, got {}", self.targets.len())));
        }
        Ok(())
    }

    /// Smallest and largest attainable value of each weight sum.
    pub fn attainable(&self) -> Vec<(u64, u64)> {
        (1..=self.targets.len() as u32)
            .map(|r| {
                let lo = (1..=self.size as u64).map(|i| crate::problem_model::weight(r, i)).sum();
                let hi = ((self.m - self.size + 1) as u64..=self.m as u64)
                    .map(|i| crate::problem_model::weight(r, i))
                    .sum();
                (lo, hi)
            })
            .collect()
    }

    pub fn in_range(&self) -> bool {
        self.size == 0 && self.targets.iter().all(|&t| t == 0)
            || self.size > 0 && self.attainable().iter().zip(&self.targets).all(|(&(lo, hi), &t)| lo <= t && t <= hi)
    }
}

/// The counting query for a problem instance, or `None` if it is infeasible.
pub fn series_query(spec: &ProblemSpec) -> Result<Option<CountQuery>, EnumError> {
    if !check_feasibility(spec).feasible {
        return Ok(None);
    }
    let m = spec
        .population()
        .and_then(|m| usize::try_from(m).ok())
        .ok_or_else(|| EnumError::InvalidQuery("population size does not fit in memory".into()))?;
    let targets = target_moments(spec);
    let as_u64 = |x: &num_rational::BigRational| {
        x.to_integer().to_u64().ok_or_else(|| EnumError::InvalidQuery("target too large".into()))
    };
    let tail = targets.mu[1..].iter().map(as_u64).collect::<Result<Vec<_>, _>>()?;
    Ok(Some(CountQuery::new(m, spec.n as usize, tail)))
}

/// Number of series for a problem instance; 0 when infeasible.
pub fn count_series(spec: &ProblemSpec, config: &DpConfig) -> Result<BigCount, EnumError> {
    match series_query(spec)? {
        None => Ok(BigCount::zero()),
        Some(q) => count_dp(&q, config),
    }
}
