use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{BigCount, CountQuery, EnumError};
use crate::precise::{bits_for_digits, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct DftConfig {
    pub max_m: usize,
    /// Inclusion probability of the generating function; any value in (0, 1) works.
    pub beta: BigRational,
    /// Significant decimal digits carried through the accumulation.
    pub digits: u32,
}

impl Default for DftConfig {
    fn default() -> Self {
        DftConfig { max_m: 30, beta: BigRational::new(1.into(), 2.into()), digits: 30 }
    }
}

type Cx = (BigInt, BigInt);

fn shr_round(x: BigInt, k: u32) -> BigInt {
    (x + (BigInt::one() << (k - 1))) >> k
}

fn cmul(a: &Cx, b: &Cx, bits: u32) -> Cx {
    let re = &a.0 * &b.0 - &a.1 * &b.1;
    let im = &a.0 * &b.1 + &a.1 * &b.0;
    (shr_round(re, bits), shr_round(im, bits))
}

fn conj(a: &Cx) -> Cx {
    (a.0.clone(), -&a.1)
}

fn cadd(acc: &mut Cx, x: &Cx) {
    acc.0 += &x.0;
    acc.1 += &x.1;
}

/// Characteristic function of size and sum sampled on the full grid of roots
/// of unity for one population size, reusable across queries.
pub struct DftGrid {
    m: usize,
    g1: usize,
    g2: usize,
    bits: u32,
    beta: BigRational,
    roots: Vec<Cx>,
    f: Vec<Cx>,
}

impl DftGrid {
    pub fn new(m: usize, config: &DftConfig) -> Result<Self, EnumError> {
        if m > config.max_m {
            return Err(EnumError::DftCap { m, cap: config.max_m });
        }
        let beta = config.beta.clone();
        if !(beta > BigRational::zero() && beta < BigRational::one()) {
            return Err(EnumError::InvalidQuery(format!("beta = {beta} outside (0, 1)")));
        }
        let g1 = m + 1;
        let g2 = m * (m + 1) / 2 + 1;
        let l = g1 * g2;
        let inv_min = (BigRational::one() / beta.clone()).max(BigRational::one() / (BigRational::one() - &beta));
        let scale_bits = (inv_min.to_f64().unwrap_or(2.0).log2() * m as f64).ceil() as u32;
        let log_l = usize::BITS - l.leading_zeros();
        let bits = bits_for_digits(config.digits) + scale_bits + 2 * log_l + 16;

        // roots[t] = exp(2 pi i t / l), built from exact coarse and fine tables
        const STEP: usize = 64;
        let exact = |t: usize| {
            let (c, s) = Real::cos_sin_turn(t as i64, l as i64, bits);
            (c.raw().clone(), s.raw().clone())
        };
        let fine: Vec<Cx> = (0..STEP).into_par_iter().map(exact).collect();
        let coarse: Vec<Cx> = (0..l.div_ceil(STEP)).into_par_iter().map(|q| exact(q * STEP)).collect();
        let roots: Vec<Cx> = (0..l).into_par_iter().map(|t| cmul(&coarse[t / STEP], &fine[t % STEP], bits)).collect();

        let b_raw = Real::from_ratio(&beta, bits).raw().clone();
        let q_raw = Real::from_ratio(&(BigRational::one() - &beta), bits).raw().clone();
        let f: Vec<Cx> = (0..l)
            .into_par_iter()
            .map(|idx| {
                let (a, b) = (idx / g2, idx % g2);
                let mut acc: Cx = (BigInt::one() << bits, BigInt::zero());
                for j in 1..=m {
                    let w = &roots[(a * g2 + b * j * g1) % l];
                    let factor = (&q_raw + shr_round(&b_raw * &w.0, bits), shr_round(&b_raw * &w.1, bits));
                    acc = cmul(&acc, &factor, bits);
                }
                acc
            })
            .collect();
        Ok(DftGrid { m, g1, g2, bits, beta, roots, f })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn h(&self, size: usize) -> Vec<Cx> {
        let l = self.roots.len();
        (0..self.g2)
            .into_par_iter()
            .map(|b| {
                let mut acc: Cx = (BigInt::zero(), BigInt::zero());
                for a in 0..self.g1 {
                    let w = conj(&self.roots[(a * size * self.g2) % l]);
                    cadd(&mut acc, &cmul(&w, &self.f[a * self.g2 + b], self.bits));
                }
                acc
            })
            .collect()
    }

    fn finish(&self, h: &[Cx], size: usize, sum: u64) -> Result<BigCount, EnumError> {
        if sum as usize >= self.g2 {
            return Ok(BigCount::zero());
        }
        let l = self.roots.len();
        let mut re = BigInt::zero();
        for (b, hb) in h.iter().enumerate() {
            let w = conj(&self.roots[(b * sum as usize * self.g1) % l]);
            re += &w.0 * &hb.0 - &w.1 * &hb.1;
        }
        let p = Real::from_raw(shr_round(re, self.bits), self.bits).div_int(l as i64);
        let one = BigRational::one();
        let weight = num_traits::pow(self.beta.clone(), size) * num_traits::pow(&one - &self.beta, self.m - size);
        let value = p.div(&Real::from_ratio(&weight, self.bits));
        let half = Real::from_ratio(&BigRational::new(1.into(), 2.into()), self.bits);
        let nearest = (value.clone() + half).floor();
        let gap = (value.clone() - Real::from_int(nearest.clone(), self.bits)).abs().to_f64();
        if gap > 1e-3 || nearest.is_negative() {
            return Err(EnumError::Precision { value: value.to_f64(), gap });
        }
        Ok(BigCount(nearest.to_biguint().unwrap_or_else(BigUint::zero)))
    }

    /// Number of `size`-subsets of `1..=m` summing to `sum`.
    pub fn count(&self, size: usize, sum: u64) -> Result<BigCount, EnumError> {
        self.counts_for_size(size, &[sum]).map(|mut v| v.remove(0))
    }

    pub fn counts_for_size(&self, size: usize, sums: &[u64]) -> Result<Vec<BigCount>, EnumError> {
        if size > self.m {
            return Err(EnumError::InvalidQuery(format!("size {size} exceeds m = {}", self.m)));
        }
        let h = self.h(size);
        sums.iter().map(|&s| self.finish(&h, size, s)).collect()
    }
}

/// Single-query DFT inversion; only the size and sum constraints are supported.
pub fn count_dft(query: &CountQuery, config: &DftConfig) -> Result<BigCount, EnumError> {
    query.validate()?;
    if query.targets.len() != 1 {
        return Err(EnumError::InvalidQuery("DFT inversion supports a single sum target".into()));
    }
    DftGrid::new(query.m, config)?.count(query.size, query.targets[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_enum::{count_dp, DpConfig};

    #[test]
    fn small_magic_series() {
        let cfg = DftConfig::default();
        assert_eq!(count_dft(&CountQuery::new(9, 3, vec![15]), &cfg).unwrap(), BigCount::from(8));
        assert_eq!(count_dft(&CountQuery::new(16, 4, vec![34]), &cfg).unwrap(), BigCount::from(86));
    }

    #[test]
    fn grid_agrees_with_dp() {
        let grid = DftGrid::new(12, &DftConfig::default()).unwrap();
        for a in 0..=12 {
            let sums: Vec<u64> = (0..=78).collect();
            let got = grid.counts_for_size(a, &sums).unwrap();
            for (s, g) in sums.iter().zip(got) {
                let q = CountQuery::new(12, a, vec![*s]);
                assert_eq!(g, count_dp(&q, &DpConfig::default()).unwrap(), "{q:?}");
            }
        }
    }

    #[test]
    fn other_beta() {
        let cfg = DftConfig { beta: BigRational::new(1.into(), 5.into()), ..DftConfig::default() };
        assert_eq!(count_dft(&CountQuery::new(25, 5, vec![65]), &cfg).unwrap(), BigCount::from(1394));
    }

    #[test]
    fn cap_enforced() {
        let q = CountQuery::new(31, 3, vec![40]);
        assert!(matches!(count_dft(&q, &DftConfig::default()), Err(EnumError::DftCap { .. })));
    }
}
