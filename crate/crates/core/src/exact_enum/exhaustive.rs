use num_integer::binomial;
use rayon::prelude::*;

use super::{BigCount, CountQuery, EnumError};

pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

fn weights(i: u64) -> [u64; 3] {
    [i, i * (i - 1) / 2, i * (i - 1) * i.saturating_sub(2) / 6]
}

fn walk(next: u64, m: u64, left: usize, sums: [u64; 3], targets: &[u64]) -> u64 {
    if left == 0 {
        return targets.iter().enumerate().all(|(r, &t)| sums[r] == t) as u64;
    }
    let mut count = 0;
    for i in next..=m {
        let w = weights(i);
        let s = [sums[0] + w[0], sums[1] + w[1], sums[2] + w[2]];
        count += walk(i + 1, m, left - 1, s, targets);
    }
    count
}

/// Counts by visiting every `size`-subset of `1..=m`.
pub fn count_exhaustive(query: &CountQuery, cap: u128) -> Result<BigCount, EnumError> {
    query.validate()?;
    let combinations = binomial(query.m as u128, query.size as u128);
    if combinations > cap {
        return Err(EnumError::EnumerationCap { combinations, cap });
    }
    let m = query.m as u64;
    if query.size == 0 {
        return Ok(BigCount::from(walk(1, m, 0, [0; 3], &query.targets)));
    }
    let total: u64 = (1..=m)
        .into_par_iter()
        .map(|first| walk(first + 1, m, query.size - 1, weights(first), &query.targets))
        .sum();
    Ok(BigCount::from(total))
}
