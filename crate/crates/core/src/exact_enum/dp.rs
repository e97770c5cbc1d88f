use std::env;

use num_bigint::BigUint;
use num_integer::binomial;
use rayon::prelude::*;

use super::{BigCount, CountQuery, EnumError};
use crate::problem_model::weight;

/// Limits and threading for [`count_dp`].
///
/// The state space is measured as table cells times items processed, which is
/// the number of cell updates in the worst case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpConfig {
    pub cap: u128,
    /// Bytes the counter table may occupy.
    pub memory_cap: u128,
    /// `None` reads `MAGICSER_THREADS`, falling back to the rayon default.
    pub threads: Option<usize>,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig { cap: 2_000_000_000, memory_cap: 1 << 31, threads: None }
    }
}

impl DpConfig {
    pub fn for_degree(degree: u32) -> Self {
        let cap = match degree {
            1 => 2_000_000_000,
            2 => 500_000_000,
            _ => 100_000_000,
        };
        DpConfig { cap, ..DpConfig::default() }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    fn thread_count(&self) -> usize {
        self.threads
            .or_else(|| env::var("MAGICSER_THREADS").ok().and_then(|s| s.trim().parse().ok()))
            .filter(|&t| t > 0)
            .unwrap_or_else(rayon::current_num_threads)
    }
}

fn table_cells(query: &CountQuery) -> u128 {
    query.targets.iter().map(|&t| t as u128 + 1).product::<u128>() * (query.size as u128 + 1)
}

fn limbs_for(m: usize, size: usize) -> usize {
    (binomial(BigUint::from(m), BigUint::from(size)).bits() as usize + 1).div_ceil(64)
}

/// Cell updates the DP would need for `query`.
pub fn dp_state_space(query: &CountQuery) -> u128 {
    table_cells(query) * query.m as u128
}

/// Checks both the work cap and the table memory cap.
pub fn dp_fits(query: &CountQuery, config: &DpConfig) -> Result<(), EnumError> {
    let needed = dp_state_space(query);
    if needed > config.cap {
        return Err(EnumError::ResourceLimit { needed, cap: config.cap });
    }
    let bytes = table_cells(query) * limbs_for(query.m, query.size) as u128 * 8;
    if bytes > config.memory_cap {
        return Err(EnumError::MemoryLimit { bytes, cap: config.memory_cap });
    }
    Ok(())
}

struct Layout {
    ext: Vec<usize>,
    stride: Vec<usize>,
    layer: usize,
    limbs: usize,
}

impl Layout {
    fn new(targets: &[u64], limbs: usize) -> Self {
        let ext: Vec<usize> = targets.iter().map(|&t| t as usize + 1).collect();
        let mut stride = vec![limbs; ext.len()];
        for r in (0..ext.len() - 1).rev() {
            stride[r] = stride[r + 1] * ext[r + 1];
        }
        let layer = stride[0] * ext[0];
        Layout { ext, stride, layer, limbs }
    }
}

fn add_into(dst: &mut [u64], src: &[u64]) {
    let mut carry = false;
    for (d, &s) in dst.iter_mut().zip(src) {
        let (v, c1) = d.overflowing_add(s);
        let (v, c2) = v.overflowing_add(carry as u64);
        *d = v;
        carry = c1 || c2;
    }
}

/// Adds the shifted source window into one destination row (fixed first index).
fn update_row(dst: &mut [u64], src: &[u64], lay: &Layout, lo: &[u64], hi: &[u64], w: &[u64]) {
    let dims = lay.ext.len();
    let l = lay.limbs;
    if dims == 1 {
        add_into(dst, src);
        return;
    }
    // odometer over dims 1..dims-1 (all but the last), last dim contiguous
    let last = dims - 1;
    let mut idx: Vec<u64> = lo[1..last].to_vec();
    loop {
        let mut d_off = 0;
        let mut s_off = 0;
        for (k, &v) in idx.iter().enumerate() {
            d_off += v as usize * lay.stride[k + 1];
            s_off += (v - w[k + 1]) as usize * lay.stride[k + 1];
        }
        let (a, b) = (lo[last] as usize, hi[last] as usize);
        let s0 = s_off + (a - w[last] as usize) * l;
        let d0 = d_off + a * l;
        let len = (b - a + 1) * l;
        if l == 1 {
            for (d, s) in dst[d0..d0 + len].iter_mut().zip(&src[s0..s0 + len]) {
                *d = d.wrapping_add(*s);
            }
        } else {
            for c in 0..=b - a {
                add_into(&mut dst[d0 + c * l..d0 + (c + 1) * l], &src[s0 + c * l..s0 + (c + 1) * l]);
            }
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if idx[k] < hi[k + 1] {
                idx[k] += 1;
                for j in k + 1..idx.len() {
                    idx[j] = lo[j + 1];
                }
                break;
            }
        }
    }
}

/// Counts subsets with a layered dynamic program over items `1..=m`.
///
/// Layer `s` holds, for every partial weight-sum vector, the number of
/// `s`-subsets of the items seen so far. Counters are fixed-width multi-limb
/// integers sized to hold `C(m, size)`.
pub fn count_dp(query: &CountQuery, config: &DpConfig) -> Result<BigCount, EnumError> {
    query.validate()?;
    if !query.in_range() {
        return Ok(BigCount::zero());
    }
    dp_fits(query, config)?;
    let (m, size) = (query.m, query.size);
    let limbs = limbs_for(m, size);
    let lay = Layout::new(&query.targets, limbs);
    let dims = lay.ext.len();
    let mut table = vec![0u64; lay.layer * (size + 1)];
    table[0] = 1;

    // prefix[r][i] = w_r(1) + ... + w_r(i)
    let prefix: Vec<Vec<u64>> = (1..=dims as u32)
        .map(|r| {
            let mut p = vec![0u64; m + 1];
            for i in 1..=m {
                p[i] = p[i - 1] + weight(r, i as u64);
            }
            p
        })
        .collect();

    let threads = config.thread_count();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| EnumError::InvalidQuery(format!("thread pool: {e}")))?;

    let mut lo = vec![0u64; dims];
    let mut hi = vec![0u64; dims];
    for i in 1..=m {
        let w: Vec<u64> = (1..=dims as u32).map(|r| weight(r, i as u64)).collect();
        let s_min = size.saturating_sub(m - i).max(1);
        for s in (s_min..=size.min(i)).rev() {
            // destination sums must include item i, s-1 earlier items, and leave
            // room for size-s later ones
            let mut empty = false;
            for r in 0..dims {
                let p = &prefix[r];
                let t = query.targets[r];
                let later_max = p[m] - p[m - (size - s)];
                let later_min = p[i + size - s] - p[i];
                let lo_r = (w[r] + p[s - 1]).max(t.saturating_sub(later_max));
                let hi_r = (w[r] + p[i - 1] - p[i - s]).min(t.saturating_sub(later_min));
                if lo_r > hi_r || t < later_min {
                    empty = true;
                    break;
                }
                lo[r] = lo_r;
                hi[r] = hi_r;
            }
            if empty {
                continue;
            }
            let (below, above) = table.split_at_mut(s * lay.layer);
            let src = &below[(s - 1) * lay.layer..];
            let dst = &mut above[..lay.layer];
            let row = lay.stride[0];
            let rows = (lo[0] as usize)..=(hi[0] as usize);
            let work = (hi[0] - lo[0] + 1) as usize * (lay.layer / lay.ext[0]);
            let run = |(t0, drow): (usize, &mut [u64])| {
                let s0 = (t0 - w[0] as usize) * row;
                update_row(drow, &src[s0..s0 + row], &lay, &lo, &hi, &w);
            };
            if threads > 1 && work >= 1 << 14 {
                pool.install(|| {
                    dst.par_chunks_mut(row)
                        .enumerate()
                        .filter(|(t0, _)| rows.contains(t0))
                        .for_each(run)
                });
            } else {
                dst.chunks_mut(row).enumerate().filter(|(t0, _)| rows.contains(t0)).for_each(run);
            }
        }
    }

    let mut off = size * lay.layer;
    for (r, &t) in query.targets.iter().enumerate() {
        off += t as usize * lay.stride[r];
    }
    let cell = &table[off..off + limbs];
    let digits: Vec<u32> = cell.iter().flat_map(|&x| [x as u32, (x >> 32) as u32]).collect();
    Ok(BigCount(BigUint::from_slice(&digits)))
}
