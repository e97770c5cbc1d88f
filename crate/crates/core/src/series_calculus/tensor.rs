use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::series::Rational;

/// Fully symmetric tensor over `d` axes, stored once per index multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymTensor {
    d: usize,
    rank: usize,
    values: BTreeMap<Vec<usize>, Rational>,
}

impl SymTensor {
    /// Builds a tensor from a function of the per-axis counts `n_r`.
    pub fn from_counts(d: usize, rank: usize, f: impl Fn(&[usize]) -> Rational) -> Self {
        let values = count_vectors(d, rank)
            .into_iter()
            .map(|counts| (counts_to_indices(&counts), f(&counts)))
            .collect();
        SymTensor { d, rank, values }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Component at an arbitrary (unsorted) index tuple.
    pub fn get(&self, indices: &[usize]) -> Rational {
        assert_eq!(indices.len(), self.rank, "wrong number of indices");
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.values.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn get_counts(&self, counts: &[usize]) -> Rational {
        self.values.get(&counts_to_indices(counts)).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(sorted indices, value)` for every stored multiset.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.values.iter()
    }
}

pub fn counts_to_indices(counts: &[usize]) -> Vec<usize> {
    counts.iter().enumerate().flat_map(|(axis, &n)| std::iter::repeat(axis).take(n)).collect()
}

pub fn indices_to_counts(d: usize, indices: &[usize]) -> Vec<usize> {
    let mut counts = vec![0; d];
    for &i in indices {
        counts[i] += 1;
    }
    counts
}

/// All `d`-component count vectors summing to `total`.
pub fn count_vectors(d: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == d {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for n in (0..=left).rev() {
            cur.push(n);
            rec(d, left - n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    rec(d, total, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Number of distinct index tuples with the given counts: `k! / prod n_r!`.
pub fn multinomial(counts: &[usize]) -> Rational {
    let mut total = 0u64;
    let mut value = Rational::one();
    for &n in counts {
        for j in 1..=n as u64 {
            total += 1;
            value = value * Rational::from_integer(total.into()) / Rational::from_integer(j.into());
        }
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_vector_enumeration() {
        assert_eq!(count_vectors(2, 3).len(), 4);
        assert_eq!(count_vectors(4, 3).len(), 20);
        assert_eq!(count_vectors(4, 6).len(), 84);
        let total: Rational = count_vectors(3, 4).iter().map(|c| multinomial(c)).sum();
        assert_eq!(total, Rational::from_integer(81.into()));
    }
}
