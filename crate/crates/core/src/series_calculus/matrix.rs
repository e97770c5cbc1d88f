//! Small dense matrices over the rationals.

use std::fmt;

use num_traits::{One, Zero};

use super::series::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        RatMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        RatMatrix { n, entries: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        RatMatrix::from_fn(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, rhs.n);
        RatMatrix::from_fn(self.n, |i, j| {
            (0..self.n).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * rhs.get(k, j))
        })
    }

    pub fn scale(&self, r: &Rational) -> RatMatrix {
        RatMatrix { n: self.n, entries: self.entries.iter().map(|e| e * r).collect() }
    }

    /// Determinant by fraction-exact Gaussian elimination.
    pub fn det(&self) -> Rational {
        let n = self.n;
        let mut a = self.rows();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let p = a[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] / &p;
                for c in col..n {
                    let sub = &factor * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.n;
        let mut a = self.rows();
        let mut inv = RatMatrix::identity(n).rows();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(pivot, col);
            inv.swap(pivot, col);
            let p = a[col][col].clone();
            for c in 0..n {
                a[col][c] /= &p;
                inv[col][c] /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    let s1 = &factor * &a[col][c];
                    a[r][c] -= s1;
                    let s2 = &factor * &inv[col][c];
                    inv[r][c] -= s2;
                }
            }
        }
        Some(RatMatrix::from_rows(inv))
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
