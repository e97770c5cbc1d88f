//! Dense truncated power series and polynomials in `beta`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Ring of series coefficients.
pub trait Coeff:
    Clone + PartialEq + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_rational(r: Rational) -> Self;
    fn scale(&self, r: &Rational) -> Self;
}

impl Coeff for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
}

/// Polynomial in `beta` with rational coefficients, ascending powers.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BetaPoly {
    coeffs: Vec<Rational>,
}

impl BetaPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BetaPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        BetaPoly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        BetaPoly::new(vec![c])
    }

    /// The monomial `beta`.
    pub fn beta() -> Self {
        BetaPoly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn truncate(&self, order: usize) -> Self {
        BetaPoly::new(self.coeffs.iter().take(order + 1).cloned().collect())
    }

    /// Divides by `beta`; the constant term must vanish.
    pub fn div_beta(&self) -> Option<Self> {
        match self.coeffs.first() {
            None => Some(BetaPoly::default()),
            Some(c) if c.is_zero() => Some(BetaPoly::new(self.coeffs[1..].to_vec())),
            Some(_) => None,
        }
    }

    pub fn eval(&self, beta: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * beta + c)
    }
}

impl Zero for BetaPoly {
    fn zero() -> Self {
        BetaPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl Add for BetaPoly {
    type Output = BetaPoly;
    fn add(self, rhs: BetaPoly) -> BetaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BetaPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for BetaPoly {
    type Output = BetaPoly;
    fn sub(self, rhs: BetaPoly) -> BetaPoly {
        self + (-rhs)
    }
}

impl Neg for BetaPoly {
    type Output = BetaPoly;
    fn neg(self) -> BetaPoly {
        BetaPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for BetaPoly {
    type Output = BetaPoly;
    fn mul(self, rhs: BetaPoly) -> BetaPoly {
        if self.is_zero() || rhs.is_zero() {
            return BetaPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BetaPoly::new(out)
    }
}

impl Coeff for BetaPoly {
    fn from_rational(r: Rational) -> Self {
        BetaPoly::constant(r)
    }
    fn scale(&self, r: &Rational) -> Self {
        BetaPoly::new(self.coeffs.iter().map(|c| c * r).collect())
    }
}

impl fmt::Display for BetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (p, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match p {
                0 => {}
                1 => write!(f, "b")?,
                _ => write!(f, "b^{p}")?,
            }
        }
        Ok(())
    }
}

/// Power series truncated after `x^order`.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Series { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Series::new(Vec::new(), order);
        s.coeffs[0] = C::from_rational(Rational::one());
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> &C {
        &self.coeffs[power]
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Series { coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut out = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series { coeffs: out }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        Series {
            coeffs: (0..=order).map(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone()).collect(),
        }
    }

    fn assert_no_constant(&self) {
        assert!(self.coeffs[0].is_zero(), "series must have zero constant term");
    }

    /// `sum_n c_n h^n` for a series `h` with zero constant term.
    fn substitute_into(&self, weights: impl Fn(usize) -> Rational) -> Self {
        self.assert_no_constant();
        let order = self.order();
        let mut result = Series::new(vec![C::from_rational(weights(0))], order);
        let mut power = Series::one(order);
        for n in 1..=order {
            power = power.mul(self);
            result = result.add(&power.scale(&weights(n)));
        }
        result
    }

    /// `ln(1 + h)`.
    pub fn ln1p(&self) -> Self {
        self.substitute_into(|n| match n {
            0 => Rational::zero(),
            _ if n % 2 == 1 => rat(1, n as i64),
            _ => rat(-1, n as i64),
        })
    }

    /// `exp(h)`.
    pub fn exp(&self) -> Self {
        self.substitute_into(|n| Rational::new(BigInt::one(), factorial(n as u64)))
    }

    /// `(1 + h)^r` for rational `r`.
    pub fn binomial_pow(&self, r: &Rational) -> Self {
        let r = r.clone();
        self.substitute_into(move |n| {
            let mut c = Rational::one();
            for k in 0..n {
                c = c * (&r - int(k as i64)) / int(k as i64 + 1);
            }
            c
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(v: &[(i64, i64)], order: usize) -> Series<Rational> {
        Series::new(v.iter().map(|&(n, d)| rat(n, d)).collect(), order)
    }

    #[test]
    fn exp_of_log_is_identity() {
        let h = rs(&[(0, 1), (1, 3), (-2, 5), (7, 11)], 6);
        let back = h.ln1p().exp();
        let expected = Series::one(6).add(&h);
        assert_eq!(back, expected);
    }

    #[test]
    fn binomial_pow_matches_repeated_product() {
        let h = rs(&[(0, 1), (-1, 1)], 5);
        let cube = h.binomial_pow(&int(3));
        assert_eq!(cube.coeffs()[..4], [int(1), int(-3), int(3), int(-1)]);
        let inv_sqrt = h.binomial_pow(&rat(-1, 2));
        let sq = inv_sqrt.mul(&inv_sqrt);
        // (1 - x)^(-1) = 1 + x + x^2 + ...
        assert!(sq.coeffs().iter().all(|c| *c == int(1)));
    }

    #[test]
    fn beta_poly_display_and_trim() {
        let p = BetaPoly::from_ints(&[1, -3, 2, 0, 0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "1 - 3*b + 2*b^2");
        assert_eq!(BetaPoly::from_ints(&[0, 0]).to_string(), "0");
        assert_eq!(p.eval(&rat(1, 2)), int(0));
    }
}
