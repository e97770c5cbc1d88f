//! Binary fixed-point reals backed by big integers.
//!
//! A [`Real`] stores `raw / 2^bits`. All operands of a binary operation must
//! share the same number of fraction bits; the transcendental functions run
//! with extra guard bits internally and round back. Magnitudes in this crate
//! stay small (everything large is handled in log space), so fixed point is
//! enough and keeps the arithmetic exact up to the last fraction bit.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const GUARD_BITS: u32 = 32;

/// Fraction bits needed for `digits` significant decimal digits plus headroom.
pub fn bits_for_digits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

#[derive(Clone, PartialEq, Eq)]
pub struct Real {
    raw: BigInt,
    bits: u32,
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e}, bits={})", self.to_f64(), self.bits)
    }
}

fn round_shift(value: BigInt, shift: u32) -> BigInt {
    if shift == 0 {
        return value;
    }
    let half = BigInt::one() << (shift - 1);
    if value.is_negative() {
        -((-value + half) >> shift)
    } else {
        (value + half) >> shift
    }
}

fn round_div(num: BigInt, den: &BigInt) -> BigInt {
    // Rounds half away from zero.
    let (q, r) = num.div_rem(den);
    let twice = r.abs() << 1;
    if twice >= den.abs() {
        if num.sign() == den.sign() || q.is_positive() {
            q + 1
        } else if num.is_zero() {
            q
        } else {
            q - 1
        }
    } else {
        q
    }
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real { raw: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        Real { raw: BigInt::one() << bits, bits }
    }

    pub fn from_raw(raw: BigInt, bits: u32) -> Self {
        Real { raw, bits }
    }

    pub fn from_int<T: Into<BigInt>>(value: T, bits: u32) -> Self {
        Real { raw: value.into() << bits, bits }
    }

    pub fn from_ratio(value: &BigRational, bits: u32) -> Self {
        let num = value.numer().clone() << bits;
        Real { raw: round_div(num, value.denom()), bits }
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_negative(&self) -> bool {
        self.raw.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    /// Changes the number of fraction bits, rounding when shrinking.
    pub fn with_bits(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Real { raw: &self.raw << (bits - self.bits), bits },
            Ordering::Less => Real { raw: round_shift(self.raw.clone(), self.bits - bits), bits },
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Real { raw: &self.raw * k, bits: self.bits }
    }

    pub fn div_int(&self, k: i64) -> Self {
        Real { raw: round_div(self.raw.clone(), &BigInt::from(k)), bits: self.bits }
    }

    pub fn mul_ratio(&self, r: &BigRational) -> Self {
        Real { raw: round_div(&self.raw * r.numer(), r.denom()), bits: self.bits }
    }

    pub fn shl(&self, k: u32) -> Self {
        Real { raw: &self.raw << k, bits: self.bits }
    }

    pub fn div(&self, other: &Real) -> Self {
        assert_eq!(self.bits, other.bits, "fraction bit mismatch");
        assert!(!other.raw.is_zero(), "division by zero");
        Real { raw: round_div(&self.raw << self.bits, &other.raw), bits: self.bits }
    }

    pub fn abs(&self) -> Self {
        Real { raw: self.raw.abs(), bits: self.bits }
    }

    pub fn floor(&self) -> BigInt {
        // Arithmetic shift floors toward negative infinity.
        &self.raw >> self.bits
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 64 fraction bits for the conversion.
        let keep = self.bits.min(64);
        let shifted = round_shift(self.raw.clone(), self.bits - keep);
        shifted.to_f64().unwrap_or(f64::NAN) / 2f64.powi(keep as i32)
    }

    /// Exact value as a rational.
    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.raw.clone(), BigInt::one() << self.bits)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.raw.is_negative(), "sqrt of negative value");
        Real { raw: (&self.raw << self.bits).sqrt(), bits: self.bits }
    }

    /// π by Machin's formula.
    pub fn pi(bits: u32) -> Self {
        let w = bits + GUARD_BITS;
        let a = atan_inv(5, w).mul_int(16);
        let b = atan_inv(239, w).mul_int(4);
        (a - b).with_bits(bits)
    }

    pub fn ln2(bits: u32) -> Self {
        let w = bits + GUARD_BITS;
        // ln 2 = 2 atanh(1/3)
        atanh_ratio(&BigInt::one(), &BigInt::from(3), w).mul_int(2).with_bits(bits)
    }

    pub fn ln10(bits: u32) -> Self {
        Real::ln_ratio(&BigRational::from_integer(BigInt::from(10)), bits)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Self {
        assert!(self.raw.is_positive(), "ln of non-positive value");
        let w = self.bits + GUARD_BITS;
        let x = self.with_bits(w);
        // x = 2^k * y with y in [1, 2)
        let k = x.raw.bits() as i64 - 1 - w as i64;
        let y_raw = if k >= 0 { &x.raw >> (k as u64) } else { &x.raw << ((-k) as u64) };
        let one = BigInt::one() << w;
        let num = &y_raw - &one;
        let den = &y_raw + &one;
        let t = Real { raw: round_div(num << w, &den), bits: w };
        let ln_y = atanh_small(&t).mul_int(2);
        let result = Real::ln2(w).mul_int(k) + ln_y;
        result.with_bits(self.bits)
    }

    /// Natural logarithm of a positive rational, without first rounding it.
    pub fn ln_ratio(value: &BigRational, bits: u32) -> Self {
        assert!(value.is_positive(), "ln of non-positive value");
        let w = bits + GUARD_BITS;
        let ln_num = ln_bigint(value.numer(), w);
        let ln_den = ln_bigint(value.denom(), w);
        (ln_num - ln_den).with_bits(bits)
    }

    pub fn exp(&self) -> Self {
        let w = self.bits + GUARD_BITS;
        let x = self.with_bits(w);
        let ln2 = Real::ln2(w);
        // x = n ln2 + r
        let n = round_div(x.raw.clone(), &ln2.raw);
        let n_i64 = n.to_i64().expect("exponent argument out of range");
        let r = x - ln2.mul_int(n_i64);
        // Scale down so the Taylor series converges quickly, then square back.
        let squarings = 12u32;
        let ws = w + squarings;
        // Same raw integer with more fraction bits is exactly r / 2^squarings.
        let scaled = Real { raw: r.raw, bits: ws };
        let mut sum = Real::one(ws);
        let mut term = Real::one(ws);
        let mut k = 1i64;
        loop {
            term = (&term * &scaled).div_int(k);
            if term.raw.is_zero() {
                break;
            }
            sum = sum + term.clone();
            k += 1;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        let sum = sum.with_bits(w);
        let result = if n_i64 >= 0 {
            Real { raw: sum.raw << (n_i64 as u64), bits: w }
        } else {
            Real { raw: round_shift(sum.raw, (-n_i64) as u32), bits: w }
        };
        result.with_bits(self.bits)
    }

    /// `(cos θ, sin θ)` for `θ = 2π · num / den`.
    pub fn cos_sin_turn(num: i64, den: i64, bits: u32) -> (Real, Real) {
        let w = bits + GUARD_BITS;
        let reduced = num.rem_euclid(den);
        let theta = Real::pi(w).mul_int(2 * reduced).div_int(den);
        // Halve the angle until small, then use double-angle formulas.
        let halvings = 8u32;
        let wh = w + halvings;
        let small = Real { raw: theta.raw, bits: wh };
        let sq = &small * &small;
        let mut cos = Real::one(wh);
        let mut sin = small.clone();
        let mut cterm = Real::one(wh);
        let mut sterm = small;
        let mut k = 1i64;
        loop {
            cterm = -(&cterm * &sq).div_int((2 * k - 1) * (2 * k));
            sterm = -(&sterm * &sq).div_int((2 * k) * (2 * k + 1));
            if cterm.raw.is_zero() && sterm.raw.is_zero() {
                break;
            }
            cos = cos + cterm.clone();
            sin = sin + sterm.clone();
            k += 1;
        }
        for _ in 0..halvings {
            let s2 = (&sin * &cos).mul_int(2);
            let c2 = &(&cos * &cos) - &(&sin * &sin);
            cos = c2;
            sin = s2;
        }
        (cos.with_bits(bits), sin.with_bits(bits))
    }
}

/// atan(1/n) by its Taylor series.
fn atan_inv(n: i64, bits: u32) -> Real {
    let n2 = BigInt::from(n * n);
    let mut power = round_div(BigInt::one() << bits, &BigInt::from(n));
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = round_div(power, &n2);
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    Real { raw: sum, bits }
}

/// atanh(p/q) for |p/q| small.
fn atanh_ratio(p: &BigInt, q: &BigInt, bits: u32) -> Real {
    let t = Real { raw: round_div(p.clone() << bits, q), bits };
    atanh_small(&t)
}

fn atanh_small(t: &Real) -> Real {
    let t2 = t * t;
    let mut power = t.clone();
    let mut sum = t.clone();
    let mut k = 1i64;
    loop {
        power = &power * &t2;
        if power.raw.is_zero() {
            break;
        }
        sum = sum + power.div_int(2 * k + 1);
        k += 1;
    }
    sum
}

fn ln_bigint(value: &BigInt, bits: u32) -> Real {
    // value = 2^k * y with y in [1, 2): ln = k ln2 + 2 atanh((y-1)/(y+1)).
    let k = value.bits() as i64 - 1;
    let one = BigInt::one() << k;
    let num = value - &one;
    let den = value + &one;
    let t = Real { raw: round_div(num << bits, &den), bits };
    Real::ln2(bits).mul_int(k) + atanh_small(&t).mul_int(2)
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        assert_eq!(self.bits, rhs.bits, "fraction bit mismatch");
        Real { raw: self.raw + rhs.raw, bits: self.bits }
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        assert_eq!(self.bits, rhs.bits, "fraction bit mismatch");
        Real { raw: self.raw - rhs.raw, bits: self.bits }
    }
}

impl<'a> Sub<&'a Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        assert_eq!(self.bits, rhs.bits, "fraction bit mismatch");
        Real { raw: &self.raw - &rhs.raw, bits: self.bits }
    }
}

impl<'a> Mul<&'a Real> for &'a Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        assert_eq!(self.bits, rhs.bits, "fraction bit mismatch");
        Real { raw: round_shift(&self.raw * &rhs.raw, self.bits), bits: self.bits }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { raw: -self.raw, bits: self.bits }
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.bits == other.bits {
            Some(self.raw.cmp(&other.raw))
        } else {
            let bits = self.bits.max(other.bits);
            Some(self.with_bits(bits).raw.cmp(&other.with_bits(bits).raw))
        }
    }
}
