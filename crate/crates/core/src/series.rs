//! Integer polynomials and power series truncated at a fixed order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

fn render(coeffs: &[BigInt], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate() {
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
        let show_mag = k == 0 || !mag.is_one();
        if show_mag {
            write!(f, "{mag}")?;
        }
        match k {
            0 => {}
            1 => write!(f, "x")?,
            _ => write!(f, "x^{k}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Polynomial with integer coefficients, lowest degree first, no trailing
/// zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().collect();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render(&self.coeffs, f)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

fn add_slices(a: &[BigInt], b: &[BigInt], len: usize, sign: i8) -> Vec<BigInt> {
    (0..len)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_default();
            let y = b.get(k).cloned().unwrap_or_default();
            if sign > 0 {
                x + y
            } else {
                x - y
            }
        })
        .collect()
}

fn mul_slices(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new(add_slices(&self.coeffs, &rhs.coeffs, len, 1))
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new(add_slices(&self.coeffs, &rhs.coeffs, len, -1))
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let len = self.coeffs.len() + rhs.coeffs.len() - 1;
        IntPoly::new(mul_slices(&self.coeffs, &rhs.coeffs, len))
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c))
    }
}

/// `Σ_{k ≤ N} a_k x^k` modulo `x^{N+1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Pads with zeros or truncates to exactly `order + 1` coefficients.
    pub fn new(order: usize, coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().take(order + 1).collect();
        coeffs.resize(order + 1, BigInt::zero());
        Self { coeffs }
    }

    pub fn from_i64(order: usize, coeffs: &[i64]) -> Self {
        Self::new(order, coeffs.iter().map(|&c| BigInt::from(c)))
    }

    pub fn from_poly(p: &IntPoly, order: usize) -> Self {
        Self::new(order, p.coeffs().iter().cloned())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, [])
    }

    pub fn one(order: usize) -> Self {
        Self::new(order, [BigInt::one()])
    }

    pub fn x(order: usize) -> Self {
        Self::from_i64(order, &[0, 1])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(order, self.coeffs.iter().cloned())
    }

    /// Inverse over the integers; the constant term must be `±1`.
    pub fn inv(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return Err(Error::SeriesNotInvertible(c0.to_string()));
        }
        let n = self.coeffs.len();
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        out.push(c0.clone());
        for k in 1..n {
            let s: BigInt = (1..=k).map(|i| &self.coeffs[i] * &out[k - i]).sum();
            // c0 = ±1 is its own inverse
            out.push(-s * c0);
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render(&self.coeffs, f)?;
        write!(f, " + O(x^{})", self.coeffs.len())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({self})")
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

// Binary operations keep the smaller of the two orders.

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let len = self.coeffs.len().min(rhs.coeffs.len());
        TruncatedSeries {
            coeffs: add_slices(&self.coeffs, &rhs.coeffs, len, 1),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let len = self.coeffs.len().min(rhs.coeffs.len());
        TruncatedSeries {
            coeffs: add_slices(&self.coeffs, &rhs.coeffs, len, -1),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let len = self.coeffs.len().min(rhs.coeffs.len());
        TruncatedSeries {
            coeffs: mul_slices(&self.coeffs, &rhs.coeffs, len),
        }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_arithmetic() {
        let p = IntPoly::from_i64(&[1, -1]);
        let q = IntPoly::from_i64(&[1, 1]);
        assert_eq!(&p * &q, IntPoly::from_i64(&[1, 0, -1]));
        assert!((&p - &p).is_zero());
        assert_eq!((&p + &q).degree(), Some(0));
        assert_eq!(IntPoly::from_i64(&[1, -4, 3]).to_string(), "1 - 4x + 3x^2");
        assert_eq!(q.pow(3).eval(&BigInt::from(1)), BigInt::from(8));
    }

    #[test]
    fn geometric_series() {
        let one_minus_3x = TruncatedSeries::from_i64(8, &[1, -3]);
        let g = one_minus_3x.inv().unwrap();
        for k in 0..=8 {
            assert_eq!(g.coeff(k), BigInt::from(3).pow(k as u32));
        }
        assert!((&(&g * &one_minus_3x) - &TruncatedSeries::one(8)).is_zero());
        assert!(TruncatedSeries::from_i64(3, &[2, 1]).inv().is_err());
        assert_eq!(
            TruncatedSeries::from_i64(4, &[-1]).inv().unwrap(),
            TruncatedSeries::from_i64(4, &[-1])
        );
    }

    #[test]
    fn pow_and_order() {
        let s = TruncatedSeries::from_i64(5, &[1, 1]);
        assert_eq!(s.pow(3), TruncatedSeries::from_i64(5, &[1, 3, 3, 1]));
        let short = TruncatedSeries::one(2);
        assert_eq!((&s * &short).order(), 2);
        assert_eq!(s.to_string(), "1 + x + O(x^6)");
    }
}
