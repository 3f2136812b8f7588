//! Closed formulas and generating functions for the dimensions of cell
//! modules, simple modules and Jones quotients.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{IntPoly, TruncatedSeries};

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `c(n) = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u32) -> BigInt {
    let n = n as i64;
    binomial(2 * n, n) / (n + 1)
}

/// `c(x)` from the convolution `c(n) = Σ_{k=1}^n c(k-1) c(n-k)`.
pub fn catalan_series(order: usize) -> TruncatedSeries {
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=order {
        let s = (1..=n).map(|k| &c[k - 1] * &c[n - k]).sum();
        c.push(s);
    }
    TruncatedSeries::new(order, c)
}

/// `d(x) = x c(x)^2`.
pub fn d_series(order: usize) -> TruncatedSeries {
    let c = catalan_series(order);
    &TruncatedSeries::x(order) * &(&c * &c)
}

/// `F(t, k) = binom(t+2k, k) - binom(t+2k, k-1)`, zero when `t < 0` or
/// `k < 0`. Equals `dim W_t(t + 2k)`.
pub fn cell_dim(t: i64, k: i64) -> BigInt {
    if t < 0 || k < 0 {
        return BigInt::zero();
    }
    binomial(t + 2 * k, k) - binomial(t + 2 * k, k - 1)
}

/// `w_t(n) = dim W_t(n)`, zero on parity mismatch or `t > n`.
pub fn cell_dim_at(t: usize, n: usize) -> BigInt {
    if t > n || (n - t) % 2 == 1 {
        return BigInt::zero();
    }
    cell_dim(t as i64, ((n - t) / 2) as i64)
}

/// `W_t(x) = Σ_k w(t, k) x^k`.
pub fn cell_series(t: usize, order: usize) -> TruncatedSeries {
    TruncatedSeries::new(order, (0..=order).map(|k| cell_dim(t as i64, k as i64)))
}

/// Residues of `t = a ℓ + b` and the derived quantities used by `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GIndex {
    ell: u32,
}

impl GIndex {
    pub fn new(ell: u32) -> Result<Self> {
        if ell < 3 {
            return Err(Error::EllTooSmall(ell as i64));
        }
        Ok(Self { ell })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn a(&self, t: usize) -> usize {
        t / self.ell as usize
    }

    pub fn b(&self, t: usize) -> usize {
        t % self.ell as usize
    }

    /// `ℓ - 1 - b(t)`.
    pub fn b_bar(&self, t: usize) -> usize {
        self.ell as usize - 1 - self.b(t)
    }

    pub fn in_n_prime(&self, t: usize) -> bool {
        self.b(t) != self.ell as usize - 1
    }

    /// `g(t) = t + 2(ℓ - 1 - b(t))` on `N'`.
    pub fn g(&self, t: usize) -> Result<usize> {
        if !self.in_n_prime(t) {
            return Err(Error::NotInNPrime { t, ell: self.ell });
        }
        Ok(t + 2 * self.b_bar(t))
    }
}

pub fn g_map(t: usize, ell: u32) -> Result<usize> {
    GIndex::new(ell)?.g(t)
}

/// `l_t(n) = Σ_i (-1)^i w_{g^i(t)}(n)`; `w_t(n)` itself when `t ∉ N'`.
pub fn simple_dim(t: usize, n: usize, ell: u32) -> BigInt {
    simple_dim_with(t, n, ell, &g_map).expect("g_map is total on N'")
}

/// [`simple_dim`] with the map `g` supplied by the caller.
pub fn simple_dim_with(
    t: usize,
    n: usize,
    ell: u32,
    g: &dyn Fn(usize, u32) -> Result<usize>,
) -> Result<BigInt> {
    let idx = GIndex::new(ell)?;
    if t > n || (n - t) % 2 == 1 {
        return Ok(BigInt::zero());
    }
    if !idx.in_n_prime(t) {
        return Ok(cell_dim_at(t, n));
    }
    let mut acc = BigInt::zero();
    let mut s = t;
    let mut sign = true;
    while s <= n {
        let w = cell_dim_at(s, n);
        if sign {
            acc += w;
        } else {
            acc -= w;
        }
        sign = !sign;
        let next = g(s, ell)?;
        if next <= s {
            return Err(Error::Internal(format!(
                "g({s}) = {next} does not increase"
            )));
        }
        s = next;
    }
    Ok(acc)
}

/// `p_1 = p_2 = 1`, `p_{i+1} = p_i - x p_{i-1}`; extended by `p_0 = 0`.
pub fn p_poly(i: usize) -> IntPoly {
    if i == 0 {
        return IntPoly::zero();
    }
    let (mut prev, mut cur) = (IntPoly::one(), IntPoly::one());
    for _ in 2..i {
        let next = &cur - &(&IntPoly::x() * &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Coefficients `c_i` with `1 + y + ... + y^{j-1} = Σ_i c_i y^i (y+1)^{j-1-2i}`,
/// returned as `Σ_i c_i x^i`. Solved by peeling off the lowest power of
/// `y`, since `y^i (y+1)^{j-1-2i}` starts at `y^i` with coefficient 1.
pub fn palindromic_decompose(j: usize) -> IntPoly {
    assert!(j >= 1, "palindromic_decompose needs j >= 1");
    let y_plus_1 = IntPoly::from_i64(&[1, 1]);
    let mut rest = IntPoly::new(std::iter::repeat(BigInt::one()).take(j));
    let mut out = Vec::new();
    for i in 0..=(j - 1) / 2 {
        let c = rest.coeff(i);
        let shifted = IntPoly::new(
            std::iter::repeat(BigInt::zero())
                .take(i)
                .chain([BigInt::one()]),
        );
        let basis = &shifted * &y_plus_1.pow((j - 1 - 2 * i) as u32);
        rest = &rest - &(&IntPoly::new([c.clone()]) * &basis);
        out.push(c);
    }
    debug_assert!(rest.is_zero());
    IntPoly::new(out)
}

/// `L_t(x) = Σ_k l_t(t + 2k) x^k` from `p_{ℓ-1-b}(x) c(x)^{aℓ} / p_ℓ(x)`,
/// or `c(x)^{t+1}` when `b(t) = ℓ - 1`.
pub fn simple_series(t: usize, ell: u32, order: usize) -> Result<TruncatedSeries> {
    let idx = GIndex::new(ell)?;
    let c = catalan_series(order);
    if !idx.in_n_prime(t) {
        return Ok(c.pow(t as u32 + 1));
    }
    let ell_u = ell as usize;
    let num = TruncatedSeries::from_poly(&p_poly(idx.b_bar(t)), order);
    let den = TruncatedSeries::from_poly(&p_poly(ell_u), order);
    let ca = c.pow((idx.a(t) * ell_u) as u32);
    (&num * &ca).div(&den)
}

/// The same series from `(d+1)^{t+1} (1 - d^{ℓ-1-b}) / (1 - d^ℓ)`.
pub fn simple_series_via_d(t: usize, ell: u32, order: usize) -> Result<TruncatedSeries> {
    let idx = GIndex::new(ell)?;
    if !idx.in_n_prime(t) {
        return Ok(catalan_series(order).pow(t as u32 + 1));
    }
    let d = d_series(order);
    let one = TruncatedSeries::one(order);
    let top = &(&d + &one).pow(t as u32 + 1) * &(&one - &d.pow(idx.b_bar(t) as u32));
    top.div(&(&one - &d.pow(ell)))
}

/// `R(n) = {t ≡ n (mod 2), 0 ≤ t ≤ min(n, ℓ-2)}`.
pub fn quotient_labels(n: usize, ell: u32) -> Vec<usize> {
    let top = n.min(ell as usize - 2);
    (0..=top).filter(|t| (n - t) % 2 == 0).collect()
}

/// `dim Q_n(ℓ)` computed independently two ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientDims {
    pub n: usize,
    pub ell: u32,
    /// `Σ_{t ∈ R(n)} l_t(n)^2`.
    #[serde(serialize_with = "as_string")]
    pub sum_of_squares: BigInt,
    /// `l_1(2n - 1)`.
    #[serde(serialize_with = "as_string")]
    pub via_l1: BigInt,
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl QuotientDims {
    pub fn agree(&self) -> bool {
        self.sum_of_squares == self.via_l1
    }
}

pub fn quotient_dims(n: usize, ell: u32) -> Result<QuotientDims> {
    GIndex::new(ell)?;
    if n == 0 {
        return Err(Error::TooFewStrands { n, min: 1 });
    }
    let sum_of_squares = quotient_labels(n, ell)
        .into_iter()
        .map(|t| {
            let l = simple_dim(t, n, ell);
            &l * &l
        })
        .sum();
    Ok(QuotientDims {
        n,
        ell,
        sum_of_squares,
        via_l1: simple_dim(1, 2 * n - 1, ell),
    })
}

/// `dim Q_n(ℓ)`.
pub fn quotient_dim(n: usize, ell: u32) -> Result<BigInt> {
    Ok(quotient_dims(n, ell)?.sum_of_squares)
}

/// `Q(x) = p_{ℓ-2}(x) / p_ℓ(x)`; the coefficient of `x^n` is `dim Q_{n+1}`.
pub fn quotient_series(ell: u32, order: usize) -> Result<TruncatedSeries> {
    GIndex::new(ell)?;
    let ell = ell as usize;
    TruncatedSeries::from_poly(&p_poly(ell - 2), order)
        .div(&TruncatedSeries::from_poly(&p_poly(ell), order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), big(1));
        assert_eq!(catalan(3), big(5));
        assert_eq!(catalan(4), big(14));
        let c = catalan_series(10);
        for n in 0..=10 {
            assert_eq!(c.coeff(n), catalan(n as u32));
        }
    }

    #[test]
    fn cell_dim_values() {
        assert_eq!(cell_dim(5, 0), big(1));
        assert_eq!(cell_dim(2, 2), big(9));
        assert_eq!(cell_dim(2, 3), big(28));
        assert_eq!(cell_dim(-1, 3), big(0));
        assert_eq!(cell_dim(0, 0), big(1));
        assert_eq!(cell_dim_at(3, 4), big(0));
    }

    #[test]
    fn g_values() {
        assert_eq!(g_map(2, 5).unwrap(), 6);
        assert_eq!(g_map(0, 5).unwrap(), 8);
        assert_eq!(g_map(6, 5).unwrap(), 12);
        assert_eq!(
            g_map(4, 5).unwrap_err(),
            Error::NotInNPrime { t: 4, ell: 5 }
        );
        let idx = GIndex::new(5).unwrap();
        assert_eq!((idx.a(13), idx.b(13), idx.b_bar(13)), (2, 3, 1));
    }

    #[test]
    fn simple_dim_values() {
        assert_eq!(simple_dim(0, 8, 5), big(13));
        assert_eq!(simple_dim(2, 8, 4), big(8));
        assert_eq!(simple_dim(4, 14, 7), big(728));
        assert_eq!(simple_dim(1, 4, 5), big(0));
        assert_eq!(simple_dim(4, 6, 5), cell_dim_at(4, 6));
    }

    #[test]
    fn polynomials() {
        assert_eq!(p_poly(4), IntPoly::from_i64(&[1, -2]));
        assert_eq!(p_poly(6), IntPoly::from_i64(&[1, -4, 3]));
        assert_eq!(p_poly(7), IntPoly::from_i64(&[1, -5, 6, -1]));
        assert_eq!(palindromic_decompose(1), IntPoly::one());
        assert_eq!(palindromic_decompose(3), IntPoly::from_i64(&[1, -1]));
        assert_eq!(palindromic_decompose(5), IntPoly::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn series_examples() {
        let s = simple_series(2, 6, 8).unwrap();
        assert_eq!(ints(&s), (0..=8).map(|k| 3i64.pow(k)).collect::<Vec<_>>());
        let fib = |k: usize| {
            let (mut a, mut b) = (0i64, 1i64);
            for _ in 0..k {
                (a, b) = (b, a + b);
            }
            a
        };
        let s = simple_series(1, 5, 8).unwrap();
        assert_eq!(
            ints(&s),
            (0..=8).map(|i| fib(2 * i + 1)).collect::<Vec<_>>()
        );
        assert_eq!(
            ints(&simple_series(4, 7, 5).unwrap()),
            [1, 5, 19, 66, 221, 728]
        );
        for (ell, t) in [(6, 2), (5, 1), (7, 4), (4, 3), (5, 9)] {
            assert_eq!(
                simple_series(t, ell, 12).unwrap(),
                simple_series_via_d(t, ell, 12).unwrap()
            );
        }
    }

    #[test]
    fn quotient_examples() {
        for n in 1..8 {
            assert_eq!(quotient_dim(n, 3).unwrap(), big(1));
            assert_eq!(quotient_dim(n, 4).unwrap(), big(1 << (n - 1)));
        }
        let q = quotient_dims(8, 5).unwrap();
        assert_eq!((q.sum_of_squares.clone(), q.agree()), (big(610), true));
        assert_eq!(
            ints(&quotient_series(4, 6).unwrap()),
            [1, 2, 4, 8, 16, 32, 64]
        );
        assert_eq!(ints(&quotient_series(3, 4).unwrap()), [1, 1, 1, 1, 1]);
        assert_eq!(ints(&quotient_series(5, 5).unwrap()), [1, 2, 5, 13, 34, 89]);
    }
}
