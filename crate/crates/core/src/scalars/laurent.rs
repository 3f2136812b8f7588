use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{rational_to_string, Rational};
use crate::error::{Error, Result};

/// Laurent polynomial in one variable `x` with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    /// `c * x^e`.
    pub fn monomial(c: Rational, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// The generic parameter `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Iterates `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, e: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Exact quotient `self / divisor`. Fails when the division leaves a
    /// remainder; callers that know the quotient is a Laurent polynomial
    /// treat that as an internal error.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        let (Some(dlo), Some(dhi)) = (divisor.min_exponent(), divisor.max_exponent()) else {
            return Err(Error::DivisionByZero);
        };
        let Some(nlo) = self.min_exponent() else {
            return Ok(LaurentPoly::zero());
        };
        let nhi = self.max_exponent().unwrap_or(nlo);

        // Work with ordinary polynomials: self = x^nlo * A, divisor = x^dlo * B.
        let mut rem: Vec<Rational> = (nlo..=nhi).map(|e| self.coeff(e)).collect();
        let den: Vec<Rational> = (dlo..=dhi).map(|e| divisor.coeff(e)).collect();
        let dlen = den.len();
        let lead = den[dlen - 1].clone();
        if rem.len() < dlen {
            return Err(Error::Internal(format!(
                "inexact Laurent division: {self} / {divisor}"
            )));
        }
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![Rational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dlen - 1] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in den.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            quot[k] = c;
        }
        if rem.iter().any(|r| !r.is_zero()) {
            return Err(Error::Internal(format!(
                "inexact Laurent division: {self} / {divisor}"
            )));
        }
        Ok(LaurentPoly::from_terms(
            quot.into_iter()
                .enumerate()
                .map(|(k, c)| (nlo - dlo + k as i32, c)),
        ))
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let unit = mag.is_one();
            match (*e, unit) {
                (0, _) => write!(f, "{}", rational_to_string(&mag))?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{}*x", rational_to_string(&mag))?,
                (e, true) => write!(f, "x^{e}")?,
                (e, false) => write!(f, "{}*x^{e}", rational_to_string(&mag))?,
            }
        }
        Ok(())
    }
}

/// The quantum integer `[m]_x = (x^m - x^-m) / (x - x^-1)`, expanded as
/// `x^(m-1) + x^(m-3) + ... + x^(1-m)`.
pub fn quantum_int(m: u32) -> LaurentPoly {
    let m = m as i32;
    LaurentPoly::from_terms((0..m).map(|k| (m - 1 - 2 * k, Rational::one())))
}

/// `[m]_x! = [m]_x [m-1]_x ... [1]_x`; the empty product is 1.
pub fn quantum_factorial(m: u32) -> LaurentPoly {
    (1..=m).fold(LaurentPoly::one(), |acc, k| &acc * &quantum_int(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn quantum_int_small_values() {
        assert!(quantum_int(0).is_zero());
        assert_eq!(quantum_int(1), LaurentPoly::one());
        // (x^3 - x^-3) / (x - x^-1) by long division
        let num = LaurentPoly::from_terms([(3, r(1)), (-3, r(-1))]);
        let den = LaurentPoly::from_terms([(1, r(1)), (-1, r(-1))]);
        let expected = num.div_exact(&den).unwrap();
        assert_eq!(quantum_int(3), expected);
        assert_eq!(
            quantum_int(3),
            LaurentPoly::from_terms([(2, r(1)), (0, r(1)), (-2, r(1))])
        );
    }

    #[test]
    fn quantum_factorial_small_values() {
        assert_eq!(quantum_factorial(0), LaurentPoly::one());
        assert_eq!(
            quantum_factorial(2),
            LaurentPoly::from_terms([(1, r(1)), (-1, r(1))])
        );
        let x_plus_inv = LaurentPoly::from_terms([(1, r(1)), (-1, r(1))]);
        let three = LaurentPoly::from_terms([(2, r(1)), (0, r(1)), (-2, r(1))]);
        assert_eq!(quantum_factorial(3), &x_plus_inv * &three);
    }

    #[test]
    fn inexact_division_is_an_error() {
        let a = quantum_int(3);
        let b = quantum_int(2);
        assert!(matches!(a.div_exact(&b), Err(Error::Internal(_))));
        assert!(matches!(
            a.div_exact(&LaurentPoly::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = quantum_factorial(5);
        let b = quantum_factorial(3);
        let q = a.div_exact(&b).unwrap();
        assert_eq!(&q * &b, a);
        assert_eq!(q, &quantum_int(5) * &quantum_int(4));
    }

    #[test]
    fn display() {
        assert_eq!(quantum_int(3).to_string(), "x^2 + 1 + x^-2");
        let p = LaurentPoly::from_terms([(1, r(-2)), (0, Rational::new(1.into(), 2.into()))]);
        assert_eq!(p.to_string(), "-2*x + 1/2");
    }
}
