use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{parse_rational, rational_to_string, Rational};

/// Euler's totient.
pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi as usize
}

/// The `m`-th cyclotomic polynomial, ascending coefficients, monic.
///
/// Obtained by dividing `x^m - 1` by `Φ_d` for every proper divisor `d` of
/// `m`; the `Φ_d` come from the shared field cache.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    CycloField::get(m).modulus.clone()
}

fn compute_cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut poly: Vec<i128> = vec![0; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in (1..m).filter(|d| m % d == 0) {
        let divisor = CycloField::get(d).modulus.clone();
        poly = div_monic_exact(&poly, &divisor);
    }
    poly.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect()
}

fn div_monic_exact(num: &[i128], den: &[i64]) -> Vec<i128> {
    let dl = den.len();
    let mut rem = num.to_vec();
    let ql = num.len() - dl + 1;
    let mut quot = vec![0i128; ql];
    for k in (0..ql).rev() {
        let c = rem[k + dl - 1];
        if c == 0 {
            continue;
        }
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj as i128;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|&r| r == 0), "x^m - 1 not divisible by Φ_d");
    quot
}

/// The field `Q(ζ_m)` presented as `Q[x]/Φ_m(x)`.
#[derive(Debug)]
pub struct CycloField {
    order: u32,
    modulus: Vec<i64>,
}

static FIELDS: OnceLock<RwLock<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();

impl CycloField {
    /// Shared handle to `Q(ζ_m)`; `Φ_m` is computed once per order.
    pub fn get(order: u32) -> Arc<CycloField> {
        let cache = FIELDS.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(f) = cache.read().expect("field cache poisoned").get(&order) {
            return f.clone();
        }
        // Computed outside the lock: the recursion needs the divisors' fields.
        let field = Arc::new(CycloField {
            order,
            modulus: compute_cyclotomic_polynomial(order),
        });
        cache
            .write()
            .expect("field cache poisoned")
            .entry(order)
            .or_insert(field)
            .clone()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree `φ(m)` of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// `Φ_m`, ascending, monic.
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// Reduces an integer polynomial of any length modulo `Φ_m`.
    fn reduce(&self, mut c: Vec<BigInt>) -> Vec<BigInt> {
        let phi = self.degree();
        for k in (phi..c.len()).rev() {
            if c[k].is_zero() {
                continue;
            }
            let top = std::mem::take(&mut c[k]);
            for (i, &mi) in self.modulus[..phi].iter().enumerate() {
                if mi != 0 {
                    c[k - phi + i] -= &top * mi;
                }
            }
        }
        c.resize(phi, BigInt::zero());
        c
    }
}

/// An element of `Q(ζ_m)` in the power basis `1, ζ, …, ζ^(φ(m)-1)`.
///
/// Stored as an integer numerator vector over one positive common
/// denominator with no common factor, which makes the representation
/// canonical.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CycloField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        Self {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<CycloField>, v: i64) -> Self {
        Self::from_bigint(field, BigInt::from(v))
    }

    pub fn from_bigint(field: &Arc<CycloField>, v: BigInt) -> Self {
        let mut out = Self::zero(field);
        out.num[0] = v;
        out
    }

    pub fn from_rational(field: &Arc<CycloField>, r: &Rational) -> Self {
        let mut out = Self::zero(field);
        out.num[0] = r.numer().clone();
        out.den = r.denom().clone();
        out
    }

    /// Builds an element from power-basis coordinates. Longer inputs are
    /// reduced modulo `Φ_m`.
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: &[Rational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut padded = num;
        if padded.len() < field.degree() {
            padded.resize(field.degree(), BigInt::zero());
        }
        Self::normalized(field.clone(), field.reduce(padded), den)
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CycloField>, k: i64) -> Self {
        let m = field.order() as i64;
        let e = k.rem_euclid(m) as usize;
        let mut c = vec![BigInt::zero(); (e + 1).max(field.degree())];
        c[e] = BigInt::one();
        Self {
            field: field.clone(),
            num: field.reduce(c),
            den: BigInt::one(),
        }
    }

    fn normalized(field: Arc<CycloField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -std::mem::take(c));
        }
        if !den.is_one() {
            let mut g = den.clone();
            let mut all_zero = true;
            for c in num.iter().filter(|c| !c.is_zero()) {
                all_zero = false;
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
            if all_zero {
                den = BigInt::one();
            } else if !g.is_one() {
                num.iter_mut().for_each(|c| *c /= &g);
                den /= &g;
            }
        }
        Self { field, num, den }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Power-basis coordinates as rationals, length `φ(m)`.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Integer numerators over [`Self::denominator`].
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(
            self.field.order, other.field.order,
            "mixing elements of Q(ζ_{}) and Q(ζ_{})",
            self.field.order, other.field.order
        );
    }

    fn scale_int(&self, k: &BigInt) -> Self {
        Self::normalized(
            self.field.clone(),
            self.num.iter().map(|c| c * k).collect(),
            self.den.clone(),
        )
    }

    fn mul_rational(&self, num: &BigInt, den: &BigInt) -> Self {
        Self::normalized(
            self.field.clone(),
            self.num.iter().map(|c| c * num).collect(),
            &self.den * den,
        )
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Self::normalized(
                self.field.clone(),
                {
                    let mut v = vec![BigInt::zero(); self.field.degree()];
                    v[0] = self.den.clone();
                    v
                },
                self.num[0].clone(),
            ));
        }
        // Solve (num * y) = 1 in the power basis; column j of the system is
        // num * x^j reduced modulo Φ_m.
        let phi = self.field.degree();
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(phi);
        let mut cur = self.num.clone();
        for _ in 0..phi {
            cols.push(cur.clone());
            let mut shifted = vec![BigInt::zero()];
            shifted.extend(cur);
            cur = self.field.reduce(shifted);
        }
        let mut a: Vec<Vec<Rational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<Rational> = (0..phi)
                    .map(|j| Rational::from_integer(cols[j][i].clone()))
                    .collect();
                row.push(if i == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                });
                row
            })
            .collect();
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let p = a[col][col].clone();
            for v in a[col].iter_mut() {
                *v /= &p;
            }
            let pivot_row = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= &f * pv;
                    }
                }
            }
        }
        let y: Vec<Rational> = a.into_iter().map(|row| row[phi].clone()).collect();
        let y = Self::from_coeffs(&self.field, &y);
        Some(y.scale_int(&self.den))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents need an invertible base.
    pub fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            Some(self.inv()?.pow((-e) as u32))
        }
    }

    /// Complex value under `ζ_m ↦ exp(2πi/m)`. Display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.field.order as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let ang = 2.0 * std::f64::consts::PI * k as f64 / m;
            re += c * ang.cos();
            im += c * ang.sin();
        }
        (re, im)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for Cyclotomic {}

impl Hash for Cyclotomic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            let num = self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect();
            return Cyclotomic::normalized(self.field.clone(), num, self.den.clone());
        }
        let l = self.den.lcm(&rhs.den);
        let fa = &l / &self.den;
        let fb = &l / &rhs.den;
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &fa + b * &fb)
            .collect();
        Cyclotomic::normalized(self.field.clone(), num, l)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Cyclotomic {
        self.num.iter_mut().for_each(|c| *c = -std::mem::take(c));
        self
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero(&self.field);
        }
        if rhs.is_rational() {
            return self.mul_rational(&rhs.num[0], &rhs.den);
        }
        if self.is_rational() {
            return rhs.mul_rational(&self.num[0], &self.den);
        }
        let phi = self.field.degree();
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Cyclotomic::normalized(
            self.field.clone(),
            self.field.reduce(prod),
            &self.den * &rhs.den,
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        let mut first = true;
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{}", rational_to_string(&mag))?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{}*z", rational_to_string(&mag))?,
                (k, true) => write!(f, "z^{k}")?,
                (k, false) => write!(f, "{}*z^{k}", rational_to_string(&mag))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic<{}>({})", self.field.order, self)
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicJson {
    order: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CyclotomicJson {
            order: self.order(),
            coeffs: self.coeffs().iter().map(rational_to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = CyclotomicJson::deserialize(d)?;
        if raw.order == 0 {
            return Err(serde::de::Error::custom(
                "cyclotomic order must be positive",
            ));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| {
                parse_rational(s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let field = CycloField::get(raw.order);
        if coeffs.len() != field.degree() {
            return Err(serde::de::Error::custom(format!(
                "expected {} coordinates for order {}",
                field.degree(),
                raw.order
            )));
        }
        Ok(Cyclotomic::from_coeffs(&field, &coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(10), vec![1, -1, 1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2.
        assert!(cyclotomic_polynomial(105).contains(&-2));
        for m in 1..60 {
            assert_eq!(cyclotomic_polynomial(m).len() - 1, euler_phi(m));
        }
    }

    #[test]
    fn zeta_has_order_m() {
        for m in [3u32, 5, 8, 12, 14, 16] {
            let f = CycloField::get(m);
            let z = Cyclotomic::zeta_pow(&f, 1);
            assert!(z.pow(m).is_one());
            for d in 1..m {
                assert!(!z.pow(d).is_one(), "ζ_{m}^{d} = 1");
            }
            assert_eq!(Cyclotomic::zeta_pow(&f, -1), z.pow(m - 1));
        }
    }

    #[test]
    fn inverse_and_canonical_form() {
        let f = CycloField::get(10);
        let z = Cyclotomic::zeta_pow(&f, 1);
        let a = &(&z * &z) + &Cyclotomic::from_int(&f, 3);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        let half = Cyclotomic::from_rational(&f, &Rational::new(1.into(), 2.into()));
        let b = &half + &half;
        assert!(b.is_one());
        assert_eq!(b.denominator(), &BigInt::one());
        assert!(Cyclotomic::zero(&f).inv().is_none());
    }

    #[test]
    fn json_roundtrip() {
        let f = CycloField::get(8);
        let z = Cyclotomic::zeta_pow(&f, 3);
        let x = &z * &Cyclotomic::from_rational(&f, &Rational::new((-2).into(), 3.into()));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"order":8,"coeffs":["0","0","0","-2/3"]}"#);
        let back: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn display_renders_power_basis() {
        let f = CycloField::get(8);
        let sqrt2 = &Cyclotomic::zeta_pow(&f, 1) - &Cyclotomic::zeta_pow(&f, 3);
        assert_eq!(sqrt2.to_string(), "z - z^3");
        let (re, im) = sqrt2.to_complex();
        assert!((re - 2f64.sqrt()).abs() < 1e-12 && im.abs() < 1e-12);
    }
}
