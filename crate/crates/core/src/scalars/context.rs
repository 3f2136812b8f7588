use std::sync::Arc;

use num_integer::Integer;

use super::{CycloField, Cyclotomic, LaurentPoly};
use crate::error::{Error, Result};

/// The root of unity at which the algebras are specialised.
///
/// `q = -ζ_{2ℓ}^k` with `k` coprime to `2ℓ`, so `q²` has multiplicative
/// order exactly `ℓ` and the loop value is `δ = -(q + q⁻¹)`. The default
/// `k = 1` gives `δ = 2cos(π/ℓ)`.
#[derive(Clone, Debug)]
pub struct RootContext {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    ell: u32,
    q_exp: u32,
    field: Arc<CycloField>,
    q_powers: Vec<Cyclotomic>,
    delta: Cyclotomic,
    delta_inv: Cyclotomic,
    delta_powers: Vec<Cyclotomic>,
    delta_inv_powers: Vec<Cyclotomic>,
}

const CACHED_DELTA_POWERS: u32 = 24;

impl RootContext {
    pub fn new(ell: u32) -> Result<Self> {
        Self::with_q_exponent(ell, 1)
    }

    /// Context with `q = -ζ_{2ℓ}^k`.
    pub fn with_q_exponent(ell: u32, k: i64) -> Result<Self> {
        if ell < 3 {
            return Err(Error::EllTooSmall(ell as i64));
        }
        let m = 2 * ell;
        let k_red = k.rem_euclid(m as i64);
        if (k_red as u32).gcd(&m) != 1 {
            return Err(Error::QExponent { k, modulus: m });
        }
        let field = CycloField::get(m);
        let q = -Cyclotomic::zeta_pow(&field, k_red);
        let mut q_powers = Vec::with_capacity(m as usize);
        let mut cur = Cyclotomic::one(&field);
        for _ in 0..m {
            q_powers.push(cur.clone());
            cur = &cur * &q;
        }
        debug_assert!(cur.is_one());
        let q_inv = q_powers[m as usize - 1].clone();
        let delta = -(&q + &q_inv);
        let delta_inv = delta
            .inv()
            .ok_or_else(|| Error::Internal("loop value vanished".into()))?;
        let delta_powers = (0..=CACHED_DELTA_POWERS).map(|e| delta.pow(e)).collect();
        let delta_inv_powers = (0..=CACHED_DELTA_POWERS)
            .map(|e| delta_inv.pow(e))
            .collect();
        Ok(Self {
            inner: Arc::new(Inner {
                ell,
                q_exp: k_red as u32,
                field,
                q_powers,
                delta,
                delta_inv,
                delta_powers,
                delta_inv_powers,
            }),
        })
    }

    /// Every admissible `k` in `1..2ℓ`, i.e. every primitive choice of q.
    pub fn all_q_exponents(ell: u32) -> Vec<u32> {
        let m = 2 * ell;
        (1..m).filter(|k| k.gcd(&m) == 1).collect()
    }

    pub fn ell(&self) -> u32 {
        self.inner.ell
    }

    /// `m = 2ℓ`, the order of the ambient cyclotomic field.
    pub fn order(&self) -> u32 {
        2 * self.inner.ell
    }

    pub fn q_exponent(&self) -> u32 {
        self.inner.q_exp
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.inner.field
    }

    pub fn q(&self) -> &Cyclotomic {
        &self.inner.q_powers[1]
    }

    /// `q^e` for any integer `e`, using `q^{2ℓ} = 1`.
    pub fn q_pow(&self, e: i64) -> &Cyclotomic {
        &self.inner.q_powers[e.rem_euclid(self.inner.q_powers.len() as i64) as usize]
    }

    pub fn delta(&self) -> &Cyclotomic {
        &self.inner.delta
    }

    pub fn delta_inv(&self) -> &Cyclotomic {
        &self.inner.delta_inv
    }

    /// `δ^e` for any integer `e`.
    pub fn delta_pow(&self, e: i64) -> Cyclotomic {
        let (table, base, k) = if e >= 0 {
            (&self.inner.delta_powers, &self.inner.delta, e as u32)
        } else {
            (
                &self.inner.delta_inv_powers,
                &self.inner.delta_inv,
                (-e) as u32,
            )
        };
        match table.get(k as usize) {
            Some(v) => v.clone(),
            None => base.pow(k),
        }
    }

    pub fn zero(&self) -> Cyclotomic {
        Cyclotomic::zero(&self.inner.field)
    }

    pub fn one(&self) -> Cyclotomic {
        Cyclotomic::one(&self.inner.field)
    }

    pub fn int(&self, v: i64) -> Cyclotomic {
        Cyclotomic::from_int(&self.inner.field, v)
    }

    /// Evaluates a Laurent polynomial at `x = q`.
    pub fn specialize(&self, p: &LaurentPoly) -> Cyclotomic {
        let mut acc = self.zero();
        for (e, c) in p.terms() {
            let term = self.q_pow(e as i64) * &Cyclotomic::from_rational(&self.inner.field, c);
            acc += &term;
        }
        acc
    }

    /// `[m]_q`.
    pub fn quantum_int(&self, m: u32) -> Cyclotomic {
        self.specialize(&super::quantum_int(m))
    }

    /// Two contexts describe the same algebra when ℓ and q agree.
    pub fn same_as(&self, other: &RootContext) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.ell == other.inner.ell && self.inner.q_exp == other.inner.q_exp)
    }
}
