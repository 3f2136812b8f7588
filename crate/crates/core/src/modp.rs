//! Reduction of cyclotomic integers modulo degree-one primes.
//!
//! For `p ≡ 1 (mod m)` the map `ζ_m ↦ ω`, with `ω` a primitive `m`-th root
//! of unity in `F_p`, is a ring homomorphism `Z[ζ_m] → F_p`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::scalars::Cyclotomic;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    omega: u64,
    order: u32,
}

impl PrimeField {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The image of `ζ_m`.
    pub fn omega(&self) -> u64 {
        self.omega
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (a % self.p != 0).then(|| self.pow(a, self.p - 2))
    }

    pub fn reduce_int(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits")
    }

    /// Image of a cyclotomic number, or `None` when its denominator is
    /// divisible by `p`.
    pub fn reduce(&self, c: &Cyclotomic) -> Option<u64> {
        assert_eq!(
            c.order(),
            self.order,
            "reducing an element of the wrong field"
        );
        let den = self.inv(self.reduce_int(c.denominator()))?;
        let mut acc = 0;
        let mut w = 1;
        for a in c.numerators() {
            acc = self.add(acc, self.mul(self.reduce_int(a), w));
            w = self.mul(w, self.omega);
        }
        Some(self.mul(acc, den))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13] {
        if n % small == 0 {
            return n == small;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    // deterministic for n < 3.4e14
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= m {
        if m % f == 0 {
            out.push(f);
            while m % f == 0 {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Largest prime below 2^31 that is `≡ 1 (mod m)`, then the next, and so on.
/// Products of two residues fit comfortably in a `u64`.
const PRIME_CEILING: u64 = 1 << 31;

struct PrimeList {
    next_candidate: u64,
    fields: Vec<PrimeField>,
}

fn cache() -> &'static Mutex<HashMap<u32, PrimeList>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, PrimeList>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `index`-th prime field of characteristic `≡ 1 (mod m)`, counting down
/// from 2^31.
pub fn prime_field(m: u32, index: usize) -> PrimeField {
    let mut guard = cache().lock().expect("prime cache poisoned");
    let m64 = m as u64;
    let list = guard.entry(m).or_insert_with(|| {
        let top = PRIME_CEILING - 1;
        PrimeList {
            next_candidate: top - (top - 1) % m64,
            fields: Vec::new(),
        }
    });
    let factors = prime_factors(m64);
    while list.fields.len() <= index {
        let p = list.next_candidate;
        assert!(p > m64, "ran out of primes congruent to 1 mod {m}");
        list.next_candidate -= m64;
        if !is_prime(p) {
            continue;
        }
        let probe = PrimeField {
            p,
            omega: 0,
            order: m,
        };
        let omega = (2..p)
            .map(|g| probe.pow(g, (p - 1) / m64))
            .find(|&w| factors.iter().all(|&r| probe.pow(w, m64 / r) != 1))
            .expect("primitive root exists");
        list.fields.push(PrimeField { p, omega, order: m });
    }
    list.fields[index]
}

pub fn prime_fields(m: u32) -> impl Iterator<Item = PrimeField> {
    (0..).map(move |i| prime_field(m, i))
}
