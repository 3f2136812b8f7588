//! Exact scalar arithmetic: rationals, Laurent polynomials in a generic
//! parameter, cyclotomic fields, and the root-of-unity context that fixes q.

mod context;
mod cyclotomic;
mod laurent;

pub use context::RootContext;
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CycloField, Cyclotomic};
pub use laurent::{quantum_factorial, quantum_int, LaurentPoly};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: num_bigint::BigInt = p.trim().parse().ok()?;
            let q: num_bigint::BigInt = q.trim().parse().ok()?;
            if q == num_bigint::BigInt::from(0) {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}
