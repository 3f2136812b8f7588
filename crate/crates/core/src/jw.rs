//! The Jones-Wenzl idempotent `E_{ℓ-1}`: the forest-coefficient expansion
//! and the classical recursion used to cross-check it.

use std::collections::HashMap;

use crate::algebra::TLElement;
use crate::diagram::{enumerate_all, Forest};
use crate::error::{Error, Result};
use crate::par;
use crate::scalars::{quantum_factorial, quantum_int, LaurentPoly, RootContext};

/// `h_F(x) = [|F|]_x! / ∏_a [|F_{≤a}|]_x`, where `F_{≤a}` is `a` together
/// with every node nested inside it.
pub fn forest_coefficient(f: &Forest) -> Result<LaurentPoly> {
    coefficient_from_sizes(&f.down_set_sizes())
}

fn coefficient_from_sizes(sizes: &[usize]) -> Result<LaurentPoly> {
    let num = quantum_factorial(sizes.len() as u32);
    let den = sizes
        .iter()
        .fold(LaurentPoly::one(), |acc, &s| &acc * &quantum_int(s as u32));
    num.div_exact(&den)
}

/// `E_{ℓ-1} = Σ_D h_{F(D)}(q) D` over all diagrams of `TL_{ℓ-1}`, with
/// `F(D)` the nesting forest of `D` rotated to `0 → 2(ℓ-1)`.
pub fn jw_explicit(ctx: &RootContext) -> Result<TLElement> {
    let n = (ctx.ell() - 1) as usize;
    let basis = enumerate_all(n, n);
    let shapes: Vec<Vec<usize>> = basis
        .iter()
        .map(|d| {
            let mut s = d.rotate_up().nesting_forest().map(|f| f.down_set_sizes())?;
            s.sort_unstable();
            Ok(s)
        })
        .collect::<Result<_>>()?;

    // h_F only depends on the multiset of down-set sizes.
    let mut distinct: Vec<&Vec<usize>> = shapes.iter().collect();
    distinct.sort();
    distinct.dedup();
    let values = par::map(&distinct, |s| {
        coefficient_from_sizes(s).map(|h| ctx.specialize(&h))
    });
    let mut table = HashMap::new();
    for (s, v) in distinct.into_iter().zip(values) {
        table.insert(s.clone(), v?);
    }
    TLElement::from_terms(
        n,
        ctx,
        basis
            .into_iter()
            .zip(&shapes)
            .map(|(d, s)| (d, table[s].clone())),
    )
}

/// `E_k` by `E_{m+1} = E_m - (U_{m-1}(δ)/U_m(δ)) E_m f_m E_m`, with `E_m`
/// padded by one strand and `U` the Chebyshev polynomials `U_0 = 1`,
/// `U_1 = δ`. Since `U_m(δ) = [m+1]_{-q} = ±[m+1]_q`, the ratio equals
/// `-[m]_q/[m+1]_q`. Fails once a denominator vanishes.
pub fn jw_wenzl(k: usize, ctx: &RootContext) -> Result<TLElement> {
    if k == 0 {
        return Err(Error::TooFewStrands { n: 0, min: 1 });
    }
    let mut e = TLElement::identity(1, ctx);
    let (mut u_prev, mut u) = (ctx.one(), ctx.delta().clone());
    for m in 1..k {
        let inv = u.inv().ok_or(Error::VanishingQuantumInt(m + 1))?;
        let ratio = &u_prev * &inv;
        let next = &(ctx.delta() * &u) - &u_prev;
        u_prev = std::mem::replace(&mut u, next);
        let padded = e.tensor_identity(1);
        let f = TLElement::generator(m, m + 1, ctx)?;
        let middle = padded.multiply(&f)?.multiply(&padded)?;
        e = &padded - &middle.scale(&ratio);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GeneratorWord;
    use crate::scalars::Rational;

    fn poly(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            terms
                .iter()
                .map(|&(e, c)| (e, Rational::from_integer(c.into()))),
        )
    }

    #[test]
    fn forest_coefficient_examples() {
        let single = Forest::from_parents(vec![None]).unwrap();
        assert_eq!(forest_coefficient(&single).unwrap(), LaurentPoly::one());
        let pair = Forest::from_parents(vec![None, None]).unwrap();
        assert_eq!(forest_coefficient(&pair).unwrap(), poly(&[(1, 1), (-1, 1)]));
        let chain = Forest::from_parents(vec![None, Some(0)]).unwrap();
        assert_eq!(forest_coefficient(&chain).unwrap(), LaurentPoly::one());
    }

    fn word(ctx: &RootContext, n: usize, w: &[usize]) -> TLElement {
        TLElement::from_word(&GeneratorWord::new(n, w.to_vec()).unwrap(), ctx)
    }

    #[test]
    fn e2_at_ell_3() {
        let ctx = RootContext::new(3).unwrap();
        let expected = &TLElement::identity(2, &ctx) - &word(&ctx, 2, &[1]);
        assert_eq!(jw_explicit(&ctx).unwrap(), expected);
        assert_eq!(jw_wenzl(2, &ctx).unwrap(), expected);
    }

    #[test]
    fn e3_at_ell_4() {
        let ctx = RootContext::new(4).unwrap();
        let one = TLElement::identity(3, &ctx);
        let f1 = word(&ctx, 3, &[1]);
        let f2 = word(&ctx, 3, &[2]);
        let expected = &(&(&one + &word(&ctx, 3, &[1, 2])) + &word(&ctx, 3, &[2, 1]))
            - &(&f1 + &f2).scale(ctx.delta());
        assert_eq!(jw_explicit(&ctx).unwrap(), expected);
        assert_eq!(jw_wenzl(3, &ctx).unwrap(), expected);
    }

    #[test]
    fn recursion_ratio_is_minus_quantum_ratio() {
        for ell in 3..=7 {
            let ctx = RootContext::new(ell).unwrap();
            let (mut u_prev, mut u) = (ctx.one(), ctx.delta().clone());
            for m in 1..(ell as u32 - 1) {
                let lhs = &u_prev * &ctx.quantum_int(m + 1);
                let rhs = -(&u * &ctx.quantum_int(m));
                assert_eq!(lhs, rhs);
                let next = &(ctx.delta() * &u) - &u_prev;
                u_prev = std::mem::replace(&mut u, next);
            }
        }
    }

    #[test]
    fn recursion_stops_at_vanishing_denominator() {
        let ctx = RootContext::new(4).unwrap();
        assert!(jw_wenzl(1, &ctx).unwrap() == TLElement::identity(1, &ctx));
        assert_eq!(
            jw_wenzl(5, &ctx).unwrap_err(),
            Error::VanishingQuantumInt(4)
        );
    }

    #[test]
    fn idempotent_and_killed_at_ell_5() {
        let ctx = RootContext::new(5).unwrap();
        let e = jw_explicit(&ctx).unwrap();
        assert_eq!(e.len(), 14);
        assert_eq!(&e * &e, e);
        for i in 1..4 {
            let f = TLElement::generator(i, 4, &ctx).unwrap();
            assert!((&f * &e).is_zero());
            assert!((&e * &f).is_zero());
        }
        assert!(e.markov_trace().is_zero());
        assert_eq!(e.adjoint(), e);
    }
}
