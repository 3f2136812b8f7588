//! Exact rank of the trace form `(x, y) ↦ tr(x* y)` on `TL_n`.
//!
//! Small cases use fraction-free elimination. Larger ones are certified
//! from both sides: the rank modulo a prime is a lower bound, and an
//! explicit family of radical vectors, independent modulo the same prime,
//! gives the matching upper bound. The radical vectors are products
//! `a · (E_{ℓ-1} ⊗ id) · b`; they lie in the radical because
//! `tr(z · (E_{ℓ-1} ⊗ id)) = 0` for every diagram `z`, which is checked
//! exactly, and because the trace is cyclic.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{trace_form_gram, TLElement};
use crate::diagram::{compose_partners, enumerate_all, enumerate_monic, PlanarDiagram};
use crate::error::{Error, Result};
use crate::jw::jw_explicit;
use crate::linalg::{rank_mod_p, GramMatrix, ModEchelon, BAREISS_LIMIT};
use crate::modp::{prime_fields, PrimeField};
use crate::par;
use crate::scalars::{Cyclotomic, RootContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum RankMethod {
    Bareiss,
    /// Rank modulo `prime` plus `witnesses` radical vectors.
    RadicalCertificate {
        prime: u64,
        witnesses: usize,
    },
    Multimodular {
        primes: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TraceFormRank {
    pub n: usize,
    pub size: usize,
    pub rank: usize,
    #[serde(flatten)]
    pub method: RankMethod,
}

pub fn trace_form_rank(n: usize, ctx: &RootContext) -> Result<TraceFormRank> {
    let g = trace_form_gram(n, ctx);
    let size = g.size();
    if size <= BAREISS_LIMIT {
        return Ok(TraceFormRank {
            n,
            size,
            rank: g.rank_exact(),
            method: RankMethod::Bareiss,
        });
    }
    if let Some((rank, prime, witnesses)) = radical_certificate(n, ctx, &g)? {
        return Ok(TraceFormRank {
            n,
            size,
            rank,
            method: RankMethod::RadicalCertificate { prime, witnesses },
        });
    }
    let m = g.rank_modular()?;
    Ok(TraceFormRank {
        n,
        size,
        rank: m.rank,
        method: RankMethod::Multimodular { primes: m.primes },
    })
}

/// Sparse `(index, value)` terms over `F_p`.
type Sparse = Vec<(usize, u64)>;

struct Reduced {
    field: PrimeField,
    delta_pows: Vec<u64>,
}

impl Reduced {
    fn delta_pow(&self, e: usize) -> u64 {
        self.delta_pows[e]
    }
}

/// Terms of an element as partner arrays with coefficients mod `p`.
fn reduce_terms(x: &TLElement, f: &PrimeField) -> Option<Vec<(Vec<usize>, u64)>> {
    x.terms()
        .map(|(d, c)| f.reduce(c).map(|v| (d.partners(), v)))
        .collect()
}

/// `(rank, prime, witness count)` when the two bounds meet, `None` when the
/// search for radical vectors comes up short.
fn radical_certificate(
    n: usize,
    ctx: &RootContext,
    g: &GramMatrix,
) -> Result<Option<(usize, u64, usize)>> {
    let k = (ctx.ell() - 1) as usize;
    let size = g.size();
    let e = jw_explicit(ctx)?;

    let (field, lower, e_mod) = prime_fields(ctx.order())
        .take(64)
        .find_map(|f| {
            let mut m = g.reduce(&f)?;
            let e_mod = reduce_terms(&e, &f)?;
            f.inv(f.reduce(ctx.delta())?)?;
            Some((f, rank_mod_p(&mut m, size, size, &f), e_mod))
        })
        .ok_or_else(|| Error::Internal("no usable prime".into()))?;
    if lower == size {
        return Ok(Some((size, field.p(), 0)));
    }
    if n < k {
        return Ok(None);
    }

    let basis = enumerate_all(n, n);
    let index: HashMap<&PlanarDiagram, usize> =
        basis.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let x = e.tensor_identity(n - k);
    let coords: Vec<Cyclotomic> = basis.iter().map(|d| x.coeff(d)).collect();
    if !g.mul_vec(&coords).iter().all(Cyclotomic::is_zero) {
        return Err(Error::Internal(
            "E ⊗ id is not in the radical of the trace form".into(),
        ));
    }

    let red = Reduced {
        field,
        delta_pows: (0..=2 * n + 2)
            .map(|i| field.pow(field.reduce(ctx.delta()).unwrap(), i as u64))
            .collect(),
    };
    let needed = size - lower;

    // Triangular witnesses S (E ⊗ id_{t-k}) T* with leading term S T*.
    let mut pairs = Vec::new();
    let mut pads: HashMap<usize, Vec<(Vec<usize>, u64)>> = HashMap::new();
    let mut monics: HashMap<usize, Vec<(Vec<usize>, Vec<usize>)>> = HashMap::new();
    for t in (k..=n).filter(|t| (n - t) % 2 == 0) {
        let pad = pad_terms(&e_mod, k, t);
        pads.insert(t, pad);
        let ms: Vec<(Vec<usize>, Vec<usize>)> = enumerate_monic(t, n)
            .iter()
            .map(|d| (d.partners(), d.star().partners()))
            .collect();
        for s in 0..ms.len() {
            for r in 0..ms.len() {
                pairs.push((t, s, r));
            }
        }
        monics.insert(t, ms);
    }
    if pairs.len() > needed {
        return Err(Error::Internal(
            "radical vectors exceed the modular corank".into(),
        ));
    }
    let witnesses: Vec<(usize, Sparse)> = par::map(&pairs, |&(t, s, r)| {
        let ms = &monics[&t];
        let (s_up, _) = &ms[s];
        let (_, r_star) = &ms[r];
        let (lead, _) = compose_partners(r_star, n, s_up, n);
        let mut terms = Sparse::new();
        for (c, h) in &pads[&t] {
            let (low, l1) = compose_partners(r_star, n, c, t);
            let (d, l2) = compose_partners(&low.partners(), n, s_up, n);
            let v = red.field.mul(*h, red.delta_pow(l1 + l2));
            terms.push((index[&d], v));
        }
        (index[&lead], terms)
    });
    let mut by_lead: Vec<Option<Sparse>> = vec![None; size];
    for (lead, w) in witnesses {
        by_lead[lead] = Some(w);
    }
    let mut high: Vec<usize> = (0..size)
        .filter(|&i| basis[i].through_strands() >= k)
        .collect();
    high.sort_by_key(|&i| std::cmp::Reverse(basis[i].through_strands()));
    if high.iter().any(|&i| by_lead[i].is_none()) {
        return Err(Error::Internal(
            "a high diagram has no triangular witness".into(),
        ));
    }
    let low: Vec<usize> = (0..size)
        .filter(|&i| basis[i].through_strands() < k)
        .collect();

    // Remaining witnesses: products D (E ⊗ id) D' reduced modulo the
    // triangular ones, kept when independent on the low diagrams.
    let extra_needed = needed - pairs.len();
    let x_mod = reduce_terms(&x, &field).expect("E reduces");
    let partners: Vec<Vec<usize>> = basis.iter().map(|d| d.partners()).collect();
    // A cap among the first k points next to E is absorbed by some f_i and
    // kills the product.
    let below: Vec<usize> = (0..size)
        .filter(|&i| (n..n + k).all(|j| !(n..n + k).contains(&partners[i][j])))
        .collect();
    let above: Vec<usize> = (0..size)
        .filter(|&i| (0..k).all(|j| partners[i][j] >= k))
        .collect();
    let mut echelon = ModEchelon::new(field, low.len());
    let total = (above.len() * below.len()) as u64;
    let stride = coprime_stride(total);
    let mut next = 0u64;
    const BATCH: usize = 256;
    while echelon.rank() < extra_needed && next < total {
        let ids: Vec<u64> = (next..(next + BATCH as u64).min(total)).collect();
        next += ids.len() as u64;
        let vectors = par::map(&ids, |&id| {
            let pos = (id * stride % total) as usize;
            let (a, b) = (above[pos / below.len()], below[pos % below.len()]);
            let mut v = vec![0u64; size];
            for (c, h) in &x_mod {
                let (mid, l1) = compose_partners(&partners[b], n, c, n);
                let (d, l2) = compose_partners(&mid.partners(), n, &partners[a], n);
                let j = index[&d];
                v[j] = field.add(v[j], field.mul(*h, red.delta_pow(l1 + l2)));
            }
            for &i in &high {
                let a = v[i];
                if a == 0 {
                    continue;
                }
                for &(j, w) in by_lead[i].as_ref().unwrap() {
                    v[j] = field.sub(v[j], field.mul(a, w));
                }
            }
            let low_part: Vec<u64> = low.iter().map(|&i| v[i]).collect();
            low_part.iter().any(|&x| x != 0).then_some(low_part)
        });
        for v in vectors.into_iter().flatten() {
            if echelon.rank() == extra_needed {
                break;
            }
            echelon.insert(v);
        }
    }
    if echelon.rank() < extra_needed {
        return Ok(None);
    }
    Ok(Some((lower, field.p(), needed)))
}

/// `E ⊗ id_{t-k}` as terms on `t` strands.
fn pad_terms(e_mod: &[(Vec<usize>, u64)], k: usize, t: usize) -> Vec<(Vec<usize>, u64)> {
    let extra = t - k;
    e_mod
        .iter()
        .map(|(p, h)| {
            // partners are 0-based over bottom 0..k then top k..2k
            let mut out = vec![0; 2 * t];
            let shift = |j: usize| if j < k { j } else { j - k + t };
            for (i, &j) in p.iter().enumerate() {
                out[shift(i)] = shift(j);
            }
            for s in 0..extra {
                out[k + s] = t + k + s;
                out[t + k + s] = k + s;
            }
            (out, *h)
        })
        .collect()
}

fn coprime_stride(total: u64) -> u64 {
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut s = 1_000_003u64 % total.max(1);
    while total > 1 && gcd(s, total) != 1 {
        s += 1;
    }
    s.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_matches_tensor() {
        let ctx = RootContext::new(4).unwrap();
        let e = jw_explicit(&ctx).unwrap();
        let f = prime_fields(8).next().unwrap();
        let e_mod = reduce_terms(&e, &f).unwrap();
        let padded = reduce_terms(&e.tensor_identity(2), &f).unwrap();
        let mut a = pad_terms(&e_mod, 3, 5);
        let mut b = padded;
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn certificate_agrees_with_bareiss() {
        // sizes 42 and 132 are beyond the direct threshold
        for ell in 3..=6 {
            let ctx = RootContext::new(ell).unwrap();
            for n in 5..=6 {
                let g = trace_form_gram(n, &ctx);
                let r = trace_form_rank(n, &ctx).unwrap();
                assert!(
                    matches!(r.method, RankMethod::RadicalCertificate { .. }),
                    "{r:?}"
                );
                if n == 5 {
                    assert_eq!(r.rank, g.rank_exact(), "ell={ell}");
                } else {
                    assert_eq!(r.rank, g.rank_modular().unwrap().rank, "ell={ell}");
                }
            }
        }
    }

    #[test]
    fn small_sizes_use_bareiss() {
        let ctx = RootContext::new(5).unwrap();
        let r = trace_form_rank(4, &ctx).unwrap();
        assert_eq!((r.rank, r.method), (13, RankMethod::Bareiss));
    }
}
