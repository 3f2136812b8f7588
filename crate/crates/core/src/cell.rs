//! Cell modules `W_t(n)`: the monic-diagram basis, the `TL_n` action, the
//! invariant form and its radical.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::TLElement;
use crate::diagram::{compose_partners, enumerate_monic, PlanarDiagram};
use crate::error::{Error, Result};
use crate::jw::jw_explicit;
use crate::linalg::GramMatrix;
use crate::par;
use crate::scalars::{Cyclotomic, RootContext};

/// Ordered monic diagrams `t → n`.
#[derive(Clone, Debug)]
pub struct CellBasis {
    t: usize,
    n: usize,
    diagrams: Vec<PlanarDiagram>,
    index: HashMap<PlanarDiagram, usize>,
}

impl CellBasis {
    pub fn new(t: usize, n: usize) -> Self {
        let diagrams = enumerate_monic(t, n);
        let index = diagrams
            .iter()
            .enumerate()
            .map(|(i, d)| (d.clone(), i))
            .collect();
        Self {
            t,
            n,
            diagrams,
            index,
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    pub fn diagrams(&self) -> &[PlanarDiagram] {
        &self.diagrams
    }

    pub fn index_of(&self, d: &PlanarDiagram) -> Option<usize> {
        self.index.get(d).copied()
    }

    pub fn zero(&self, ctx: &RootContext) -> CellVector {
        CellVector(vec![ctx.zero(); self.len()])
    }

    pub fn basis_vector(&self, i: usize, ctx: &RootContext) -> CellVector {
        let mut v = self.zero(ctx);
        v.0[i] = ctx.one();
        v
    }
}

/// Coordinates over a [`CellBasis`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellVector(pub Vec<Cyclotomic>);

impl CellVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Cyclotomic::is_zero)
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.0
    }
}

/// Exponent `k` with `(d1, d2) = δ^k`, or `None` when the form vanishes.
fn form_exponent(d1_star: &[usize], d2: &[usize], t: usize) -> Option<i32> {
    let (prod, loops) = compose_partners(d2, t, d1_star, t);
    prod.is_monic().then_some(loops as i32)
}

/// `(d1, d2)`: `δ^loops` when `d1* d2` is the identity after removing
/// loops, zero otherwise.
pub fn cell_form(d1: &PlanarDiagram, d2: &PlanarDiagram, ctx: &RootContext) -> Result<Cyclotomic> {
    if d1.bottom() != d2.bottom() || d1.top() != d2.top() {
        return Err(Error::Mismatch(format!(
            "{d1:?} and {d2:?} lie in different cell modules"
        )));
    }
    if !d1.is_monic() || !d2.is_monic() {
        return Err(Error::Mismatch("cell forms take monic diagrams".into()));
    }
    let (prod, loops) = d2.compose(&d1.star())?;
    Ok(if prod.is_monic() {
        ctx.delta_pow(loops as i64)
    } else {
        ctx.zero()
    })
}

/// Gram matrix of the cell form on `W_t(n)`.
pub fn gram(t: usize, n: usize, ctx: &RootContext) -> GramMatrix {
    gram_on(&CellBasis::new(t, n), ctx)
}

pub fn gram_on(basis: &CellBasis, ctx: &RootContext) -> GramMatrix {
    let t = basis.t;
    let partners: Vec<Vec<usize>> = basis.diagrams.iter().map(|d| d.partners()).collect();
    let stars: Vec<Vec<usize>> = basis.diagrams.iter().map(|d| d.star().partners()).collect();
    let size = basis.len();
    let rows = par::map_range(size, |i| {
        (0..size)
            .map(|j| form_exponent(&stars[i], &partners[j], t))
            .collect::<Vec<_>>()
    });
    GramMatrix::from_rows(ctx, rows)
}

/// `dim L_t(n)`, the rank of the cell form.
pub fn gram_rank(t: usize, n: usize, ctx: &RootContext) -> usize {
    gram(t, n, ctx).rank()
}

/// Basis of the radical of the form, in reduced echelon form.
pub fn radical_basis(t: usize, n: usize, ctx: &RootContext) -> Vec<CellVector> {
    gram(t, n, ctx)
        .nullspace()
        .into_iter()
        .map(CellVector)
        .collect()
}

/// `(v, w)` through a precomputed Gram matrix.
pub fn form(g: &GramMatrix, v: &CellVector, w: &CellVector) -> Cyclotomic {
    let gw = g.mul_vec(&w.0);
    v.0.iter()
        .zip(&gw)
        .fold(g.ctx().zero(), |acc, (a, b)| &acc + &(a * b))
}

/// `a · v`: compose each basis diagram with `a` on top and drop the terms
/// that lose through-strands.
pub fn act(a: &TLElement, v: &CellVector, basis: &CellBasis) -> Result<CellVector> {
    if a.n() != basis.n {
        return Err(Error::Mismatch(format!(
            "TL_{} cannot act on W_{}({})",
            a.n(),
            basis.t,
            basis.n
        )));
    }
    if v.len() != basis.len() {
        return Err(Error::Mismatch(
            "vector length does not match the basis".into(),
        ));
    }
    let ctx = a.ctx();
    let t = basis.t;
    let terms: Vec<(Vec<usize>, &Cyclotomic)> = a.terms().map(|(d, c)| (d.partners(), c)).collect();
    let mut out = basis.zero(ctx);
    for (i, x) in v.0.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let low = basis.diagrams[i].partners();
        for (up, c) in &terms {
            let (d, loops) = compose_partners(&low, t, up, basis.n);
            if !d.is_monic() {
                continue;
            }
            let j = basis
                .index_of(&d)
                .ok_or_else(|| Error::Internal("monic image outside basis".into()))?;
            let coeff = &(x * *c) * &ctx.delta_pow(loops as i64);
            out.0[j] += &coeff;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JwAction {
    /// `E_{ℓ-1} ⊗ id` annihilates `W_t(n)`.
    pub kills_cell: bool,
    /// Every image lies in the radical, so `L_t(n)` is annihilated.
    pub kills_simple: bool,
}

/// Applies `E_{ℓ-1} ⊗ id^{n-ℓ+1}` to every basis vector of `W_t(n)`.
pub fn jw_action_test(t: usize, n: usize, ctx: &RootContext) -> Result<JwAction> {
    let k = (ctx.ell() - 1) as usize;
    if n < k {
        return Err(Error::TooFewStrands { n, min: k });
    }
    let e = jw_explicit(ctx)?.tensor_identity(n - k);
    let basis = CellBasis::new(t, n);
    let g = gram_on(&basis, ctx);
    let images = par::map_range(basis.len(), |i| {
        act(&e, &basis.basis_vector(i, ctx), &basis)
    });
    let mut kills_cell = true;
    let mut kills_simple = true;
    for img in images {
        let img = img?;
        if img.is_zero() {
            continue;
        }
        kills_cell = false;
        if !g.mul_vec(&img.0).iter().all(Cyclotomic::is_zero) {
            kills_simple = false;
        }
    }
    Ok(JwAction {
        kills_cell,
        kills_simple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(t: usize, n: usize, pairs: &[(usize, usize)]) -> PlanarDiagram {
        PlanarDiagram::new(t, n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn form_examples() {
        let ctx = RootContext::new(5).unwrap();
        let id = PlanarDiagram::identity(3);
        assert!(cell_form(&id, &id, &ctx).unwrap().is_one());
        let cup = d(0, 2, &[(1, 2)]);
        assert_eq!(cell_form(&cup, &cup, &ctx).unwrap(), ctx.delta().clone());
    }

    #[test]
    fn gram_examples() {
        let ctx = RootContext::new(5).unwrap();
        let g = gram(1, 3, &ctx);
        assert_eq!(g.size(), 2);
        assert_eq!(
            (
                g.exponent(0, 0),
                g.exponent(0, 1),
                g.exponent(1, 0),
                g.exponent(1, 1)
            ),
            (Some(1), Some(0), Some(0), Some(1))
        );
        let g0 = gram(0, 4, &ctx);
        assert_eq!(
            (g0.exponent(0, 0), g0.exponent(0, 1), g0.exponent(1, 1)),
            (Some(2), Some(1), Some(2))
        );
        let gn = gram(4, 4, &ctx);
        assert_eq!((gn.size(), gn.exponent(0, 0)), (1, Some(0)));
        assert!(g.is_symmetric() && g0.is_symmetric());
    }

    #[test]
    fn action_examples() {
        let ctx = RootContext::new(5).unwrap();
        let b22 = CellBasis::new(2, 2);
        let f1 = TLElement::generator(1, 2, &ctx).unwrap();
        let v = b22.basis_vector(0, &ctx);
        assert!(act(&f1, &v, &b22).unwrap().is_zero());
        assert_eq!(act(&TLElement::identity(2, &ctx), &v, &b22).unwrap(), v);
        let b02 = CellBasis::new(0, 2);
        let cup = b02.basis_vector(0, &ctx);
        let image = act(&f1, &cup, &b02).unwrap();
        assert_eq!(image.0, vec![ctx.delta().clone()]);
    }

    #[test]
    fn ranks_from_examples() {
        assert_eq!(gram_rank(1, 3, &RootContext::new(3).unwrap()), 1);
        assert_eq!(gram_rank(2, 8, &RootContext::new(5).unwrap()), 21);
        assert_eq!(gram_rank(1, 7, &RootContext::new(4).unwrap()), 8);
    }

    #[test]
    fn radical_examples() {
        let c5 = RootContext::new(5).unwrap();
        let g = gram(2, 8, &c5);
        let rad = radical_basis(2, 8, &c5);
        assert_eq!(rad.len(), 7);
        for v in &rad {
            assert!(g.mul_vec(&v.0).iter().all(Cyclotomic::is_zero));
        }
        assert!(radical_basis(0, 2, &RootContext::new(7).unwrap()).is_empty());
        assert!(radical_basis(3, 3, &c5).is_empty());
    }

    #[test]
    fn jw_action_examples() {
        let ctx = RootContext::new(5).unwrap();
        // g(1) = 7: below that W_1 is simple and killed outright
        assert!(jw_action_test(1, 5, &ctx).unwrap().kills_cell);
        // from n = g(1) on, the radical is a copy of L_7 on which E acts
        assert_eq!(
            jw_action_test(1, 7, &ctx).unwrap(),
            JwAction {
                kills_cell: false,
                kills_simple: true
            }
        );
        assert_eq!(
            jw_action_test(3, 7, &ctx).unwrap(),
            JwAction {
                kills_cell: false,
                kills_simple: true
            }
        );
        assert!(!jw_action_test(5, 7, &ctx).unwrap().kills_simple);
        assert!(matches!(
            jw_action_test(1, 3, &ctx),
            Err(Error::TooFewStrands { .. })
        ));
    }
}
