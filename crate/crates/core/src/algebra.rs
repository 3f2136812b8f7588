//! The Temperley-Lieb algebra `TL_n(q)` as linear combinations of planar
//! `n → n` diagrams with coefficients in `Q(ζ_{2ℓ})`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::diagram::{compose_partners, enumerate_all, PlanarDiagram};
use crate::error::{Error, Result};
use crate::linalg::GramMatrix;
use crate::par;
use crate::scalars::{Cyclotomic, RootContext};

/// A word `f_{i1} f_{i2} ⋯ f_{ik}` in the generators of `TL_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorWord {
    n: usize,
    indices: Vec<usize>,
}

impl GeneratorWord {
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i == 0 || i >= n) {
            return Err(Error::GeneratorIndex { i, n });
        }
        Ok(Self { n, indices })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            indices: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Clone)]
pub struct TLElement {
    n: usize,
    ctx: RootContext,
    terms: BTreeMap<PlanarDiagram, Cyclotomic>,
}

impl TLElement {
    pub fn zero(n: usize, ctx: &RootContext) -> Self {
        Self {
            n,
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, ctx: &RootContext) -> Self {
        Self::from_diagram(PlanarDiagram::identity(n), ctx.one(), ctx)
    }

    pub fn generator(i: usize, n: usize, ctx: &RootContext) -> Result<Self> {
        Ok(Self::from_diagram(
            PlanarDiagram::generator(i, n)?,
            ctx.one(),
            ctx,
        ))
    }

    /// `coeff · d` for an `n → n` diagram `d`.
    pub fn from_diagram(d: PlanarDiagram, coeff: Cyclotomic, ctx: &RootContext) -> Self {
        assert_eq!(d.bottom(), d.top(), "algebra elements need square diagrams");
        let mut out = Self::zero(d.top(), ctx);
        out.add_term(d, coeff);
        out
    }

    pub fn from_terms(
        n: usize,
        ctx: &RootContext,
        terms: impl IntoIterator<Item = (PlanarDiagram, Cyclotomic)>,
    ) -> Result<Self> {
        let mut out = Self::zero(n, ctx);
        for (d, c) in terms {
            if d.bottom() != n || d.top() != n {
                return Err(Error::Mismatch(format!(
                    "{d:?} is not an {n} → {n} diagram"
                )));
            }
            if c.order() != ctx.order() {
                return Err(Error::Mismatch(format!(
                    "coefficient in Q(ζ_{}) for an algebra over Q(ζ_{})",
                    c.order(),
                    ctx.order()
                )));
            }
            out.add_term(d, c);
        }
        Ok(out)
    }

    /// The product of generator diagrams, with `δ` per closed loop.
    pub fn from_word(w: &GeneratorWord, ctx: &RootContext) -> Self {
        let n = w.n();
        let mut diagram = PlanarDiagram::identity(n);
        let mut loops = 0;
        // f_{i1}⋯f_{ik}: f_{ik} sits at the bottom, so stack from the right.
        for &i in w.indices().iter().rev() {
            let g = PlanarDiagram::generator(i, n).expect("validated word");
            let (d, l) = diagram.compose_unchecked(&g);
            diagram = d;
            loops += l;
        }
        Self::from_diagram(diagram, ctx.delta_pow(loops as i64), ctx)
    }

    fn add_term(&mut self, d: PlanarDiagram, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> &RootContext {
        &self.ctx
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&PlanarDiagram, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn coeff(&self, d: &PlanarDiagram) -> Cyclotomic {
        self.terms
            .get(d)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, other: &TLElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Mismatch(format!(
                "TL_{} against TL_{}",
                self.n, other.n
            )));
        }
        if !self.ctx.same_as(&other.ctx) {
            return Err(Error::Mismatch(
                "elements specialised at different q".into(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &TLElement) -> Result<TLElement> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Cyclotomic) -> TLElement {
        let mut out = Self::zero(self.n, &self.ctx);
        if c.is_zero() {
            return out;
        }
        for (d, a) in &self.terms {
            out.terms.insert(d.clone(), a * c);
        }
        out
    }

    /// `self · other`; `other` acts first, so `(ab)v = a(bv)`.
    pub fn multiply(&self, other: &TLElement) -> Result<TLElement> {
        self.check_same(other)?;
        let n = self.n;
        let lower: Vec<(Vec<usize>, &Cyclotomic)> =
            other.terms.iter().map(|(d, c)| (d.partners(), c)).collect();
        let upper: Vec<(Vec<usize>, &Cyclotomic)> =
            self.terms.iter().map(|(d, c)| (d.partners(), c)).collect();

        // Partial sums keyed by (diagram, loops); exact arithmetic makes the
        // merge order irrelevant to the result.
        let partials = par::map(&upper, |(up, a)| {
            let mut acc: HashMap<(PlanarDiagram, usize), Cyclotomic> = HashMap::new();
            for (low, b) in &lower {
                let key = compose_partners(low, n, up, n);
                let prod = *a * *b;
                match acc.get_mut(&key) {
                    Some(v) => *v += &prod,
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
            acc
        });
        let mut merged: BTreeMap<(PlanarDiagram, usize), Cyclotomic> = BTreeMap::new();
        for part in partials {
            for (k, v) in part {
                match merged.get_mut(&k) {
                    Some(x) => *x += &v,
                    None => {
                        merged.insert(k, v);
                    }
                }
            }
        }
        let mut out = Self::zero(n, &self.ctx);
        for ((d, loops), c) in merged {
            let c = if loops == 0 {
                c
            } else {
                &c * &self.ctx.delta_pow(loops as i64)
            };
            out.add_term(d, c);
        }
        Ok(out)
    }

    /// Reflection of every diagram, coefficients unchanged.
    pub fn adjoint(&self) -> TLElement {
        let mut out = Self::zero(self.n, &self.ctx);
        for (d, c) in &self.terms {
            out.terms.insert(d.star(), c.clone());
        }
        out
    }

    /// `tr(D) = δ^{c-n}` where `c` counts loops in the closure of `D`.
    pub fn markov_trace(&self) -> Cyclotomic {
        let mut acc = self.ctx.zero();
        for (d, c) in &self.terms {
            let e = d.closure_loops() as i64 - self.n as i64;
            acc += &(c * &self.ctx.delta_pow(e));
        }
        acc
    }

    /// `self ⊗ id_k`, an element of `TL_{n+k}`.
    pub fn tensor_identity(&self, k: usize) -> TLElement {
        let id = PlanarDiagram::identity(k);
        let mut out = Self::zero(self.n + k, &self.ctx);
        for (d, c) in &self.terms {
            out.terms.insert(d.tensor(&id), c.clone());
        }
        out
    }

    /// `id_k ⊗ self`, shifting the element `k` strands to the right.
    pub fn shift(&self, k: usize) -> TLElement {
        let id = PlanarDiagram::identity(k);
        let mut out = Self::zero(self.n + k, &self.ctx);
        for (d, c) in &self.terms {
            out.terms.insert(id.tensor(d), c.clone());
        }
        out
    }
}

impl PartialEq for TLElement {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.ctx.same_as(&other.ctx) && self.terms == other.terms
    }
}

impl Eq for TLElement {}

impl fmt::Debug for TLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TL_{}[", self.n)?;
        for (k, (d, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{d:?}")?;
        }
        write!(f, "]")
    }
}

impl Add for &TLElement {
    type Output = TLElement;
    /// Panics when the operands live in different algebras; use
    /// [`TLElement::try_add`] to get an error instead.
    fn add(self, rhs: &TLElement) -> TLElement {
        self.try_add(rhs)
            .expect("adding elements of different algebras")
    }
}

impl Neg for &TLElement {
    type Output = TLElement;
    fn neg(self) -> TLElement {
        self.scale(&-self.ctx.one())
    }
}

impl Sub for &TLElement {
    type Output = TLElement;
    fn sub(self, rhs: &TLElement) -> TLElement {
        self + &(-rhs)
    }
}

impl Mul for &TLElement {
    type Output = TLElement;
    /// Panics on mismatched algebras; [`TLElement::multiply`] reports it.
    fn mul(self, rhs: &TLElement) -> TLElement {
        self.multiply(rhs)
            .expect("multiplying elements of different algebras")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    pairs: Vec<[usize; 2]>,
    coeff: Cyclotomic,
}

#[derive(Serialize)]
struct ElementJson<'a> {
    n: usize,
    ell: u32,
    q_exp: u32,
    terms: Vec<TermJsonRef<'a>>,
}

#[derive(Serialize)]
struct TermJsonRef<'a> {
    pairs: Vec<[usize; 2]>,
    coeff: &'a Cyclotomic,
}

impl Serialize for TLElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            n: self.n,
            ell: self.ctx.ell(),
            q_exp: self.ctx.q_exponent(),
            terms: self
                .terms
                .iter()
                .map(|(d, c)| TermJsonRef {
                    pairs: d.pairs().map(|(a, b)| [a, b]).collect(),
                    coeff: c,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl TLElement {
    /// Parses the JSON form produced by `Serialize`.
    pub fn from_json(v: &serde_json::Value) -> Result<TLElement> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            ell: u32,
            #[serde(default = "one")]
            q_exp: u32,
            terms: Vec<TermJson>,
        }
        fn one() -> u32 {
            1
        }
        let raw: Raw = serde_json::from_value(v.clone())
            .map_err(|e| Error::Mismatch(format!("bad element JSON: {e}")))?;
        let ctx = RootContext::with_q_exponent(raw.ell, raw.q_exp as i64)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let d = PlanarDiagram::new(raw.n, raw.n, t.pairs.into_iter().map(|[a, b]| (a, b)))?;
            terms.push((d, t.coeff));
        }
        TLElement::from_terms(raw.n, &ctx, terms)
    }
}

/// `[tr(D_i* D_j)]` over the diagram basis of `TL_n` in canonical order.
pub fn trace_form_gram(n: usize, ctx: &RootContext) -> GramMatrix {
    let basis = enumerate_all(n, n);
    let partners: Vec<Vec<usize>> = basis.iter().map(|d| d.partners()).collect();
    let stars: Vec<Vec<usize>> = basis.iter().map(|d| d.star().partners()).collect();
    let size = basis.len();
    let rows = par::map_range(size, |i| {
        (0..size)
            .map(|j| {
                // D_i* D_j: D_j at the bottom, D_i* on top.
                let (d, loops) = compose_partners(&partners[j], n, &stars[i], n);
                Some(loops as i32 + d.closure_loops() as i32 - n as i32)
            })
            .collect::<Vec<_>>()
    });
    GramMatrix::from_rows(ctx, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(n: usize, w: &[usize]) -> GeneratorWord {
        GeneratorWord::new(n, w.to_vec()).unwrap()
    }

    #[test]
    fn word_examples() {
        let ctx = RootContext::new(5).unwrap();
        let f1 = TLElement::generator(1, 2, &ctx).unwrap();
        assert_eq!(TLElement::from_word(&word(2, &[1]), &ctx), f1);
        assert_eq!(
            TLElement::from_word(&word(2, &[1, 1]), &ctx),
            f1.scale(ctx.delta())
        );
        let f1_3 = TLElement::generator(1, 3, &ctx).unwrap();
        assert_eq!(TLElement::from_word(&word(3, &[1, 2, 1]), &ctx), f1_3);
        assert_eq!(
            TLElement::from_word(&GeneratorWord::empty(3), &ctx),
            TLElement::identity(3, &ctx)
        );
        assert!(GeneratorWord::new(3, vec![3]).is_err());
    }

    #[test]
    fn multiply_matches_words() {
        let ctx = RootContext::new(4).unwrap();
        for (a, b) in [(vec![1, 2], vec![3, 1]), (vec![2], vec![2, 1, 3])] {
            let wa = TLElement::from_word(&word(4, &a), &ctx);
            let wb = TLElement::from_word(&word(4, &b), &ctx);
            let ab: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
            assert_eq!(&wa * &wb, TLElement::from_word(&word(4, &ab), &ctx));
        }
        let f1 = TLElement::generator(1, 4, &ctx).unwrap();
        let f3 = TLElement::generator(3, 4, &ctx).unwrap();
        assert_eq!(&f1 * &f3, &f3 * &f1);
        let id = TLElement::identity(4, &ctx);
        assert_eq!(&id * &f1, f1);
        let other = RootContext::new(5).unwrap();
        assert!(f1.multiply(&TLElement::identity(4, &other)).is_err());
        assert!(f1.multiply(&TLElement::identity(3, &ctx)).is_err());
    }

    #[test]
    fn adjoint_reverses_words() {
        let ctx = RootContext::new(6).unwrap();
        let w12 = TLElement::from_word(&word(3, &[1, 2]), &ctx);
        let w21 = TLElement::from_word(&word(3, &[2, 1]), &ctx);
        assert_eq!(w12.adjoint(), w21);
        let f1 = TLElement::generator(1, 3, &ctx).unwrap();
        assert_eq!(f1.adjoint(), f1);
    }

    #[test]
    fn trace_values() {
        let ctx = RootContext::new(5).unwrap();
        assert!(TLElement::identity(4, &ctx).markov_trace().is_one());
        let f2 = TLElement::generator(2, 4, &ctx).unwrap();
        assert_eq!(f2.markov_trace(), ctx.delta_inv().clone());
    }

    #[test]
    fn trace_form_small_ranks() {
        let c5 = RootContext::new(5).unwrap();
        assert_eq!(trace_form_gram(3, &c5).rank_exact(), 5);
        let c3 = RootContext::new(3).unwrap();
        assert_eq!(trace_form_gram(3, &c3).rank_exact(), 1);
        let c4 = RootContext::new(4).unwrap();
        assert_eq!(trace_form_gram(3, &c4).rank_exact(), 4);
    }

    #[test]
    fn json_roundtrip() {
        let ctx = RootContext::new(4).unwrap();
        let x = &TLElement::from_word(&word(3, &[1, 2]), &ctx)
            - &TLElement::generator(2, 3, &ctx).unwrap().scale(ctx.delta());
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["ell"], 4);
        assert_eq!(TLElement::from_json(&v).unwrap(), x);
    }
}
