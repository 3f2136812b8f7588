//! The Ising case `ℓ = 4`: the Clifford algebra on `γ_1..γ_n` with
//! `γ_iγ_j + γ_jγ_i = δ_ij`, and the map `φ` from `TL_n` onto its even part.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{GeneratorWord, TLElement};
use crate::diagram::{diagram_words, PlanarDiagram};
use crate::error::{Error, Result};
use crate::linalg::FieldEchelon;
use crate::scalars::{Cyclotomic, RootContext};

/// Subsets of `{1..n}` are bitmasks, bit `i-1` standing for `γ_i`.
pub type Subset = u32;

pub const MAX_GENERATORS: usize = 24;

#[derive(Clone)]
pub struct CliffordElement {
    n: usize,
    ctx: RootContext,
    terms: BTreeMap<Subset, Cyclotomic>,
}

fn check_ising(ctx: &RootContext) -> Result<()> {
    if ctx.ell() != 4 {
        return Err(Error::Mismatch(format!(
            "the Clifford realization needs ell = 4, got {}",
            ctx.ell()
        )));
    }
    Ok(())
}

impl CliffordElement {
    pub fn zero(n: usize, ctx: &RootContext) -> Result<Self> {
        check_ising(ctx)?;
        if n > MAX_GENERATORS {
            return Err(Error::Index(format!("at most {MAX_GENERATORS} generators")));
        }
        Ok(Self {
            n,
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        })
    }

    pub fn one(n: usize, ctx: &RootContext) -> Result<Self> {
        Self::monomial(n, 0, ctx.one(), ctx)
    }

    /// `c · γ_J`.
    pub fn monomial(n: usize, subset: Subset, c: Cyclotomic, ctx: &RootContext) -> Result<Self> {
        let mut out = Self::zero(n, ctx)?;
        if subset >> n != 0 {
            return Err(Error::Index(format!(
                "subset {subset:#b} exceeds {n} generators"
            )));
        }
        out.add_term(subset, c);
        Ok(out)
    }

    pub fn gamma(i: usize, n: usize, ctx: &RootContext) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Index(format!("γ_{i} with {n} generators")));
        }
        Self::monomial(n, 1 << (i - 1), ctx.one(), ctx)
    }

    fn add_term(&mut self, s: Subset, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&s) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&s);
                }
            }
            None => {
                self.terms.insert(s, c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (Subset, &Cyclotomic)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn coeff(&self, s: Subset) -> Cyclotomic {
        self.terms
            .get(&s)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every term has an even number of generators.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|s| s.count_ones() % 2 == 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Mismatch(format!(
                "C_{} against C_{}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&self.ctx.int(-1)))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self {
            n: self.n,
            ctx: self.ctx.clone(),
            terms: BTreeMap::new(),
        };
        for (s, a) in &self.terms {
            out.add_term(*s, a * c);
        }
        out
    }

    /// Coordinates over all `2^n` subsets.
    pub fn to_vector(&self) -> Vec<Cyclotomic> {
        (0..1u32 << self.n).map(|s| self.coeff(s)).collect()
    }
}

impl PartialEq for CliffordElement {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.ctx.same_as(&other.ctx) && self.terms == other.terms
    }
}

impl Eq for CliffordElement {}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| {
                let idx: Vec<String> = (0..self.n)
                    .filter(|i| s >> i & 1 == 1)
                    .map(|i| (i + 1).to_string())
                    .collect();
                format!("({c})γ{{{}}}", idx.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `γ_A γ_B = (-1)^{#{(a,b) : a > b}} (1/2)^{|A ∩ B|} γ_{A Δ B}`.
fn basis_product(a: Subset, b: Subset) -> (bool, u32, Subset) {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    (swaps % 2 == 1, (a & b).count_ones(), a ^ b)
}

pub fn clifford_mul(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    a.check_same(b)?;
    let half = a.ctx.int(2).inv().expect("2 is invertible");
    let halves: Vec<Cyclotomic> = (0..=a.n as u32).map(|k| half.pow(k)).collect();
    let mut out = CliffordElement::zero(a.n, &a.ctx)?;
    for (sa, ca) in &a.terms {
        for (sb, cb) in &b.terms {
            let (negative, repeats, s) = basis_product(*sa, *sb);
            let mut c = &(ca * cb) * &halves[repeats as usize];
            if negative {
                c = -c;
            }
            out.add_term(s, c);
        }
    }
    Ok(out)
}

pub fn commutator(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    clifford_mul(a, b)?.sub(&clifford_mul(b, a)?)
}

/// Coefficient of the empty product.
pub fn constant_term(a: &CliffordElement) -> Cyclotomic {
    a.coeff(0)
}

/// `φ(f_j) = δ^{-1} (1 + 2i γ_j γ_{j+1})` with `i = ζ_8^2`. For the
/// standard `q` this is `(1 + 2iγ_jγ_{j+1}) / √2`.
pub fn phi_generator(j: usize, n: usize, ctx: &RootContext) -> Result<CliffordElement> {
    check_ising(ctx)?;
    if j == 0 || j >= n {
        return Err(Error::GeneratorIndex { i: j, n });
    }
    let two_i = &ctx.int(2) * &Cyclotomic::zeta_pow(ctx.field(), 2);
    let pair = 0b11 << (j - 1);
    let mut x = CliffordElement::one(n, ctx)?;
    x.add_term(pair, two_i);
    Ok(x.scale(ctx.delta_inv()))
}

/// Image of a word under the multiplicative extension of `φ`.
pub fn phi(w: &GeneratorWord, ctx: &RootContext) -> Result<CliffordElement> {
    let mut acc = CliffordElement::one(w.n(), ctx)?;
    for &j in w.indices() {
        acc = clifford_mul(&acc, &phi_generator(j, w.n(), ctx)?)?;
    }
    Ok(acc)
}

fn words_for(n: usize) -> Arc<BTreeMap<PlanarDiagram, Vec<usize>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<BTreeMap<PlanarDiagram, Vec<usize>>>>>> =
        OnceLock::new();
    let mut guard = CACHE
        .get_or_init(Default::default)
        .lock()
        .expect("word cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(diagram_words(n)))
        .clone()
}

/// `φ` on a general element, through a reduced word for each diagram.
pub fn phi_element(x: &TLElement) -> Result<CliffordElement> {
    let ctx = x.ctx();
    let words = words_for(x.n());
    let mut out = CliffordElement::zero(x.n(), ctx)?;
    for (d, c) in x.terms() {
        let w = words
            .get(d)
            .ok_or_else(|| Error::Internal(format!("no word for {d:?}")))?;
        let img = phi(&GeneratorWord::new(x.n(), w.clone())?, ctx)?;
        out = out.add(&img.scale(c))?;
    }
    Ok(out)
}

/// `ω_ij = (γ_iγ_j - γ_jγ_i) / 2`.
pub fn omega(i: usize, j: usize, n: usize, ctx: &RootContext) -> Result<CliffordElement> {
    if i == 0 || j > n || i >= j {
        return Err(Error::Index(format!(
            "ω_{{{i},{j}}} needs 1 <= i < j <= {n}"
        )));
    }
    let (gi, gj) = (
        CliffordElement::gamma(i, n, ctx)?,
        CliffordElement::gamma(j, n, ctx)?,
    );
    let half = ctx.int(2).inv().expect("2 is invertible");
    Ok(commutator(&gi, &gj)?.scale(&half))
}

/// Dimension of the span of `φ(w)` over all words of length at most
/// `max_len`, grown one letter at a time from the newly found vectors.
pub fn span_dimension(n: usize, max_len: usize, ctx: &RootContext) -> Result<usize> {
    let gens: Vec<CliffordElement> = (1..n)
        .map(|j| phi_generator(j, n, ctx))
        .collect::<Result<_>>()?;
    let mut echelon = FieldEchelon::new(1 << n);
    let one = CliffordElement::one(n, ctx)?;
    echelon.insert(one.to_vector());
    let mut frontier = vec![one];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                let y = clifford_mul(x, g)?;
                if echelon.insert(y.to_vector()) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(echelon.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> RootContext {
        RootContext::new(4).unwrap()
    }

    #[test]
    fn generator_relations() {
        let c = ctx();
        let g1 = CliffordElement::gamma(1, 3, &c).unwrap();
        let g2 = CliffordElement::gamma(2, 3, &c).unwrap();
        let half = c.int(2).inv().unwrap();
        assert_eq!(
            clifford_mul(&g1, &g1).unwrap(),
            CliffordElement::one(3, &c).unwrap().scale(&half)
        );
        let g12 = clifford_mul(&g1, &g2).unwrap();
        assert_eq!(
            g12,
            CliffordElement::monomial(3, 0b11, c.one(), &c).unwrap()
        );
        assert_eq!(clifford_mul(&g2, &g1).unwrap(), g12.scale(&c.int(-1)));
        let quarter = -(&half * &half);
        assert_eq!(
            clifford_mul(&g12, &g12).unwrap(),
            CliffordElement::one(3, &c).unwrap().scale(&quarter)
        );
        assert!(constant_term(&g12).is_zero());
    }

    #[test]
    fn phi_examples() {
        let c = ctx();
        let f = phi(&GeneratorWord::new(3, vec![1]).unwrap(), &c).unwrap();
        assert_eq!(clifford_mul(&f, &f).unwrap(), f.scale(c.delta()));
        assert_eq!(constant_term(&f), c.delta_inv().clone());
        assert_eq!(
            phi(&GeneratorWord::empty(3), &c).unwrap(),
            CliffordElement::one(3, &c).unwrap()
        );
        assert!(f.is_even());
    }

    #[test]
    fn e3_is_in_the_kernel() {
        let c = ctx();
        let e3 = crate::jw::jw_explicit(&c).unwrap();
        assert!(phi_element(&e3).unwrap().is_zero());
    }

    #[test]
    fn omega_commutators() {
        let c = ctx();
        let w = |i, j| omega(i, j, 4, &c).unwrap();
        assert!(commutator(&w(1, 2), &w(3, 4)).unwrap().is_zero());
        assert_eq!(commutator(&w(1, 2), &w(2, 3)).unwrap(), w(1, 3));
        assert!(omega(2, 2, 4, &c).is_err());
    }

    #[test]
    fn span_of_n4() {
        assert_eq!(span_dimension(4, 8, &ctx()).unwrap(), 8);
        assert!(span_dimension(3, 2, &RootContext::new(5).unwrap()).is_err());
    }
}
