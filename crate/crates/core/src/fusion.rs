//! Truncated Clebsch-Gordan fusion on labels `0..=ℓ-2` and the stable
//! fusion ring with its projections `τ_n`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

fn check_ell(ell: u32) -> Result<()> {
    if ell < 3 {
        return Err(Error::EllTooSmall(ell as i64));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FusionLabel {
    t: usize,
    ell: u32,
}

impl FusionLabel {
    pub fn new(t: usize, ell: u32) -> Result<Self> {
        check_ell(ell)?;
        let max = ell as usize - 2;
        if t > max {
            return Err(Error::LabelOutOfRange { label: t, max });
        }
        Ok(Self { t, ell })
    }

    pub fn value(&self) -> usize {
        self.t
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }
}

/// Multiplicities `m_0, ..., m_{ℓ-2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FusionVector {
    ell: u32,
    mult: Vec<BigInt>,
}

impl FusionVector {
    pub fn zero(ell: u32) -> Result<Self> {
        check_ell(ell)?;
        Ok(Self {
            ell,
            mult: vec![BigInt::zero(); ell as usize - 1],
        })
    }

    /// Basis vector `e_t`.
    pub fn basis(t: usize, ell: u32) -> Result<Self> {
        let label = FusionLabel::new(t, ell)?;
        let mut v = Self::zero(ell)?;
        v.mult[label.t] = BigInt::one();
        Ok(v)
    }

    pub fn from_multiplicities(ell: u32, mult: impl IntoIterator<Item = BigInt>) -> Result<Self> {
        check_ell(ell)?;
        let mult: Vec<BigInt> = mult.into_iter().collect();
        if mult.len() != ell as usize - 1 {
            return Err(Error::Mismatch(format!(
                "{} multiplicities given, ell = {ell} needs {}",
                mult.len(),
                ell - 1
            )));
        }
        Ok(Self { ell, mult })
    }

    pub fn from_i64(ell: u32, mult: &[i64]) -> Result<Self> {
        Self::from_multiplicities(ell, mult.iter().map(|&m| BigInt::from(m)))
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn multiplicities(&self) -> &[BigInt] {
        &self.mult
    }

    pub fn get(&self, t: usize) -> BigInt {
        self.mult.get(t).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ell != other.ell {
            return Err(Error::Mismatch(format!(
                "fusion vectors at ell = {} and {}",
                self.ell, other.ell
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            ell: self.ell,
            mult: self
                .mult
                .iter()
                .zip(&other.mult)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

impl Serialize for FusionVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // small values as numbers, large ones as decimal strings
        s.collect_seq(self.mult.iter().map(|m| match i64::try_from(m) {
            Ok(v) => serde_json::Value::from(v),
            Err(_) => serde_json::Value::from(m.to_string()),
        }))
    }
}

/// `m(s, t) = min(s + t, 2(ℓ-2) - (s + t))`.
pub fn top_label(s: usize, t: usize, ell: u32) -> usize {
    (s + t).min(2 * (ell as usize - 2) - (s + t))
}

/// `e_s ⊗ e_t = Σ e_r` over `r = |s-t|, |s-t|+2, ..., m(s,t)`.
pub fn fuse(s: usize, t: usize, ell: u32) -> Result<FusionVector> {
    let (s, t) = (FusionLabel::new(s, ell)?.t, FusionLabel::new(t, ell)?.t);
    let mut v = FusionVector::zero(ell)?;
    for r in (s.abs_diff(t)..=top_label(s, t, ell)).step_by(2) {
        v.mult[r] = BigInt::one();
    }
    Ok(v)
}

/// Structure constants `N_{st}^r ∈ {0, 1}`.
#[derive(Debug)]
pub struct FusionRing {
    ell: u32,
    size: usize,
    constants: Vec<u8>,
}

impl FusionRing {
    /// Shared table for `ℓ`, built on first use.
    pub fn get(ell: u32) -> Result<Arc<FusionRing>> {
        check_ell(ell)?;
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FusionRing>>>> = OnceLock::new();
        let mut guard = CACHE
            .get_or_init(Default::default)
            .lock()
            .expect("fusion cache poisoned");
        if let Some(r) = guard.get(&ell) {
            return Ok(r.clone());
        }
        let size = ell as usize - 1;
        let mut constants = vec![0u8; size * size * size];
        for s in 0..size {
            for t in 0..size {
                let v = fuse(s, t, ell)?;
                for r in 0..size {
                    constants[(s * size + t) * size + r] = u8::from(v.mult[r].is_one());
                }
            }
        }
        let ring = Arc::new(FusionRing {
            ell,
            size,
            constants,
        });
        guard.insert(ell, ring.clone());
        Ok(ring)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn constant(&self, s: usize, t: usize, r: usize) -> u8 {
        self.constants[(s * self.size + t) * self.size + r]
    }

    /// `table[s][t][r] = N_{st}^r`.
    pub fn table(&self) -> Vec<Vec<Vec<u8>>> {
        (0..self.size)
            .map(|s| {
                (0..self.size)
                    .map(|t| (0..self.size).map(|r| self.constant(s, t, r)).collect())
                    .collect()
            })
            .collect()
    }

    /// Pairs `(s, t)` with `L_r ↦ ⊕ L_s ⊠ L_t` under restriction, read off
    /// as the transpose of the structure constants.
    pub fn restriction(&self, r: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in 0..self.size {
            for t in 0..self.size {
                if self.constant(s, t, r) == 1 {
                    out.push((s, t));
                }
            }
        }
        out
    }

    pub fn product(&self, u: &FusionVector, v: &FusionVector) -> Result<FusionVector> {
        u.check_same(v)?;
        if u.ell != self.ell {
            return Err(Error::Mismatch(format!(
                "vector at ell = {}, ring at {}",
                u.ell, self.ell
            )));
        }
        let mut out = FusionVector::zero(self.ell)?;
        for (s, a) in u.mult.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in v.mult.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for r in 0..self.size {
                    if self.constant(s, t, r) == 1 {
                        out.mult[r] += &ab;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Bilinear extension of [`fuse`], computed label by label.
pub fn fuse_vectors(u: &FusionVector, v: &FusionVector) -> Result<FusionVector> {
    u.check_same(v)?;
    let mut out = FusionVector::zero(u.ell)?;
    for (s, a) in u.mult.iter().enumerate() {
        for (t, b) in v.mult.iter().enumerate() {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let ab = a * b;
            let f = fuse(s, t, u.ell)?;
            for (o, m) in out.mult.iter_mut().zip(&f.mult) {
                if m.is_one() {
                    *o += &ab;
                }
            }
        }
    }
    Ok(out)
}

/// `Σ_t u_t v_t`.
pub fn hom_pairing(u: &FusionVector, v: &FusionVector) -> Result<BigInt> {
    u.check_same(v)?;
    Ok(u.mult.iter().zip(&v.mult).map(|(a, b)| a * b).sum())
}

/// `e_1^{⊗n}`; its multiplicities are the `l_t(n)`.
pub fn delta1_power(n: usize, ell: u32) -> Result<FusionVector> {
    let ring = FusionRing::get(ell)?;
    let e1 = FusionVector::basis(1, ell)?;
    let mut acc = FusionVector::basis(0, ell)?;
    for _ in 0..n {
        acc = ring.product(&acc, &e1)?;
    }
    Ok(acc)
}

/// Product in the stable ring, through the cached structure constants.
pub fn ring_product(u: &FusionVector, v: &FusionVector) -> Result<FusionVector> {
    FusionRing::get(u.ell)?.product(u, v)
}

/// `τ_n`: keeps `[L_t]` when `n - t ∈ 2Z_{≥0}`, drops it otherwise.
pub fn tau_n(u: &FusionVector, n: usize) -> FusionVector {
    let mut out = u.clone();
    for (t, m) in out.mult.iter_mut().enumerate() {
        if t > n || (n - t) % 2 == 1 {
            *m = BigInt::zero();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(ell: u32, m: &[i64]) -> FusionVector {
        FusionVector::from_i64(ell, m).unwrap()
    }

    #[test]
    fn fuse_examples() {
        for ell in 3..=8 {
            for s in 0..=ell as usize - 2 {
                assert_eq!(
                    fuse(s, 0, ell).unwrap(),
                    FusionVector::basis(s, ell).unwrap()
                );
                assert_eq!(
                    fuse(ell as usize - 2, s, ell).unwrap(),
                    FusionVector::basis(ell as usize - 2 - s, ell).unwrap()
                );
            }
        }
        assert_eq!(fuse(1, 1, 4).unwrap(), v(4, &[1, 0, 1]));
        assert!(matches!(
            fuse(3, 0, 4),
            Err(Error::LabelOutOfRange { label: 3, max: 2 })
        ));
    }

    #[test]
    fn vector_products() {
        let e = |t| FusionVector::basis(t, 5).unwrap();
        assert_eq!(fuse_vectors(&e(1), &e(1)).unwrap(), v(5, &[1, 0, 1, 0]));
        assert_eq!(fuse_vectors(&e(2), &e(2)).unwrap(), v(5, &[1, 0, 1, 0]));
        assert_eq!(ring_product(&e(1), &e(2)).unwrap(), v(5, &[0, 1, 0, 1]));
        let u = v(5, &[2, -1, 0, 3]);
        assert_eq!(fuse_vectors(&e(0), &u).unwrap(), u);
        assert_eq!(
            hom_pairing(&fuse(1, 1, 5).unwrap(), &e(0)).unwrap(),
            BigInt::one()
        );
    }

    #[test]
    fn delta1_powers() {
        assert_eq!(delta1_power(0, 5).unwrap(), v(5, &[1, 0, 0, 0]));
        assert_eq!(delta1_power(1, 5).unwrap(), v(5, &[0, 1, 0, 0]));
        assert_eq!(delta1_power(8, 5).unwrap(), v(5, &[13, 0, 21, 0]));
        assert_eq!(delta1_power(5, 4).unwrap(), v(4, &[0, 4, 0]));
    }

    #[test]
    fn tau_filters_labels() {
        assert_eq!(tau_n(&v(5, &[1, 1, 0, 0]), 3), v(5, &[0, 1, 0, 0]));
        assert_eq!(tau_n(&v(5, &[1, 1, 1, 1]), 2), v(5, &[1, 0, 1, 0]));
    }

    #[test]
    fn ring_table_is_cached() {
        let a = FusionRing::get(6).unwrap();
        let b = FusionRing::get(6).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.table().len(), 5);
        assert_eq!(
            a.restriction(0),
            vec![(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]
        );
    }
}
