//! Exact linear algebra over `Q(ζ_{2ℓ})` and over degree-one prime fields.

use crate::error::{Error, Result};
use crate::modp::{prime_fields, PrimeField};
use crate::par;
use crate::scalars::{euler_phi, Cyclotomic, RootContext};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Square matrix whose entries are zero or integer powers of `δ`. Both the
/// cell forms and the trace form have this shape.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    ctx: RootContext,
    size: usize,
    exps: Vec<Option<i32>>,
}

/// Sizes up to this use fraction-free elimination directly; larger
/// matrices use the certified multimodular rank.
pub const BAREISS_LIMIT: usize = 32;

impl GramMatrix {
    pub fn from_rows(ctx: &RootContext, rows: Vec<Vec<Option<i32>>>) -> Self {
        let size = rows.len();
        let mut exps = Vec::with_capacity(size * size);
        for r in rows {
            assert_eq!(r.len(), size, "Gram matrices are square");
            exps.extend(r);
        }
        Self {
            ctx: ctx.clone(),
            size,
            exps,
        }
    }

    pub fn ctx(&self) -> &RootContext {
        &self.ctx
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `Some(e)` when the entry is `δ^e`, `None` when it is zero.
    pub fn exponent(&self, i: usize, j: usize) -> Option<i32> {
        self.exps[i * self.size + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Cyclotomic {
        match self.exponent(i, j) {
            Some(e) => self.ctx.delta_pow(e as i64),
            None => self.ctx.zero(),
        }
    }

    pub fn to_matrix(&self) -> Vec<Vec<Cyclotomic>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.exponent(i, j) == self.exponent(j, i)))
    }

    pub fn mul_vec(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        assert_eq!(v.len(), self.size);
        // Group by exponent so each row costs one multiplication per
        // distinct power of δ.
        par::map_range(self.size, |i| {
            let mut by_exp: std::collections::BTreeMap<i32, Cyclotomic> = Default::default();
            for (j, x) in v.iter().enumerate() {
                if let (Some(e), false) = (self.exponent(i, j), x.is_zero()) {
                    *by_exp.entry(e).or_insert_with(|| self.ctx.zero()) += x;
                }
            }
            let mut acc = self.ctx.zero();
            for (e, s) in by_exp {
                acc += &(&s * &self.ctx.delta_pow(e as i64));
            }
            acc
        })
    }

    /// Exact rank: fraction-free elimination for small matrices, the
    /// certified multimodular rank otherwise.
    pub fn rank(&self) -> usize {
        if self.size <= BAREISS_LIMIT {
            self.rank_exact()
        } else {
            self.rank_modular()
                .expect("the certificate always closes for δ-power matrices")
                .rank
        }
    }

    /// Fraction-free (Bareiss) elimination over the cyclotomic field.
    pub fn rank_exact(&self) -> usize {
        bareiss_rank(self.to_matrix())
    }

    /// Kernel basis over the field, in reduced echelon form.
    pub fn nullspace(&self) -> Vec<Vec<Cyclotomic>> {
        nullspace(&self.to_matrix(), &self.ctx)
    }

    pub(crate) fn reduce(&self, f: &PrimeField) -> Option<Vec<u64>> {
        let (lo, hi) = self.exponent_range();
        let d = f.reduce(self.ctx.delta())?;
        let dinv = f.inv(d)?;
        let mut table = Vec::with_capacity((hi - lo + 1) as usize);
        for e in lo..=hi {
            table.push(if e >= 0 {
                f.pow(d, e as u64)
            } else {
                f.pow(dinv, (-e) as u64)
            });
        }
        Some(
            self.exps
                .iter()
                .map(|e| e.map_or(0, |e| table[(e - lo) as usize]))
                .collect(),
        )
    }

    fn exponent_range(&self) -> (i32, i32) {
        let mut it = self.exps.iter().flatten();
        let first = it.next().copied().unwrap_or(0);
        it.fold((first, first), |(lo, hi), &e| (lo.min(e), hi.max(e)))
    }

    /// Bits `b_i` with `Σ_j |σ(g_ij δ^{-lo})|² ≤ 2^{b_i}` for every real
    /// embedding σ, using `|σ(δ)| ≤ 2`.
    fn row_norm_bits(&self) -> Vec<u64> {
        let (lo, _) = self.exponent_range();
        (0..self.size)
            .map(|i| {
                let row = &self.exps[i * self.size..(i + 1) * self.size];
                let count = row.iter().flatten().count() as u64;
                let top = row
                    .iter()
                    .flatten()
                    .map(|e| (e - lo) as u64)
                    .max()
                    .unwrap_or(0);
                if count == 0 {
                    0
                } else {
                    ceil_log2(count) + 2 * top
                }
            })
            .collect()
    }

    /// Rank over `Q(ζ_{2ℓ})` from ranks modulo degree-one primes.
    ///
    /// A prime rank never exceeds the true rank. Every `(r+1)`-minor lies in
    /// `Z[δ]` after scaling, whose fraction field has degree `d = φ(2ℓ)/2`,
    /// and its norm is at most `H^d` with `H` the Hadamard bound over the
    /// `r+1` largest rows. When the primes on which the rank is `r` multiply
    /// past `H^d`, every such minor vanishes and the rank is exactly `r`.
    pub fn rank_modular(&self) -> Result<ModularRank> {
        let n = self.size;
        if n == 0 {
            return Ok(ModularRank { rank: 0, primes: 0 });
        }
        let mut bits = self.row_norm_bits();
        bits.sort_unstable_by(|a, b| b.cmp(a));
        let degree = (euler_phi(self.ctx.order()) / 2).max(1) as u64;
        let needed = |r: usize| -> u64 {
            let h: u64 = bits.iter().take(r + 1).sum();
            degree * h.div_ceil(2) + 1
        };

        let batch = batch_size();
        let mut fields = prime_fields(self.ctx.order());
        let (mut best, mut have_bits, mut used) = (0usize, 0u64, 0usize);
        for _round in 0..10_000 {
            let chunk: Vec<PrimeField> = fields.by_ref().take(batch).collect();
            let ranks = par::map(&chunk, |f| {
                self.reduce(f)
                    .map(|mut m| (rank_mod_p(&mut m, n, n, f), f.p()))
            });
            for (r, p) in ranks.into_iter().flatten() {
                used += 1;
                if r > best {
                    best = r;
                    have_bits = 0;
                }
                if r == best {
                    have_bits += 63 - p.leading_zeros() as u64;
                }
                if best == n || have_bits >= needed(best) {
                    return Ok(ModularRank {
                        rank: best,
                        primes: used,
                    });
                }
            }
        }
        Err(Error::Internal("multimodular rank did not certify".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularRank {
    pub rank: usize,
    pub primes: usize,
}

fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros() as u64
    }
}

fn batch_size() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads().max(1)
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Bareiss elimination with first-nonzero pivoting. Divisions are exact in
/// the ring generated by the entries and are carried out in the field.
pub fn bareiss_rank(mut m: Vec<Vec<Cyclotomic>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev_inv: Option<Cyclotomic> = None;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let p = &pivot_row[c];
        for row in rest.iter_mut() {
            let a = row[c].clone();
            for j in c + 1..cols {
                let mut v = &(p * &row[j]) - &(&a * &pivot_row[j]);
                if let Some(inv) = &prev_inv {
                    v = &v * inv;
                }
                row[j] = v;
            }
            row[c] = Cyclotomic::zero(p.field());
        }
        prev_inv = Some(p.inv().expect("pivot is nonzero"));
        rank += 1;
    }
    rank
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Cyclotomic>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                let delta = &factor * &m[r][j];
                m[i][j] -= &delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel basis: one vector per free column `f`, equal to `e_f` minus the
/// pivot entries of column `f`.
pub fn nullspace(m: &[Vec<Cyclotomic>], ctx: &RootContext) -> Vec<Vec<Cyclotomic>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ctx.zero(); cols];
        v[f] = ctx.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][f].clone();
        }
        out.push(v);
    }
    out
}

/// Rank of a dense row-major matrix over `F_p`; the matrix is destroyed.
pub fn rank_mod_p(m: &mut [u64], rows: usize, cols: usize, f: &PrimeField) -> usize {
    let p = f.p();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                m.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = f.inv(m[rank * cols + c]).expect("nonzero pivot");
        for j in c..cols {
            m[rank * cols + j] = f.mul(m[rank * cols + j], inv);
        }
        let (head, tail) = m.split_at_mut((rank + 1) * cols);
        let pivot_row = &head[rank * cols..];
        let update = |row: &mut [u64]| {
            let factor = row[c];
            if factor == 0 {
                return;
            }
            let neg = p - factor;
            for j in c..cols {
                row[j] = (row[j] + neg * pivot_row[j]) % p;
            }
        };
        #[cfg(feature = "parallel")]
        {
            if (rows - rank) * (cols - c) > 1 << 16 {
                tail.par_chunks_mut(cols).for_each(update);
            } else {
                tail.chunks_mut(cols).for_each(update);
            }
        }
        #[cfg(not(feature = "parallel"))]
        tail.chunks_mut(cols).for_each(update);
        rank += 1;
    }
    rank
}

/// Incrementally built echelon basis over `F_p`, for picking independent
/// vectors greedily.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    field: PrimeField,
    len: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    pub fn new(field: PrimeField, len: usize) -> Self {
        Self {
            field,
            len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the current rows.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        assert_eq!(v.len(), self.len);
        let f = self.field;
        let p = f.p();
        for (c, row) in &self.rows {
            let factor = v[*c];
            if factor == 0 {
                continue;
            }
            let neg = p - factor;
            for (x, r) in v.iter_mut().zip(row).skip(*c) {
                *x = (*x + neg * r) % p;
            }
        }
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[c]).expect("nonzero");
        for x in v.iter_mut().skip(c) {
            *x = f.mul(*x, inv);
        }
        self.rows.push((c, v));
        true
    }
}

/// [`ModEchelon`] over the cyclotomic field itself.
#[derive(Clone, Debug)]
pub struct FieldEchelon {
    len: usize,
    rows: Vec<(usize, Vec<Cyclotomic>)>,
}

impl FieldEchelon {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, mut v: Vec<Cyclotomic>) -> bool {
        assert_eq!(v.len(), self.len);
        for (c, row) in &self.rows {
            if v[*c].is_zero() {
                continue;
            }
            let factor = v[*c].clone();
            for (x, r) in v.iter_mut().zip(row).skip(*c) {
                if !r.is_zero() {
                    *x -= &(&factor * r);
                }
            }
        }
        let Some(c) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[c].inv().expect("nonzero");
        for x in v.iter_mut().skip(c) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        self.rows.push((c, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::prime_field;

    fn ctx(ell: u32) -> RootContext {
        RootContext::new(ell).unwrap()
    }

    #[test]
    fn bareiss_small_cases() {
        let c = ctx(5);
        let d = c.delta().clone();
        let one = c.one();
        // [[δ,1],[1,δ]] has det δ²-1 = δ ≠ 0 at ℓ = 5
        assert_eq!(
            bareiss_rank(vec![
                vec![d.clone(), one.clone()],
                vec![one.clone(), d.clone()]
            ]),
            2
        );
        let c3 = ctx(3);
        let one3 = c3.one();
        assert_eq!(
            bareiss_rank(vec![
                vec![one3.clone(), one3.clone()],
                vec![one3.clone(), one3.clone()]
            ]),
            1
        );
        assert_eq!(bareiss_rank(vec![vec![c3.zero(); 3]; 2]), 0);
    }

    #[test]
    fn nullspace_is_killed() {
        let c = ctx(4);
        let d = c.delta().clone();
        let m = vec![
            vec![d.clone(), c.one(), c.zero()],
            vec![c.one(), d.clone(), c.one()],
            vec![c.zero(), c.one(), d.clone()],
        ];
        // det = δ(δ²-2) = 0 at ℓ = 4
        let ker = nullspace(&m, &c);
        assert_eq!(ker.len(), 1);
        for row in &m {
            let s = row
                .iter()
                .zip(&ker[0])
                .fold(c.zero(), |acc, (a, b)| &acc + &(a * b));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn modular_rank_agrees_with_bareiss() {
        let c = ctx(4);
        let g = GramMatrix::from_rows(
            &c,
            vec![
                vec![Some(1), Some(0), None],
                vec![Some(0), Some(1), Some(0)],
                vec![None, Some(0), Some(1)],
            ],
        );
        assert_eq!(g.rank_exact(), 2);
        assert_eq!(g.rank_modular().unwrap().rank, 2);
        let f = prime_field(8, 0);
        let mut m = g.reduce(&f).unwrap();
        assert_eq!(rank_mod_p(&mut m, 3, 3, &f), 2);
    }

    #[test]
    fn echelon_detects_dependence() {
        let f = prime_field(6, 0);
        let mut e = ModEchelon::new(f, 3);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(e.insert(vec![0, 1, 1]));
        assert!(!e.insert(vec![2, 5, 7]));
        assert!(e.insert(vec![0, 0, 5]));
        assert!(!e.insert(vec![0, 0, 0]));
        assert_eq!(e.rank(), 3);
    }
}
