//! Planar Temperley-Lieb diagrams as non-crossing perfect matchings.
//!
//! A diagram `t → n` has bottom points `1..=t` and top points
//! `t+1..=t+n`, both numbered left to right. Pairs are stored sorted with
//! `a < b`, so structural equality is pair-list equality.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarDiagram {
    bottom: usize,
    top: usize,
    pairs: Vec<(u16, u16)>,
}

impl PlanarDiagram {
    /// Builds and validates a diagram from 1-based pairs.
    pub fn new(
        bottom: usize,
        top: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let total = bottom + top;
        if total % 2 != 0 {
            return Err(Error::InvalidDiagram(format!(
                "{bottom} + {top} boundary points cannot be perfectly matched"
            )));
        }
        let mut partner = vec![usize::MAX; total];
        for (a, b) in pairs {
            if a == b || a == 0 || b == 0 || a > total || b > total {
                return Err(Error::InvalidDiagram(format!("bad pair ({a}, {b})")));
            }
            for p in [a, b] {
                if partner[p - 1] != usize::MAX {
                    return Err(Error::InvalidDiagram(format!("point {p} matched twice")));
                }
            }
            partner[a - 1] = b - 1;
            partner[b - 1] = a - 1;
        }
        if let Some(p) = partner.iter().position(|&x| x == usize::MAX) {
            return Err(Error::InvalidDiagram(format!("point {} unmatched", p + 1)));
        }
        let d = Self::from_partners(bottom, top, &partner);
        if !d.is_planar() {
            return Err(Error::InvalidDiagram(format!("{d:?} has crossing arcs")));
        }
        Ok(d)
    }

    /// From a 0-based partner array; planarity is the caller's promise.
    fn from_partners(bottom: usize, top: usize, partner: &[usize]) -> Self {
        let mut pairs: Vec<(u16, u16)> = partner
            .iter()
            .enumerate()
            .filter(|&(a, &b)| a < b)
            .map(|(a, &b)| (a as u16 + 1, b as u16 + 1))
            .collect();
        pairs.sort_unstable();
        Self { bottom, top, pairs }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            bottom: n,
            top: n,
            pairs: (1..=n).map(|i| (i as u16, (i + n) as u16)).collect(),
        }
    }

    /// The generator `f_i` on `n` strands: a cup at bottom `(i, i+1)`, a
    /// cap at top `(i, i+1)`, vertical strands elsewhere.
    pub fn generator(i: usize, n: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::GeneratorIndex { i, n });
        }
        let mut partner = vec![0; 2 * n];
        for k in 0..n {
            if k + 1 == i || k == i {
                continue;
            }
            partner[k] = n + k;
            partner[n + k] = k;
        }
        let (b, t) = (i - 1, n + i - 1);
        partner[b] = b + 1;
        partner[b + 1] = b;
        partner[t] = t + 1;
        partner[t + 1] = t;
        Ok(Self::from_partners(n, n, &partner))
    }

    /// Number of bottom points `t`.
    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// Number of top points `n`.
    pub fn top(&self) -> usize {
        self.top
    }

    /// Canonical 1-based pairs `(a, b)`, `a < b`, sorted.
    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    pub fn partners(&self) -> Vec<usize> {
        let mut p = vec![0; self.bottom + self.top];
        for &(a, b) in &self.pairs {
            p[a as usize - 1] = b as usize - 1;
            p[b as usize - 1] = a as usize - 1;
        }
        p
    }

    /// Arcs joining a bottom point to a top point.
    pub fn through_strands(&self) -> usize {
        let t = self.bottom as u16;
        self.pairs.iter().filter(|&&(a, b)| a <= t && b > t).count()
    }

    /// True when every bottom point is joined to a top point.
    pub fn is_monic(&self) -> bool {
        self.through_strands() == self.bottom
    }

    fn is_planar(&self) -> bool {
        is_noncrossing_line(&self.rotate_up().partners())
    }

    /// Stacks `self: m → n` under `other: n → p`. Returns the `m → p`
    /// diagram and the number of closed loops removed.
    pub fn compose(&self, other: &PlanarDiagram) -> Result<(PlanarDiagram, usize)> {
        if self.top != other.bottom {
            return Err(Error::BoundaryMismatch {
                left: self.top,
                right: other.bottom,
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &PlanarDiagram) -> (PlanarDiagram, usize) {
        compose_partners(&self.partners(), self.bottom, &other.partners(), other.top)
    }

    /// Horizontal juxtaposition, `self` on the left.
    pub fn tensor(&self, other: &PlanarDiagram) -> PlanarDiagram {
        let (t1, n1, t2, n2) = (self.bottom, self.top, other.bottom, other.top);
        let bottom = t1 + t2;
        let map_left = |x: usize| if x < t1 { x } else { bottom + (x - t1) };
        let map_right = |x: usize| {
            if x < t2 {
                t1 + x
            } else {
                bottom + n1 + (x - t2)
            }
        };
        let mut partner = vec![0; bottom + n1 + n2];
        for (a, &b) in self.partners().iter().enumerate() {
            partner[map_left(a)] = map_left(b);
        }
        for (a, &b) in other.partners().iter().enumerate() {
            partner[map_right(a)] = map_right(b);
        }
        PlanarDiagram::from_partners(bottom, n1 + n2, &partner)
    }

    /// Reflection in a horizontal line: `m → n` becomes `n → m`.
    pub fn star(&self) -> PlanarDiagram {
        let (m, n) = (self.bottom, self.top);
        let map = |x: usize| if x < m { n + x } else { x - m };
        let mut partner = vec![0; m + n];
        for (a, &b) in self.partners().iter().enumerate() {
            partner[map(a)] = map(b);
        }
        PlanarDiagram::from_partners(n, m, &partner)
    }

    /// Rotates the bottom line up so the diagram becomes `0 → t+n`: bottom
    /// point `i` lands on boundary point `t+1-i`, top points keep their index.
    pub fn rotate_up(&self) -> PlanarDiagram {
        let t = self.bottom;
        let map = |x: usize| if x < t { t - 1 - x } else { x };
        let mut partner = vec![0; t + self.top];
        for (a, &b) in self.partners().iter().enumerate() {
            partner[map(a)] = map(b);
        }
        PlanarDiagram::from_partners(0, t + self.top, &partner)
    }

    /// Closes every top point `j` onto bottom point `j` and counts loops.
    /// Only meaningful for `n → n` diagrams.
    pub fn closure_loops(&self) -> usize {
        debug_assert_eq!(self.bottom, self.top);
        let n = self.bottom;
        let partner = self.partners();
        let mut seen = vec![false; 2 * n];
        let mut loops = 0;
        for start in 0..2 * n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut p = start;
            loop {
                let q = partner[p];
                seen[p] = true;
                seen[q] = true;
                p = if q < n { q + n } else { q - n };
                if p == start {
                    break;
                }
            }
        }
        loops
    }

    /// Forest of arcs ordered by nesting; requires a `0 → 2k` diagram.
    pub fn nesting_forest(&self) -> Result<Forest> {
        if self.bottom != 0 {
            return Err(Error::NonzeroBottom(self.bottom));
        }
        let partner = self.partners();
        let mut arcs = Vec::new();
        let mut parent = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for (p, &q) in partner.iter().enumerate() {
            if p < q {
                parent.push(stack.last().copied());
                stack.push(arcs.len());
                arcs.push((p + 1, q + 1));
            } else {
                stack.pop();
            }
        }
        Ok(Forest { arcs, parent })
    }
}

/// Composition on raw partner arrays: `lower` is `m → n`, `upper` is `n → p`.
pub(crate) fn compose_partners(
    lower: &[usize],
    m: usize,
    upper: &[usize],
    p: usize,
) -> (PlanarDiagram, usize) {
    let n = lower.len() - m;
    debug_assert_eq!(upper.len(), n + p);
    let mut seen_mid = vec![false; n];
    let mut out = vec![usize::MAX; m + p];

    // Follow a strand until it exits at an external point. `in_lower`
    // tells which diagram the current endpoint belongs to.
    let follow = |mut point: usize, mut in_lower: bool, seen: &mut Vec<bool>| -> usize {
        loop {
            if in_lower {
                let j = lower[point];
                if j < m {
                    return j;
                }
                seen[j - m] = true;
                point = j - m;
                in_lower = false;
            } else {
                let j = upper[point];
                if j >= n {
                    return m + (j - n);
                }
                seen[j] = true;
                point = m + j;
                in_lower = true;
            }
        }
    };

    for start in 0..m + p {
        if out[start] != usize::MAX {
            continue;
        }
        let end = if start < m {
            follow(start, true, &mut seen_mid)
        } else {
            follow(n + (start - m), false, &mut seen_mid)
        };
        out[start] = end;
        out[end] = start;
    }

    let mut loops = 0;
    for k in 0..n {
        if seen_mid[k] {
            continue;
        }
        loops += 1;
        let mut cur = k;
        loop {
            seen_mid[cur] = true;
            let next = upper[cur];
            seen_mid[next] = true;
            cur = lower[m + next] - m;
            if cur == k {
                break;
            }
        }
    }
    (PlanarDiagram::from_partners(m, p, &out), loops)
}

/// Stack scan: a matching on a line is non-crossing iff closing endpoints
/// always match the most recent open one.
fn is_noncrossing_line(partner: &[usize]) -> bool {
    let mut stack = Vec::new();
    for (p, &q) in partner.iter().enumerate() {
        if p < q {
            stack.push(p);
        } else if stack.pop() != Some(q) {
            return false;
        }
    }
    stack.is_empty()
}

impl fmt::Debug for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{} {{", self.bottom, self.top)?;
        for (k, (a, b)) in self.pairs().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    t: usize,
    n: usize,
    pairs: Vec<[usize; 2]>,
}

impl Serialize for PlanarDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramJson {
            t: self.bottom,
            n: self.top,
            pairs: self.pairs().map(|(a, b)| [a, b]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlanarDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DiagramJson::deserialize(d)?;
        PlanarDiagram::new(raw.t, raw.n, raw.pairs.into_iter().map(|[a, b]| (a, b)))
            .map_err(serde::de::Error::custom)
    }
}

/// Poset of arcs of a `0 → 2k` diagram under nesting, stored as parent
/// pointers to the innermost enclosing arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    arcs: Vec<(usize, usize)>,
    parent: Vec<Option<usize>>,
}

impl Forest {
    /// Abstract forest from parent pointers. Parents must precede children.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                if *p >= i {
                    return Err(Error::Index(format!(
                        "parent {p} of node {i} must precede it"
                    )));
                }
            }
        }
        Ok(Self {
            arcs: Vec::new(),
            parent,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Arcs in order of their left endpoint, when built from a diagram.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.parent[i].is_none())
    }

    /// `|F_{≤a}|` for every node `a`: the node together with everything
    /// nested inside it.
    pub fn down_set_sizes(&self) -> Vec<usize> {
        let mut size = vec![1; self.len()];
        for i in (0..self.len()).rev() {
            if let Some(p) = self.parent[i] {
                size[p] += size[i];
            }
        }
        size
    }
}

/// All monic diagrams `t → n` in canonical order.
pub fn enumerate_monic(t: usize, n: usize) -> Vec<PlanarDiagram> {
    enumerate(t, n, true)
}

/// All diagrams `t → n` in canonical order.
pub fn enumerate_all(t: usize, n: usize) -> Vec<PlanarDiagram> {
    enumerate(t, n, false)
}

fn enumerate(t: usize, n: usize, monic_only: bool) -> Vec<PlanarDiagram> {
    if (t + n) % 2 != 0 || (monic_only && t > n) {
        return Vec::new();
    }
    // Matchings of the rotated line 0..t+n; rotated positions < t are bottom
    // points, and monic diagrams never join two of them.
    let total = t + n;
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; total];
    let unrot = |x: usize| if x < t { t - 1 - x } else { x };
    let mut emit = |rot: &mut Vec<usize>| {
        let mut p = vec![0; total];
        for (a, &b) in rot.iter().enumerate() {
            p[unrot(a)] = unrot(b);
        }
        out.push(PlanarDiagram::from_partners(t, n, &p));
    };
    match_interval(0, total, t, monic_only, &mut partner, &mut emit);
    out.sort();
    out
}

/// Enumerates complete matchings of `[lo, hi)` and calls `k` for each.
fn match_interval(
    lo: usize,
    hi: usize,
    t: usize,
    monic_only: bool,
    partner: &mut Vec<usize>,
    k: &mut dyn FnMut(&mut Vec<usize>),
) {
    if lo >= hi {
        k(partner);
        return;
    }
    let mut j = lo + 1;
    while j < hi {
        if !(monic_only && lo < t && j < t) {
            partner[lo] = j;
            partner[j] = lo;
            let mut rest = |p: &mut Vec<usize>| match_interval(j + 1, hi, t, monic_only, p, k);
            match_interval(lo + 1, j, t, monic_only, partner, &mut rest);
            partner[lo] = usize::MAX;
            partner[j] = usize::MAX;
        }
        j += 2;
    }
}

/// Shortest generator word for every `n → n` diagram, found by breadth-first
/// search over loop-free products. A word `[i1, …, ik]` means
/// `f_{i1} ⋯ f_{ik}`.
pub fn diagram_words(n: usize) -> BTreeMap<PlanarDiagram, Vec<usize>> {
    let mut words = BTreeMap::new();
    let id = PlanarDiagram::identity(n);
    words.insert(id.clone(), Vec::new());
    let gens: Vec<PlanarDiagram> = (1..n)
        .map(|i| PlanarDiagram::generator(i, n).expect("index in range"))
        .collect();
    let mut queue = VecDeque::from([id]);
    while let Some(d) = queue.pop_front() {
        let w = words[&d].clone();
        for (k, g) in gens.iter().enumerate() {
            let (prod, loops) = d.compose_unchecked(g);
            if loops == 0 && !words.contains_key(&prod) {
                let mut w2 = Vec::with_capacity(w.len() + 1);
                w2.push(k + 1);
                w2.extend_from_slice(&w);
                words.insert(prod.clone(), w2);
                queue.push_back(prod);
            }
        }
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(t: usize, n: usize, pairs: &[(usize, usize)]) -> PlanarDiagram {
        PlanarDiagram::new(t, n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn generators_match_drawings() {
        assert_eq!(
            PlanarDiagram::generator(1, 2).unwrap(),
            d(2, 2, &[(1, 2), (3, 4)])
        );
        assert_eq!(
            PlanarDiagram::generator(1, 3).unwrap(),
            d(3, 3, &[(1, 2), (4, 5), (3, 6)])
        );
        assert_eq!(
            PlanarDiagram::generator(2, 3).unwrap(),
            d(3, 3, &[(2, 3), (5, 6), (1, 4)])
        );
        assert!(matches!(
            PlanarDiagram::generator(0, 3),
            Err(Error::GeneratorIndex { .. })
        ));
        assert!(matches!(
            PlanarDiagram::generator(3, 3),
            Err(Error::GeneratorIndex { .. })
        ));
    }

    #[test]
    fn validation_rejects_bad_input() {
        assert!(PlanarDiagram::new(1, 2, [(1, 2)]).is_err());
        assert!(PlanarDiagram::new(0, 4, [(1, 3), (2, 4)]).is_err());
        assert!(PlanarDiagram::new(0, 4, [(1, 2), (2, 3)]).is_err());
        assert!(PlanarDiagram::new(0, 4, [(1, 2)]).is_err());
        // the two through strands would cross
        assert!(PlanarDiagram::new(2, 2, [(1, 4), (2, 3)]).is_err());
    }

    #[test]
    fn compose_examples() {
        let f1 = PlanarDiagram::generator(1, 2).unwrap();
        assert_eq!(f1.compose(&f1).unwrap(), (f1.clone(), 1));
        let id3 = PlanarDiagram::identity(3);
        let g = PlanarDiagram::generator(2, 3).unwrap();
        assert_eq!(id3.compose(&g).unwrap(), (g.clone(), 0));
        // f1 on the bottom, f2 on top: cup (1,2) below, cap (5,6) above,
        // bottom 3 runs to top 4.
        let f1 = PlanarDiagram::generator(1, 3).unwrap();
        let (prod, loops) = f1.compose(&g).unwrap();
        assert_eq!(loops, 0);
        assert_eq!(prod, d(3, 3, &[(1, 2), (3, 4), (5, 6)]));
        // and f1 f2 f1 = f1
        let (back, loops2) = prod.compose(&f1).unwrap();
        assert_eq!((back, loops2), (f1, 0));
        assert!(matches!(
            PlanarDiagram::identity(2).compose(&id3),
            Err(Error::BoundaryMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn tensor_and_star() {
        let id1 = PlanarDiagram::identity(1);
        assert_eq!(id1.tensor(&id1), PlanarDiagram::identity(2));
        let f1 = PlanarDiagram::generator(1, 2).unwrap();
        assert_eq!(f1.tensor(&id1), PlanarDiagram::generator(1, 3).unwrap());
        let e = PlanarDiagram::generator(2, 3).unwrap().tensor(&id1);
        assert_eq!((e.bottom(), e.top()), (4, 4));
        for n in 2..6 {
            for i in 1..n {
                let g = PlanarDiagram::generator(i, n).unwrap();
                assert_eq!(g.star(), g);
            }
            assert_eq!(
                PlanarDiagram::identity(n).star(),
                PlanarDiagram::identity(n)
            );
        }
        let cup = d(0, 2, &[(1, 2)]);
        assert_eq!(cup.star(), d(2, 0, &[(1, 2)]));
    }

    #[test]
    fn monic_checks() {
        assert!(PlanarDiagram::identity(4).is_monic());
        assert!(!PlanarDiagram::generator(1, 3).unwrap().is_monic());
        for dd in enumerate_all(0, 6) {
            assert!(dd.is_monic());
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_monic(1, 3).len(), 2);
        assert_eq!(enumerate_monic(2, 6).len(), 9);
        for n in 0..7 {
            assert_eq!(enumerate_monic(n, n), vec![PlanarDiagram::identity(n)]);
        }
        assert!(enumerate_monic(3, 1).is_empty());
        assert!(enumerate_monic(1, 4).is_empty());
        let all3 = enumerate_all(3, 3);
        assert_eq!(all3.len(), 5);
        let mut sorted = all3.clone();
        sorted.sort();
        assert_eq!(sorted, all3);
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(PlanarDiagram::identity(1).rotate_up(), d(0, 2, &[(1, 2)]));
        assert_eq!(
            PlanarDiagram::identity(2).rotate_up(),
            d(0, 4, &[(2, 3), (1, 4)])
        );
        assert_eq!(
            PlanarDiagram::generator(1, 2).unwrap().rotate_up(),
            d(0, 4, &[(1, 2), (3, 4)])
        );
    }

    #[test]
    fn forest_examples() {
        let single = d(0, 2, &[(1, 2)]).nesting_forest().unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.roots().count(), 1);
        let nested = d(0, 4, &[(1, 4), (2, 3)]).nesting_forest().unwrap();
        assert_eq!(nested.parent(1), Some(0));
        assert_eq!(nested.down_set_sizes(), vec![2, 1]);
        let side = d(0, 4, &[(1, 2), (3, 4)]).nesting_forest().unwrap();
        assert_eq!(side.roots().count(), 2);
        assert_eq!(side.down_set_sizes(), vec![1, 1]);
        assert_eq!(
            PlanarDiagram::identity(2).nesting_forest().unwrap_err(),
            Error::NonzeroBottom(2)
        );
    }

    #[test]
    fn closure_loop_counts() {
        assert_eq!(PlanarDiagram::identity(4).closure_loops(), 4);
        assert_eq!(PlanarDiagram::generator(2, 4).unwrap().closure_loops(), 3);
        let f1 = PlanarDiagram::generator(1, 3).unwrap();
        let f2 = PlanarDiagram::generator(2, 3).unwrap();
        let (f1f2, _) = f2.compose(&f1).unwrap();
        assert_eq!(f1f2.closure_loops(), 1);
    }

    #[test]
    fn json_form() {
        let g = PlanarDiagram::generator(1, 3).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"t":3,"n":3,"pairs":[[1,2],[3,6],[4,5]]}"#);
        let back: PlanarDiagram = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(
            serde_json::from_str::<PlanarDiagram>(r#"{"t":0,"n":4,"pairs":[[1,3],[2,4]]}"#)
                .is_err()
        );
    }

    #[test]
    fn words_cover_every_diagram() {
        for n in 1..=6 {
            let words = diagram_words(n);
            assert_eq!(words.len(), enumerate_all(n, n).len());
        }
        let words = diagram_words(3);
        let f1 = PlanarDiagram::generator(1, 3).unwrap();
        assert_eq!(words[&f1], vec![1]);
    }
}
