//! Matroid oracles and the rank / span / augmentation primitives on top of them.
//!
//! Elements are dense indices into a ground set. Sets are passed as slices;
//! a slice with a repeated element is treated as a multiset and is never
//! independent.

mod graphic;
mod linear;
mod uniform;

pub use graphic::GraphicMatroid;
pub use linear::{is_prime, LinearMatroid};
pub use uniform::UniformMatroid;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dense index of a ground-set element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for Elem {
    fn from(i: usize) -> Self {
        Elem(i as u32)
    }
}

impl std::fmt::Display for Elem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Independence oracle over a fixed ground set `0..ground_len()`.
///
/// Implementations are immutable after construction, so shared references can
/// be queried from many threads.
pub trait Matroid: Send + Sync {
    fn ground_len(&self) -> usize;

    fn rank(&self, set: &[Elem]) -> usize;

    fn is_independent(&self, set: &[Elem]) -> bool {
        self.rank(set) == set.len()
    }

    /// Preprocesses `base` for repeated span and circuit queries.
    fn span_tester(&self, base: &[Elem]) -> Box<dyn SpanTester + '_>;
}

/// Span membership (and fundamental circuits) relative to a fixed base set.
pub trait SpanTester {
    /// Rank of the base set.
    fn rank(&self) -> usize;

    /// Whether adding `e` leaves the rank unchanged.
    fn spans(&self, e: Elem) -> bool;

    /// For an independent base: the elements `x` of the base with
    /// `base - x + e` independent, or `None` when `base + e` is independent.
    /// For `e` in the base this is `[e]`.
    fn circuit(&self, e: Elem) -> Option<Vec<Elem>>;
}

/// Span tester answering every query with fresh rank computations.
pub struct RankSpan<'a, M: ?Sized> {
    m: &'a M,
    base: Vec<Elem>,
    rank: usize,
}

impl<'a, M: Matroid + ?Sized> RankSpan<'a, M> {
    pub fn new(m: &'a M, base: &[Elem]) -> Self {
        RankSpan { m, base: base.to_vec(), rank: m.rank(base) }
    }
}

impl<M: Matroid + ?Sized> SpanTester for RankSpan<'_, M> {
    fn rank(&self) -> usize {
        self.rank
    }

    fn spans(&self, e: Elem) -> bool {
        if self.base.contains(&e) {
            return true;
        }
        let mut s = self.base.clone();
        s.push(e);
        self.m.rank(&s) == self.rank
    }

    fn circuit(&self, e: Elem) -> Option<Vec<Elem>> {
        if self.base.contains(&e) {
            return Some(vec![e]);
        }
        if !self.spans(e) {
            return None;
        }
        let out = self
            .base
            .iter()
            .copied()
            .filter(|&x| {
                let s: Vec<Elem> =
                    self.base.iter().copied().filter(|&y| y != x).chain([e]).collect();
                self.m.is_independent(&s)
            })
            .collect();
        Some(out)
    }
}

/// The concrete oracles an instance can carry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMatroid {
    Linear(LinearMatroid),
    Graphic(GraphicMatroid),
    Uniform(UniformMatroid),
}

impl AnyMatroid {
    /// A matroid on `picks.len()` elements where element `i` behaves as
    /// element `picks[i]` of `self`. Repeated picks become parallel copies.
    pub fn select(&self, picks: &[usize]) -> AnyMatroid {
        match self {
            AnyMatroid::Linear(m) => AnyMatroid::Linear(m.select(picks)),
            AnyMatroid::Graphic(m) => AnyMatroid::Graphic(m.select(picks)),
            AnyMatroid::Uniform(m) => AnyMatroid::Uniform(m.select(picks)),
        }
    }

    fn inner(&self) -> &dyn Matroid {
        match self {
            AnyMatroid::Linear(m) => m,
            AnyMatroid::Graphic(m) => m,
            AnyMatroid::Uniform(m) => m,
        }
    }
}

impl Matroid for AnyMatroid {
    fn ground_len(&self) -> usize {
        self.inner().ground_len()
    }
    fn rank(&self, set: &[Elem]) -> usize {
        self.inner().rank(set)
    }
    fn is_independent(&self, set: &[Elem]) -> bool {
        self.inner().is_independent(set)
    }
    fn span_tester(&self, base: &[Elem]) -> Box<dyn SpanTester + '_> {
        self.inner().span_tester(base)
    }
}

pub fn check_members<M: Matroid + ?Sized>(m: &M, set: &[Elem]) -> Result<()> {
    let g = m.ground_len();
    match set.iter().find(|e| e.idx() >= g) {
        Some(e) => Err(Error::UnknownElement(e.idx())),
        None => Ok(()),
    }
}

/// Checked independence test.
pub fn is_independent<M: Matroid + ?Sized>(m: &M, set: &[Elem]) -> Result<bool> {
    check_members(m, set)?;
    Ok(m.is_independent(set))
}

/// Checked rank.
pub fn rank<M: Matroid + ?Sized>(m: &M, set: &[Elem]) -> Result<usize> {
    check_members(m, set)?;
    Ok(m.rank(set))
}

/// spn(S): every ground element whose addition keeps the rank of `set`.
pub fn closure<M: Matroid + ?Sized>(m: &M, set: &[Elem]) -> Result<Vec<Elem>> {
    check_members(m, set)?;
    let t = m.span_tester(set);
    Ok((0..m.ground_len()).map(Elem::from).filter(|&e| t.spans(e)).collect())
}

/// Grows independent `s` with elements of independent `t` (lowest index
/// first) until it has at least `|t|` elements.
pub fn augment<M: Matroid + ?Sized>(m: &M, s: &[Elem], t: &[Elem]) -> Result<Vec<Elem>> {
    check_members(m, s)?;
    check_members(m, t)?;
    if !m.is_independent(s) || !m.is_independent(t) {
        return Err(Error::Contract("augment needs independent inputs".into()));
    }
    let mut out = sorted(s);
    let mut cand = sorted(t);
    cand.retain(|x| !s.contains(x));
    for x in cand {
        if out.len() >= t.len() {
            break;
        }
        out.push(x);
        if !m.is_independent(&out) {
            out.pop();
        }
    }
    if out.len() < t.len() {
        return Err(Error::Internal("augmentation property failed".into()));
    }
    out.sort_unstable();
    Ok(out)
}

/// Greedy maximal independent subset of `set`, scanning in the given order.
pub fn greedy_independent<M: Matroid + ?Sized>(m: &M, set: &[Elem]) -> Vec<Elem> {
    let mut out: Vec<Elem> = Vec::new();
    let mut t = m.span_tester(&out);
    for &x in set {
        if !t.spans(x) {
            out.push(x);
            t = m.span_tester(&out);
        }
    }
    out
}

/// Extends independent `s` to a basis of the whole ground set, adding the
/// lowest-index elements that keep it independent.
pub fn extend_to_basis<M: Matroid + ?Sized>(m: &M, s: &[Elem]) -> Vec<Elem> {
    let mut out = s.to_vec();
    let mut t = m.span_tester(&out);
    for e in (0..m.ground_len()).map(Elem::from) {
        if !t.spans(e) {
            out.push(e);
            t = m.span_tester(&out);
        }
    }
    out.sort_unstable();
    out
}

pub fn sorted(s: &[Elem]) -> Vec<Elem> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v
}

/// `s` without `x`.
pub fn without(s: &[Elem], x: Elem) -> Vec<Elem> {
    s.iter().copied().filter(|&y| y != x).collect()
}

/// `s` plus `x` (kept sorted).
pub fn with(s: &[Elem], x: Elem) -> Vec<Elem> {
    let mut v = s.to_vec();
    let pos = v.binary_search(&x).unwrap_or_else(|p| p);
    v.insert(pos, x);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u32]) -> Vec<Elem> {
        v.iter().map(|&i| Elem(i)).collect()
    }

    #[test]
    fn unit_vectors_over_gf2() {
        let m = LinearMatroid::new(2, 2, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 0]]).unwrap();
        assert!(m.is_independent(&e(&[0, 1])));
        assert!(!m.is_independent(&e(&[0, 3])));
        assert_eq!(m.rank(&e(&[0, 1, 2])), 2);
        assert_eq!(m.rank(&[]), 0);
        assert_eq!(closure(&m, &e(&[0])).unwrap(), e(&[0, 3]));
    }

    #[test]
    fn triangle_is_dependent() {
        let m = GraphicMatroid::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!m.is_independent(&e(&[0, 1, 2])));
        assert!(m.is_independent(&e(&[0, 1])));
    }

    #[test]
    fn complete_graph_on_four_vertices_has_rank_three() {
        let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let m = GraphicMatroid::new(4, edges).unwrap();
        assert_eq!(m.rank(&e(&[0, 1, 2, 3, 4, 5])), 3);
    }

    #[test]
    fn augment_fills_from_the_other_set() {
        let m = LinearMatroid::new(3, 2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let s = augment(&m, &e(&[0]), &e(&[1, 2])).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(&Elem(0)));
        assert!(m.is_independent(&s));
        assert_eq!(augment(&m, &[], &e(&[1, 2])).unwrap(), e(&[1, 2]));
        assert_eq!(augment(&m, &e(&[1, 2]), &e(&[1, 2])).unwrap(), e(&[1, 2]));
        assert!(augment(&m, &e(&[0, 0]), &e(&[1])).is_err());
    }

    #[test]
    fn unknown_elements_are_rejected() {
        let m = UniformMatroid::new(2, 3);
        assert_eq!(is_independent(&m, &e(&[5])), Err(Error::UnknownElement(5)));
    }

    #[test]
    fn repeated_elements_are_dependent() {
        let m = UniformMatroid::new(3, 3);
        assert!(!m.is_independent(&e(&[1, 1])));
    }

    #[test]
    fn closure_of_a_basis_is_everything() {
        let m = GraphicMatroid::new(3, vec![(0, 1), (1, 2), (0, 2), (0, 1)]).unwrap();
        assert_eq!(closure(&m, &e(&[0, 1])).unwrap().len(), 4);
    }
}
