//! Matroid union (partitioning into k independent sets), overcrowded sets
//! and deadlocks.
//!
//! A set S is k-overcrowded when |S ∖ S′| ≥ k·(rk S − rk S′) for every
//! S′ ⊆ S; equivalently, S contains k disjoint bases of itself. The
//! k-deadlock D_k(U) is the largest k-overcrowded subset of U. It coincides
//! with the largest maximiser of the surplus |S| − k·rk(S), which is what
//! the extraction below computes from an optimal partition.

use std::collections::VecDeque;

use serde::Serialize;

use crate::matroid::{check_members, sorted, Elem, Matroid, SpanTester};
use crate::{audit, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionResult {
    pub parts: Vec<Vec<Elem>>,
    pub covered: Vec<Elem>,
    /// A subset S with |S| > k·rk(S), present exactly when U does not split
    /// into k independent sets.
    pub certificate: Option<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeadlockReport {
    pub k: usize,
    pub deadlock: Vec<Elem>,
    pub rank: usize,
    pub surplus: i64,
}

/// k disjoint independent sets of maximum total size inside U.
struct Union<'a, M: ?Sized> {
    m: &'a M,
    k: usize,
    elems: Vec<Elem>,
    local: Vec<usize>,
    part: Vec<Option<usize>>,
}

impl<'a, M: Matroid + ?Sized> Union<'a, M> {
    fn run(m: &'a M, u: &[Elem], k: usize) -> Self {
        let elems = dedup(u);
        let mut local = vec![usize::MAX; m.ground_len()];
        for (i, e) in elems.iter().enumerate() {
            local[e.idx()] = i;
        }
        let mut st = Union { m, k, part: vec![None; elems.len()], elems, local };
        for s in 0..st.elems.len() {
            st.insert(s);
        }
        st
    }

    fn parts(&self) -> Vec<Vec<Elem>> {
        let mut parts = vec![Vec::new(); self.k];
        for (i, p) in self.part.iter().enumerate() {
            if let Some(p) = p {
                parts[*p].push(self.elems[i]);
            }
        }
        parts
    }

    fn testers(&self) -> Vec<Box<dyn SpanTester + 'a>> {
        self.parts().iter().map(|p| self.m.span_tester(p)).collect()
    }

    /// Shortest augmenting path from unassigned element `s` in the exchange
    /// digraph: y → x when x sits in a part i ≠ part(y) and part i − x + y is
    /// independent; a path ends at an element that some other part accepts
    /// outright.
    fn insert(&mut self, s: usize) -> bool {
        let testers = self.testers();
        let n = self.elems.len();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(y) = queue.pop_front() {
            let ey = self.elems[y];
            let sink = (0..self.k).find(|&i| Some(i) != self.part[y] && !testers[i].spans(ey));
            if let Some(i) = sink {
                let mut cur = y;
                let mut target = i;
                loop {
                    self.part[cur] = Some(target);
                    match parent[cur] {
                        Some((prev, lab)) => {
                            cur = prev;
                            target = lab;
                        }
                        None => break,
                    }
                }
                debug_assert!(self.parts().iter().all(|p| self.m.is_independent(p)));
                return true;
            }
            for (i, tester) in testers.iter().enumerate() {
                if Some(i) == self.part[y] {
                    continue;
                }
                for x in tester.circuit(ey).unwrap_or_default() {
                    let lx = self.local[x.idx()];
                    if !seen[lx] {
                        seen[lx] = true;
                        parent[lx] = Some((y, i));
                        queue.push_back(lx);
                    }
                }
            }
        }
        false
    }

    fn size(&self) -> usize {
        self.part.iter().flatten().count()
    }

    /// Elements that cannot reach an element some other part would accept.
    fn stuck(&self) -> Vec<Elem> {
        let testers = self.testers();
        let n = self.elems.len();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut free = vec![false; n];
        let mut queue = VecDeque::new();
        for (y, &ey) in self.elems.iter().enumerate() {
            for (i, tester) in testers.iter().enumerate() {
                if Some(i) == self.part[y] {
                    continue;
                }
                match tester.circuit(ey) {
                    None => free[y] = true,
                    Some(c) => {
                        for x in c {
                            rev[self.local[x.idx()]].push(y);
                        }
                    }
                }
            }
            if free[y] {
                queue.push_back(y);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &y in &rev[x] {
                if !free[y] {
                    free[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..n).filter(|&i| !free[i]).map(|i| self.elems[i]).collect()
    }

    /// Greatest fixpoint: repeatedly discard elements outside the span of
    /// some other part's remainder.
    fn peel(&self) -> Vec<Elem> {
        let parts = self.parts();
        let n = self.elems.len();
        let mut alive = vec![true; n];
        loop {
            let rest: Vec<Vec<Elem>> = parts
                .iter()
                .map(|p| p.iter().copied().filter(|e| alive[self.local[e.idx()]]).collect())
                .collect();
            let testers: Vec<_> = rest.iter().map(|p| self.m.span_tester(p)).collect();
            let drop: Vec<usize> = (0..n)
                .filter(|&y| alive[y])
                .filter(|&y| {
                    (0..self.k).any(|i| Some(i) != self.part[y] && !testers[i].spans(self.elems[y]))
                })
                .collect();
            if drop.is_empty() {
                break;
            }
            for y in drop {
                alive[y] = false;
            }
        }
        (0..n).filter(|&i| alive[i]).map(|i| self.elems[i]).collect()
    }
}

fn dedup(u: &[Elem]) -> Vec<Elem> {
    let mut v = sorted(u);
    v.dedup();
    v
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Argument("k must be positive".into()));
    }
    Ok(())
}

/// Largest total size of k disjoint independent subsets of U.
pub fn union_rank<M: Matroid + ?Sized>(m: &M, u: &[Elem], k: usize) -> Result<usize> {
    check_k(k)?;
    check_members(m, u)?;
    Ok(Union::run(m, u, k).size())
}

/// Splits U into k independent parts, or returns a set S ⊆ U with
/// |S| > k·rk(S) showing that no split exists.
pub fn decompose<M: Matroid + ?Sized>(m: &M, u: &[Elem], k: usize) -> Result<PartitionResult> {
    check_k(k)?;
    check_members(m, u)?;
    let st = Union::run(m, u, k);
    let parts = st.parts();
    let covered = sorted(&parts.concat());
    let certificate = if st.size() == st.elems.len() {
        None
    } else {
        let d = st.stuck();
        if d.len() <= k * m.rank(&d) {
            return Err(Error::Internal("deadlock certificate has no surplus".into()));
        }
        Some(d)
    };
    Ok(PartitionResult { parts, covered, certificate })
}

/// Whether S is k-overcrowded, via union_rank(S, k) = k·rk(S).
pub fn is_overcrowded<M: Matroid + ?Sized>(m: &M, s: &[Elem], k: usize) -> Result<bool> {
    check_k(k)?;
    check_members(m, s)?;
    let s = dedup(s);
    Ok(Union::run(m, &s, k).size() == k * m.rank(&s))
}

/// D_k(U), the unique largest k-overcrowded subset of U.
pub fn deadlock<M: Matroid + ?Sized>(m: &M, u: &[Elem], k: usize) -> Result<DeadlockReport> {
    check_k(k)?;
    check_members(m, u)?;
    let st = Union::run(m, u, k);
    let d = st.stuck();
    if audit::enabled() {
        let peeled = st.peel();
        if peeled != d {
            return Err(Error::Internal(format!(
                "deadlock extraction disagrees with peeling ({} vs {} elements)",
                d.len(),
                peeled.len()
            )));
        }
    }
    Ok(report(m, d, k))
}

/// D_k(U) with the convention D_0(U) = U (every set is 0-overcrowded).
pub fn deadlock_or_all<M: Matroid + ?Sized>(m: &M, u: &[Elem], k: usize) -> Result<Vec<Elem>> {
    if k == 0 {
        return Ok(dedup(u));
    }
    Ok(deadlock(m, u, k)?.deadlock)
}

fn report<M: Matroid + ?Sized>(m: &M, d: Vec<Elem>, k: usize) -> DeadlockReport {
    let rank = m.rank(&d);
    let surplus = d.len() as i64 - (k * rank) as i64;
    DeadlockReport { k, deadlock: d, rank, surplus }
}
