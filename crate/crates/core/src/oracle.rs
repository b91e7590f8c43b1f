//! Brute-force reference implementations for small inputs.
//!
//! Everything here enumerates subsets or backtracks, so inputs are capped by a
//! [`BruteForceBudget`]. The fast paths elsewhere in the crate are tested
//! against these.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::matroid::{check_members, sorted, Elem, Matroid};
use crate::{ColouredInstance, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteForceBudget {
    pub max_ground: usize,
    pub max_n: usize,
    pub time_cap_ms: Option<u64>,
    /// Skip the size caps (the time cap still applies).
    pub force: bool,
}

impl Default for BruteForceBudget {
    fn default() -> Self {
        BruteForceBudget { max_ground: 14, max_n: 4, time_cap_ms: None, force: false }
    }
}

impl BruteForceBudget {
    fn ground(&self, len: usize) -> Result<()> {
        if len > 24 || (len > self.max_ground && !self.force) {
            return Err(Error::SizeCap(format!(
                "{len} elements exceed the brute-force cap of {}",
                self.max_ground
            )));
        }
        Ok(())
    }

    fn rank_cap(&self, n: usize) -> Result<()> {
        if n * n > 128 || (n > self.max_n && !self.force) {
            return Err(Error::SizeCap(format!("rank {n} exceeds the brute-force cap of {}", self.max_n)));
        }
        Ok(())
    }

    fn clock(&self) -> Clock {
        Clock { deadline: self.time_cap_ms.map(|ms| Instant::now() + Duration::from_millis(ms)) }
    }
}

struct Clock {
    deadline: Option<Instant>,
}

impl Clock {
    fn check(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::SizeCap("brute-force time cap exceeded".into())),
            _ => Ok(()),
        }
    }
}

/// Ranks of every subset of a small element list, indexed by bitmask.
pub struct RankTable {
    pub elems: Vec<Elem>,
    pub rank: Vec<u8>,
}

impl RankTable {
    pub fn new<M: Matroid + ?Sized>(m: &M, u: &[Elem]) -> Self {
        let mut elems = sorted(u);
        elems.dedup();
        let rank = (0..1usize << elems.len())
            .map(|mask| m.rank(&Self::pick(&elems, mask)) as u8)
            .collect();
        RankTable { elems, rank }
    }

    fn pick(elems: &[Elem], mask: usize) -> Vec<Elem> {
        (0..elems.len()).filter(|i| mask >> i & 1 == 1).map(|i| elems[i]).collect()
    }

    pub fn set(&self, mask: usize) -> Vec<Elem> {
        Self::pick(&self.elems, mask)
    }

    pub fn full(&self) -> usize {
        (1 << self.elems.len()) - 1
    }

    /// Every S′ ⊆ S satisfies |S ∖ S′| ≥ k·(rk S − rk S′).
    pub fn overcrowded(&self, s: usize, k: usize) -> bool {
        let rs = self.rank[s] as usize;
        let size = s.count_ones() as usize;
        let mut sub = s;
        loop {
            let lhs = size - sub.count_ones() as usize;
            if lhs < k * (rs - self.rank[sub] as usize) {
                return false;
            }
            if sub == 0 {
                return true;
            }
            sub = (sub - 1) & s;
        }
    }
}

/// Union of all k-overcrowded subsets of U, each tested against the
/// definition over all of its own subsets.
pub fn bf_deadlock<M: Matroid + ?Sized>(
    m: &M,
    u: &[Elem],
    k: usize,
    budget: &BruteForceBudget,
) -> Result<Vec<Elem>> {
    check_members(m, u)?;
    budget.ground(u.len())?;
    let clock = budget.clock();
    let table = RankTable::new(m, u);
    let mut union = 0usize;
    for s in 0..=table.full() {
        if s & 0xfff == 0 {
            clock.check()?;
        }
        if s & !union != 0 && table.overcrowded(s, k) {
            union |= s;
        }
    }
    Ok(table.set(union))
}

/// Whether S is k-overcrowded, by the definition.
pub fn bf_is_overcrowded<M: Matroid + ?Sized>(
    m: &M,
    s: &[Elem],
    k: usize,
    budget: &BruteForceBudget,
) -> Result<bool> {
    check_members(m, s)?;
    budget.ground(s.len())?;
    let table = RankTable::new(m, s);
    Ok(table.overcrowded(table.full(), k))
}

/// A subset S ⊆ U with |S| > k·rk(S), smallest first, if any exists.
pub fn bf_dense_subset<M: Matroid + ?Sized>(
    m: &M,
    u: &[Elem],
    k: usize,
    budget: &BruteForceBudget,
) -> Result<Option<Vec<Elem>>> {
    check_members(m, u)?;
    budget.ground(u.len())?;
    let table = RankTable::new(m, u);
    let mut masks: Vec<usize> = (0..=table.full()).collect();
    masks.sort_by_key(|s| (s.count_ones(), *s));
    Ok(masks
        .into_iter()
        .find(|&s| s.count_ones() as usize > k * table.rank[s] as usize)
        .map(|s| table.set(s)))
}

/// max over k disjoint independent subsets of their total size, via the
/// min-max formula min over S ⊆ U of |U ∖ S| + k·rk(S).
pub fn bf_union_rank<M: Matroid + ?Sized>(
    m: &M,
    u: &[Elem],
    k: usize,
    budget: &BruteForceBudget,
) -> Result<usize> {
    check_members(m, u)?;
    budget.ground(u.len())?;
    let table = RankTable::new(m, u);
    let total = table.elems.len();
    Ok((0..=table.full())
        .map(|s| total - s.count_ones() as usize + k * table.rank[s] as usize)
        .min()
        .unwrap_or(0))
}

/// Largest rainbow independent subset of U, by enumeration.
pub fn bf_max_rainbow_independent(
    inst: &ColouredInstance,
    u: &[Elem],
    budget: &BruteForceBudget,
) -> Result<Vec<Elem>> {
    inst.check(u)?;
    budget.ground(u.len())?;
    let table = RankTable::new(inst.matroid(), u);
    let best = (0..=table.full())
        .filter(|&s| table.rank[s] as u32 == s.count_ones() && inst.is_rainbow(&table.set(s)))
        .max_by_key(|&s| (s.count_ones(), std::cmp::Reverse(s)))
        .unwrap_or(0);
    Ok(table.set(best))
}

/// All transversal bases, each as a bitmask over the ground set.
fn transversal_bases(inst: &ColouredInstance, clock: &Clock) -> Result<Vec<u128>> {
    let n = inst.n();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(n);
    fn rec(
        inst: &ColouredInstance,
        c: usize,
        pick: &mut Vec<Elem>,
        out: &mut Vec<u128>,
        clock: &Clock,
    ) -> Result<()> {
        if c == inst.n() {
            out.push(pick.iter().fold(0u128, |m, e| m | 1 << e.idx()));
            return Ok(());
        }
        clock.check()?;
        for &e in inst.class(c) {
            pick.push(e);
            if inst.is_independent(pick) {
                rec(inst, c + 1, pick, out, clock)?;
            }
            pick.pop();
        }
        Ok(())
    }
    rec(inst, 0, &mut pick, &mut out, clock)?;
    debug_assert!(n == 0 || !out.is_empty());
    Ok(out)
}

fn unmask(mask: u128) -> Vec<Elem> {
    (0..128).filter(|i| mask >> i & 1 == 1).map(|i| Elem(i as u32)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisWitness {
    pub count: usize,
    pub bases: Vec<Vec<Elem>>,
}

/// Maximum number of pairwise disjoint transversal bases, by backtracking
/// over the elements of the first colour (each basis uses exactly one).
pub fn bf_max_disjoint_transversal_bases(
    inst: &ColouredInstance,
    budget: &BruteForceBudget,
) -> Result<BasisWitness> {
    budget.rank_cap(inst.n())?;
    let clock = budget.clock();
    let all = transversal_bases(inst, &clock)?;
    let first = inst.class(0).to_vec();
    let by_first: Vec<Vec<u128>> = first
        .iter()
        .map(|a| all.iter().copied().filter(|b| b >> a.idx() & 1 == 1).collect())
        .collect();

    struct Search<'a> {
        by_first: &'a [Vec<u128>],
        best: Vec<u128>,
        cur: Vec<u128>,
        clock: &'a Clock,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, used: u128) -> Result<()> {
            if self.cur.len() > self.best.len() {
                self.best = self.cur.clone();
            }
            if i == self.by_first.len() || self.cur.len() + (self.by_first.len() - i) <= self.best.len() {
                return Ok(());
            }
            self.clock.check()?;
            for &b in &self.by_first[i] {
                if b & used == 0 {
                    self.cur.push(b);
                    self.go(i + 1, used | b)?;
                    self.cur.pop();
                    if self.best.len() == self.by_first.len() {
                        return Ok(());
                    }
                }
            }
            self.go(i + 1, used)
        }
    }
    let mut s = Search { by_first: &by_first, best: Vec::new(), cur: Vec::new(), clock: &clock };
    s.go(0, 0)?;
    let bases: Vec<Vec<Elem>> = s.best.iter().map(|&b| unmask(b)).collect();
    Ok(BasisWitness { count: bases.len(), bases })
}

/// Minimum number of transversal bases covering the ground set, by
/// iterative deepening from the lower bound n.
pub fn bf_min_cover(inst: &ColouredInstance, budget: &BruteForceBudget) -> Result<BasisWitness> {
    let n = inst.n();
    budget.rank_cap(n)?;
    let clock = budget.clock();
    let all = transversal_bases(inst, &clock)?;
    let full: u128 = if n * n == 128 { u128::MAX } else { (1u128 << (n * n)) - 1 };
    let colour_masks: Vec<u128> =
        (0..n).map(|c| inst.class(c).iter().fold(0u128, |m, e| m | 1 << e.idx())).collect();

    fn go(
        all: &[u128],
        colour_masks: &[u128],
        covered: u128,
        full: u128,
        left: usize,
        cur: &mut Vec<u128>,
        clock: &Clock,
    ) -> Result<bool> {
        if covered == full {
            return Ok(true);
        }
        if left == 0 {
            return Ok(false);
        }
        // every basis covers at most one new element per colour
        if colour_masks.iter().any(|&cm| (cm & !covered).count_ones() as usize > left) {
            return Ok(false);
        }
        clock.check()?;
        let e = (!covered & full).trailing_zeros();
        for &b in all.iter().filter(|&&b| b >> e & 1 == 1) {
            cur.push(b);
            if go(all, colour_masks, covered | b, full, left - 1, cur, clock)? {
                return Ok(true);
            }
            cur.pop();
        }
        Ok(false)
    }

    for depth in n.max(1).. {
        let mut cur = Vec::new();
        if go(&all, &colour_masks, 0, full, depth, &mut cur, &clock)? {
            let bases: Vec<Vec<Elem>> = cur.iter().map(|&b| unmask(b)).collect();
            return Ok(BasisWitness { count: bases.len(), bases });
        }
    }
    unreachable!()
}

/// A partition of U into exactly m rainbow independent sets (some possibly
/// empty), or `None` when none exists.
pub fn bf_rainbow_decomposition(
    inst: &ColouredInstance,
    u: &[Elem],
    m: usize,
    budget: &BruteForceBudget,
) -> Result<Option<Vec<Vec<Elem>>>> {
    inst.check(u)?;
    budget.ground(u.len())?;
    let clock = budget.clock();
    let mut elems = sorted(u);
    elems.dedup();
    // most constrained colours first
    let mut mult = vec![0usize; inst.n()];
    for &e in &elems {
        mult[inst.colour(e)] += 1;
    }
    if mult.iter().any(|&c| c > m) {
        return Ok(None);
    }
    elems.sort_by_key(|&e| (std::cmp::Reverse(mult[inst.colour(e)]), inst.colour(e), e));

    fn go(
        inst: &ColouredInstance,
        elems: &[Elem],
        parts: &mut Vec<Vec<Elem>>,
        m: usize,
        clock: &Clock,
    ) -> Result<bool> {
        let Some((&e, rest)) = elems.split_first() else {
            return Ok(true);
        };
        clock.check()?;
        for i in 0..parts.len() {
            parts[i].push(e);
            if inst.is_rainbow_independent(&parts[i]) && go(inst, rest, parts, m, clock)? {
                return Ok(true);
            }
            parts[i].pop();
        }
        if parts.len() < m {
            parts.push(vec![e]);
            if go(inst, rest, parts, m, clock)? {
                return Ok(true);
            }
            parts.pop();
        }
        Ok(false)
    }
    let mut parts = Vec::new();
    if !go(inst, &elems, &mut parts, m, &clock)? {
        return Ok(None);
    }
    parts.resize(m, Vec::new());
    Ok(Some(parts.iter().map(|p| sorted(p)).collect()))
}
