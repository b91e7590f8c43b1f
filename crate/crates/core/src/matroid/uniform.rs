//! Uniform matroids, optionally with groups of parallel copies.

use super::{Elem, Matroid, SpanTester};

/// U(rank, size) where elements sharing a duplicate group are parallel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformMatroid {
    rank: usize,
    groups: Vec<u32>,
}

impl UniformMatroid {
    pub fn new(rank: usize, size: usize) -> Self {
        UniformMatroid { rank, groups: (0..size as u32).collect() }
    }

    pub fn with_groups(rank: usize, groups: Vec<u32>) -> Self {
        UniformMatroid { rank, groups }
    }

    pub fn full_rank(&self) -> usize {
        self.rank
    }

    pub fn group(&self, e: Elem) -> u32 {
        self.groups[e.idx()]
    }

    pub fn select(&self, picks: &[usize]) -> UniformMatroid {
        UniformMatroid { rank: self.rank, groups: picks.iter().map(|&i| self.groups[i]).collect() }
    }

    fn distinct_groups(&self, set: &[Elem]) -> Vec<u32> {
        let mut g: Vec<u32> = set.iter().map(|e| self.groups[e.idx()]).collect();
        g.sort_unstable();
        g.dedup();
        g
    }
}

impl Matroid for UniformMatroid {
    fn ground_len(&self) -> usize {
        self.groups.len()
    }

    fn rank(&self, set: &[Elem]) -> usize {
        self.distinct_groups(set).len().min(self.rank)
    }

    fn span_tester(&self, base: &[Elem]) -> Box<dyn SpanTester + '_> {
        let groups = self.distinct_groups(base);
        Box::new(UniformSpan { m: self, base: base.to_vec(), rank: groups.len().min(self.rank), groups })
    }
}

struct UniformSpan<'a> {
    m: &'a UniformMatroid,
    base: Vec<Elem>,
    groups: Vec<u32>,
    rank: usize,
}

impl SpanTester for UniformSpan<'_> {
    fn rank(&self) -> usize {
        self.rank
    }

    fn spans(&self, e: Elem) -> bool {
        self.rank == self.m.rank || self.groups.binary_search(&self.m.group(e)).is_ok()
    }

    fn circuit(&self, e: Elem) -> Option<Vec<Elem>> {
        if self.base.contains(&e) {
            return Some(vec![e]);
        }
        let g = self.m.group(e);
        if let Some(&x) = self.base.iter().find(|&&x| self.m.group(x) == g) {
            return Some(vec![x]);
        }
        if self.rank == self.m.rank {
            return Some(self.base.clone());
        }
        None
    }
}
