//! Families of disjoint rainbow independent sets and the operations that
//! grow them.

mod availability;
mod classify;
mod intersection;
mod switching;

use serde::Serialize;

use crate::matroid::{sorted, Elem, SpanTester};
use crate::{ColouredInstance, Error, Result};

pub use availability::{
    availability_graph, corollary_holds, good_edges, AvailabilityGraph, BipartiteGraph, GoodEdgeParams,
};
pub use classify::{classify_family, ClassifyMode, ClassifyReport, Outcome};
pub use intersection::{max_rainbow_independent, max_rainbow_independent_from};
pub use switching::{
    ell_reduction, inclusion_maximal_extend, reductions, switch_in_element, ExtendOptions, SwitchChain,
    SwitchStep,
};

/// An ordered family T_1..T_m of pairwise disjoint rainbow independent sets,
/// with the owner of every covered element cached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RainbowFamily {
    members: Vec<Vec<Elem>>,
    #[serde(skip)]
    owner: Vec<Option<u32>>,
}

impl RainbowFamily {
    pub fn empty(inst: &ColouredInstance, m: usize) -> Self {
        RainbowFamily { members: vec![Vec::new(); m], owner: vec![None; inst.ground_len()] }
    }

    /// Builds and validates a family.
    pub fn new(inst: &ColouredInstance, members: Vec<Vec<Elem>>) -> Result<Self> {
        let mut f = Self::empty(inst, members.len());
        for (j, s) in members.into_iter().enumerate() {
            inst.check(&s)?;
            for &e in &s {
                if f.owner[e.idx()].is_some() {
                    return Err(Error::Contract(format!("element {} lies in two members", inst.id(e))));
                }
                f.owner[e.idx()] = Some(j as u32);
            }
            f.members[j] = sorted(&s);
        }
        f.validate(inst)?;
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Vec<Elem>] {
        &self.members
    }

    pub fn member(&self, j: usize) -> &[Elem] {
        &self.members[j]
    }

    pub fn owner(&self, e: Elem) -> Option<usize> {
        self.owner[e.idx()].map(|j| j as usize)
    }

    pub fn is_covered(&self, e: Elem) -> bool {
        self.owner[e.idx()].is_some()
    }

    /// |E(𝒯)|
    pub fn covered_len(&self) -> usize {
        self.members.iter().map(Vec::len).sum()
    }

    /// E(𝒯), ascending.
    pub fn covered(&self) -> Vec<Elem> {
        (0..self.owner.len()).filter(|&i| self.owner[i].is_some()).map(Elem::from).collect()
    }

    /// Ground elements outside every member, ascending.
    pub fn uncovered(&self) -> Vec<Elem> {
        (0..self.owner.len()).filter(|&i| self.owner[i].is_none()).map(Elem::from).collect()
    }

    /// Replaces member j. Disjointness from the other members is the
    /// caller's responsibility; [`validate`](Self::validate) checks it.
    pub fn replace(&mut self, j: usize, set: Vec<Elem>) {
        for e in std::mem::take(&mut self.members[j]) {
            if self.owner[e.idx()] == Some(j as u32) {
                self.owner[e.idx()] = None;
            }
        }
        for &e in &set {
            self.owner[e.idx()] = Some(j as u32);
        }
        self.members[j] = sorted(&set);
    }

    pub fn push(&mut self, set: Vec<Elem>) {
        self.members.push(Vec::new());
        let j = self.members.len() - 1;
        self.replace(j, set);
    }

    pub fn remove(&mut self, j: usize) -> Vec<Elem> {
        let out = std::mem::take(&mut self.members[j]);
        for &e in &out {
            self.owner[e.idx()] = None;
        }
        self.members.remove(j);
        for o in self.owner.iter_mut().flatten() {
            if *o as usize > j {
                *o -= 1;
            }
        }
        out
    }

    /// Checks disjointness, rainbowness, independence and the owner cache.
    pub fn validate(&self, inst: &ColouredInstance) -> Result<()> {
        let mut seen = vec![None; inst.ground_len()];
        for (j, s) in self.members.iter().enumerate() {
            for &e in s {
                if let Some(k) = seen[e.idx()].replace(j) {
                    return Err(Error::Contract(format!(
                        "element {} lies in members {k} and {j}",
                        inst.id(e)
                    )));
                }
            }
            if !inst.is_rainbow(s) {
                return Err(Error::Contract(format!("member {j} repeats a colour")));
            }
            if !inst.is_independent(s) {
                return Err(Error::Contract(format!("member {j} is dependent")));
            }
        }
        let cached: Vec<Option<usize>> = self.owner.iter().map(|o| o.map(|j| j as usize)).collect();
        if cached != seen {
            return Err(Error::Internal("family owner cache out of date".into()));
        }
        Ok(())
    }

    /// |B_c ∩ E(𝒯)| for every colour.
    pub fn colour_counts(&self, inst: &ColouredInstance) -> Vec<usize> {
        let mut h = vec![0; inst.n()];
        for s in &self.members {
            for &e in s {
                h[inst.colour(e)] += 1;
            }
        }
        h
    }
}

/// Per-member span testers and colour masks, for repeated "does T_j + e stay
/// rainbow independent" queries.
pub(crate) struct MemberIndex<'a> {
    testers: Vec<Box<dyn SpanTester + 'a>>,
    colours: Vec<Vec<bool>>,
    inst: &'a ColouredInstance,
}

impl<'a> MemberIndex<'a> {
    pub fn new(inst: &'a ColouredInstance, members: &[Vec<Elem>]) -> Self {
        MemberIndex {
            testers: members.iter().map(|s| inst.span_tester(s)).collect(),
            colours: members.iter().map(|s| inst.colour_mask(s)).collect(),
            inst,
        }
    }

    /// T_j + e is rainbow independent (and e ∉ T_j).
    pub fn fits(&self, j: usize, e: Elem) -> bool {
        !self.colours[j][self.inst.colour(e)] && !self.testers[j].spans(e)
    }

    pub fn refresh(&mut self, j: usize, set: &[Elem]) {
        self.testers[j] = self.inst.span_tester(set);
        self.colours[j] = self.inst.colour_mask(set);
    }

    pub fn len(&self) -> usize {
        self.testers.len()
    }
}

/// ⌊x·n⌋, tolerant of binary rounding just below an integer.
pub fn floor_mul(x: f64, n: usize) -> usize {
    (x * n as f64 + 1e-9).floor().max(0.0) as usize
}

/// ⌈x·n⌉, tolerant of binary rounding just above an integer.
pub fn ceil_mul(x: f64, n: usize) -> usize {
    (x * n as f64 - 1e-9).ceil().max(0.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn family_bookkeeping() {
        let inst = generate::linear(3, 5, 4).unwrap();
        let mut f = RainbowFamily::empty(&inst, 2);
        assert_eq!(f.uncovered().len(), 9);
        let a = inst.class(0)[0];
        let b = inst.class(1)[0];
        f.replace(0, vec![a]);
        f.replace(1, vec![b]);
        assert_eq!(f.owner(b), Some(1));
        f.validate(&inst).unwrap();
        f.remove(0);
        assert_eq!(f.owner(b), Some(0));
        assert!(!f.is_covered(a));
        f.validate(&inst).unwrap();
        let bad = RainbowFamily::new(&inst, vec![vec![a], vec![a]]);
        assert!(matches!(bad, Err(Error::Contract(_))));
        let bad = RainbowFamily::new(&inst, vec![inst.class(0)[..2].to_vec()]);
        assert!(matches!(bad, Err(Error::Contract(_))));
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(floor_mul(0.1, 10), 1);
        assert_eq!(floor_mul(0.3, 10), 3);
        assert_eq!(ceil_mul(0.7, 10), 7);
        assert_eq!(ceil_mul(0.75, 10), 8);
    }
}
