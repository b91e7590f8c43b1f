//! Coloured instances: a rank-n matroid whose ground set is split into n
//! disjoint bases, the colour classes.

use std::collections::HashMap;

use crate::matroid::{self, AnyMatroid, Elem, Matroid, SpanTester};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ColouredInstance {
    n: usize,
    matroid: AnyMatroid,
    colour: Vec<u32>,
    classes: Vec<Vec<Elem>>,
    ids: Vec<u64>,
    by_id: HashMap<u64, Elem>,
}

impl ColouredInstance {
    /// Builds an instance from per-element external ids and 0-based colours.
    ///
    /// Elements are re-indexed so that dense indices follow ascending id.
    pub fn new(matroid: AnyMatroid, ids: Vec<u64>, colours: Vec<usize>) -> Result<Self> {
        let g = matroid.ground_len();
        if ids.len() != g || colours.len() != g {
            return Err(Error::Validation(format!(
                "{} ids and {} colours for {g} elements",
                ids.len(),
                colours.len()
            )));
        }
        let mut order: Vec<usize> = (0..g).collect();
        order.sort_by_key(|&i| ids[i]);
        if let Some(w) = order.windows(2).find(|w| ids[w[0]] == ids[w[1]]) {
            return Err(Error::Validation(format!("duplicate element id {}", ids[w[0]])));
        }
        let n = (g as f64).sqrt().round() as usize;
        if n * n != g {
            return Err(Error::Validation(format!("{g} elements is not a perfect square")));
        }
        let matroid = matroid.select(&order);
        let ids: Vec<u64> = order.iter().map(|&i| ids[i]).collect();
        let colour: Vec<u32> = order.iter().map(|&i| colours[i] as u32).collect();
        let mut classes = vec![Vec::new(); n];
        for (i, &c) in colour.iter().enumerate() {
            if c as usize >= n {
                return Err(Error::Validation(format!(
                    "element {} has colour {} outside 1..={n}",
                    ids[i],
                    c + 1
                )));
            }
            classes[c as usize].push(Elem::from(i));
        }
        for (c, class) in classes.iter().enumerate() {
            if class.len() != n {
                return Err(Error::Validation(format!(
                    "colour {} has {} elements instead of {n}",
                    c + 1,
                    class.len()
                )));
            }
            if !matroid.is_independent(class) {
                return Err(Error::Validation(format!("colour class {} is not a basis", c + 1)));
            }
        }
        let all: Vec<Elem> = (0..g).map(Elem::from).collect();
        let r = matroid.rank(&all);
        if r != n {
            return Err(Error::Validation(format!(
                "matroid has rank {r} but there are {n} colour classes"
            )));
        }
        let by_id = ids.iter().enumerate().map(|(i, &id)| (id, Elem::from(i))).collect();
        Ok(ColouredInstance { n, matroid, colour, classes, ids, by_id })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ground_len(&self) -> usize {
        self.ids.len()
    }

    pub fn ground(&self) -> impl Iterator<Item = Elem> {
        (0..self.ids.len()).map(Elem::from)
    }

    pub fn matroid(&self) -> &AnyMatroid {
        &self.matroid
    }

    /// 0-based colour.
    pub fn colour(&self, e: Elem) -> usize {
        self.colour[e.idx()] as usize
    }

    pub fn class(&self, c: usize) -> &[Elem] {
        &self.classes[c]
    }

    pub fn id(&self, e: Elem) -> u64 {
        self.ids[e.idx()]
    }

    pub fn ids_of(&self, set: &[Elem]) -> Vec<u64> {
        set.iter().map(|&e| self.id(e)).collect()
    }

    pub fn elem(&self, id: u64) -> Option<Elem> {
        self.by_id.get(&id).copied()
    }

    pub fn elems_of(&self, ids: &[u64]) -> Result<Vec<Elem>> {
        ids.iter()
            .map(|&id| self.elem(id).ok_or(Error::UnknownElement(id as usize)))
            .collect()
    }

    pub fn rank(&self, set: &[Elem]) -> usize {
        self.matroid.rank(set)
    }

    pub fn is_independent(&self, set: &[Elem]) -> bool {
        self.matroid.is_independent(set)
    }

    pub fn span_tester(&self, base: &[Elem]) -> Box<dyn SpanTester + '_> {
        self.matroid.span_tester(base)
    }

    pub fn check(&self, set: &[Elem]) -> Result<()> {
        matroid::check_members(&self.matroid, set)
    }

    /// At most one element of every colour (and no repeats).
    pub fn is_rainbow(&self, set: &[Elem]) -> bool {
        let mut seen = vec![false; self.n];
        set.iter().all(|&e| !std::mem::replace(&mut seen[self.colour(e)], true))
    }

    pub fn is_rainbow_independent(&self, set: &[Elem]) -> bool {
        self.is_rainbow(set) && self.is_independent(set)
    }

    /// Rainbow basis: rainbow, independent and of size n.
    pub fn is_transversal_basis(&self, set: &[Elem]) -> bool {
        set.len() == self.n && self.is_rainbow_independent(set)
    }

    /// Indicator of the colours present in `set`.
    pub fn colour_mask(&self, set: &[Elem]) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &e in set {
            m[self.colour(e)] = true;
        }
        m
    }
}

/// Builds an instance from n raw bases of `m`, replacing every element that
/// appears in several bases by parallel copies, one per basis.
///
/// Colours follow basis order; fresh ids are `1..=n²` in class order.
pub fn build_instance(m: &AnyMatroid, raw_bases: &[Vec<usize>]) -> Result<ColouredInstance> {
    let n = raw_bases.len();
    let all: Vec<Elem> = (0..m.ground_len()).map(Elem::from).collect();
    let r = m.rank(&all);
    for (c, b) in raw_bases.iter().enumerate() {
        let set: Vec<Elem> = b.iter().map(|&i| Elem::from(i)).collect();
        matroid::check_members(m, &set)?;
        if b.len() != n || r != n || !m.is_independent(&set) {
            return Err(Error::Validation(format!("raw class {} is not a basis", c + 1)));
        }
    }
    let picks: Vec<usize> = raw_bases.iter().flatten().copied().collect();
    let colours: Vec<usize> = (0..n).flat_map(|c| std::iter::repeat_n(c, n)).collect();
    let ids: Vec<u64> = (1..=picks.len() as u64).collect();
    ColouredInstance::new(m.select(&picks), ids, colours)
}
