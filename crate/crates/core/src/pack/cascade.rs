//! Growing a packing family by one element through chains of absorbable
//! elements.
//!
//! An element e outside T_1..T_r is (T_1..T_r)-absorbable when the members
//! T_1..T_r can be rewritten, using only uncovered elements, their own
//! elements and e, into disjoint rainbow independent sets that change by at
//! most three elements each and gain one element in total. A chain starts at
//! a deficient member, and each next member is the one holding the most
//! absorbable elements. Giving one of those up and re-filling that member
//! from its freed colour slots produces the absorbable elements of the next
//! level, until one of them turns out to be uncovered.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exchange::{double_switch, inject_between, InjectBetween, SwitchCase};
use crate::matroid::{greedy_independent, sorted, with, without, Elem};
use crate::rainbow::{RainbowFamily, SwitchChain};
use crate::{audit, ColouredInstance, Error, Result};

/// A rewrite T′ of a member that keeps its size and span and frees colour
/// `colour`, so any element of B_colour outside spn(T) can be added to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColourWitness {
    pub colour: usize,
    pub set: Vec<Elem>,
    /// The element of the first injection's domain and the reservoir-side
    /// element combined by the double switch.
    pub x: Elem,
    pub q: Elem,
    pub case: SwitchCase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OneAbsorbable {
    /// A larger rainbow independent set inside U ∪ T, differing from T in at
    /// most two elements; it replaces T outright.
    Improvement(Vec<Elem>),
    Colours(Vec<ColourWitness>),
}

/// A rainbow independent S ⊆ U ∪ T with |S| > |T| and |S ∖ T| ≤ 2, if one
/// exists. Either S = T + x, or S = T − y + x + q with x ∈ spn(T) of a colour
/// missing from T, y on the circuit of x, and q outside spn(T) of y's
/// colour.
pub fn small_improvement(inst: &ColouredInstance, family: &RainbowFamily, t: usize) -> Option<Vec<Elem>> {
    let member = family.member(t);
    if member.len() == inst.n() {
        return None;
    }
    let colours = inst.colour_mask(member);
    let tester = inst.span_tester(member);
    let u = family.uncovered();
    let mut outside_by_colour: Vec<Option<Elem>> = vec![None; inst.n()];
    for &e in &u {
        if !tester.spans(e) {
            if !colours[inst.colour(e)] {
                return Some(with(member, e));
            }
            outside_by_colour[inst.colour(e)].get_or_insert(e);
        }
    }
    for &x in u.iter().filter(|x| !colours[inst.colour(**x)]) {
        let Some(circuit) = tester.circuit(x) else { continue };
        for y in circuit {
            if let Some(q) = outside_by_colour[inst.colour(y)] {
                return Some(with(&with(&without(member, y), x), q));
            }
        }
    }
    None
}

/// Colours c for which every element of B_c ∖ spn(T) is (T)-absorbable,
/// each with the rewritten member that frees c.
///
/// For every colour c* missing from T: inject B_{c*} ∩ U into T (φ*), pick
/// an independent pool Q* among uncovered elements whose colours occur on
/// φ*'s image (reservoir elements first), inject Q* into T (φ′), and combine
/// the swaps for x and q by a double switch; the colour of φ′(q) is then
/// free. If either injection finds an element that extends T, or the
/// bounded search finds a larger set, that set is returned instead.
pub fn one_absorbable_colours(
    inst: &ColouredInstance,
    family: &RainbowFamily,
    t: usize,
    reservoir: &[bool],
) -> Result<OneAbsorbable> {
    let member = family.member(t).to_vec();
    if member.len() == inst.n() {
        return Err(Error::Argument(format!("member {t} is already a basis")));
    }
    if let Some(s) = small_improvement(inst, family, t) {
        return Ok(OneAbsorbable::Improvement(s));
    }
    let present = inst.colour_mask(&member);
    let uncovered: Vec<Elem> = family.uncovered();
    let mut found: BTreeMap<usize, ColourWitness> = BTreeMap::new();
    for c_star in (0..inst.n()).filter(|&c| !present[c]) {
        let xs: Vec<Elem> = inst.class(c_star).iter().copied().filter(|e| !family.is_covered(*e)).collect();
        if xs.is_empty() {
            continue;
        }
        let phi_star = match inject_between(inst, &xs, &member)? {
            InjectBetween::Addable(x) => return Ok(OneAbsorbable::Improvement(with(&member, x))),
            InjectBetween::Injection(phi) => phi,
        };
        // colour of φ*(x) ↦ x
        let mut via: Vec<Option<Elem>> = vec![None; inst.n()];
        for (x, y) in phi_star.iter() {
            via[inst.colour(y)] = Some(x);
        }
        let eligible = |e: &Elem| via[inst.colour(*e)].is_some();
        let mut pool: Vec<Elem> = uncovered.iter().copied().filter(|e| reservoir[e.idx()] && eligible(e)).collect();
        pool.extend(uncovered.iter().copied().filter(|e| !reservoir[e.idx()] && eligible(e)));
        let q_star = greedy_independent(inst.matroid(), &pool);
        if q_star.is_empty() {
            continue;
        }
        let phi2 = match inject_between(inst, &q_star, &member)? {
            InjectBetween::Addable(q) => {
                let x = via[inst.colour(q)].expect("pool colours come from φ*");
                let y = phi_star.get(x).expect("x in the domain of φ*");
                return Ok(OneAbsorbable::Improvement(with(&with(&without(&member, y), x), q)));
            }
            InjectBetween::Injection(phi) => phi,
        };
        for (q, q2) in phi2.iter() {
            let colour = inst.colour(q2);
            if found.contains_key(&colour) {
                continue;
            }
            let x = via[inst.colour(q)].expect("pool colours come from φ*");
            let x2 = phi_star.get(x).expect("x in the domain of φ*");
            let ds = double_switch(inst, &member, x, x2, q, q2)?;
            if !inst.is_rainbow(&ds.set) || ds.set.iter().any(|&e| inst.colour(e) == colour) {
                return Err(Error::Internal(format!("double switch did not free colour {}", colour + 1)));
            }
            found.insert(colour, ColourWitness { colour, set: sorted(&ds.set), x, q, case: ds.case });
        }
    }
    Ok(OneAbsorbable::Colours(found.into_values().collect()))
}

/// A witness in the parent-pointer tree: at level l, `set` is T′_l and the
/// sets for T_1..T_{l−1} are those of `parent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub level: usize,
    pub elem: Elem,
    pub parent: Option<usize>,
    pub set: Vec<Elem>,
}

/// Audit fields of the last one-level step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Scratch {
    /// |E*|: absorbable elements in the member just added to the chain.
    pub e_star: usize,
    /// Colours found free across all e ∈ E*.
    pub colours: usize,
    /// E′: new absorbable elements in members outside the chain.
    pub e_prime: usize,
    /// E″: candidates discarded because a rewritten chain member holds them.
    pub e_double_prime: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CascadeState {
    pub chain: Vec<usize>,
    /// m(T_1..T_r, T_{r+1}) for each chosen T_{r+1}.
    pub absorb_counts: Vec<usize>,
    pub witnesses: Vec<Witness>,
    pub scratch: Scratch,
}

impl CascadeState {
    /// T′_1..T′_l for witness `w`.
    pub fn sets(&self, w: usize) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        let mut cur = Some(w);
        while let Some(i) = cur {
            out.push(self.witnesses[i].set.clone());
            cur = self.witnesses[i].parent;
        }
        out.reverse();
        out
    }
}

/// Checks the absorbability clauses for `e` and the chain `chain` against
/// `family`: disjoint rainbow independent sets inside U ∪ T_1 ∪ … ∪ T_r ∪ {e},
/// at most three new elements each, one more element in total.
pub fn verify_witness(
    inst: &ColouredInstance,
    family: &RainbowFamily,
    chain: &[usize],
    e: Elem,
    sets: &[Vec<Elem>],
) -> Result<()> {
    if sets.len() != chain.len() {
        return Err(Error::Internal("witness length differs from the chain".into()));
    }
    if chain.iter().any(|&j| family.member(j).contains(&e)) {
        return Err(Error::Internal(format!("element {} lies on the chain", inst.id(e))));
    }
    let mut seen = vec![false; inst.ground_len()];
    let (mut before, mut after) = (0, 0);
    for (&j, s) in chain.iter().zip(sets) {
        let t = family.member(j);
        if !inst.is_rainbow_independent(s) {
            return Err(Error::Internal(format!("witness set for member {j} is not rainbow independent")));
        }
        for &x in s {
            if std::mem::replace(&mut seen[x.idx()], true) {
                return Err(Error::Internal("witness sets overlap".into()));
            }
            let owner = family.owner(x);
            if x != e && owner.is_some_and(|o| !chain.contains(&o)) {
                return Err(Error::Internal(format!("witness uses element {} of another member", inst.id(x))));
            }
        }
        if s.iter().filter(|x| !t.contains(x)).count() > 3 {
            return Err(Error::Internal(format!("witness changes member {j} by more than three")));
        }
        before += t.len();
        after += s.len();
    }
    if after < before + 1 {
        return Err(Error::Internal("witness does not grow the chain".into()));
    }
    Ok(())
}

/// How a successful improvement was found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Improvement {
    pub family: RainbowFamily,
    pub switch: SwitchChain,
    pub chain: Vec<usize>,
    pub chain_length: usize,
    /// m(T_1..T_{r+1}) / (m(T_1..T_r) + n − |T_r|) per grown level.
    pub growth_factors: Vec<f64>,
    /// |E(𝒯′) ∩ R| − |E(𝒯) ∩ R|
    pub reservoir_cost: i64,
    pub state: CascadeState,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CascadeOutcome {
    Improved(Box<Improvement>),
    /// No improvement within the depth cap from any seed tried; the longest
    /// chain explored is kept for inspection.
    NotImproved { seeds_tried: usize, longest: CascadeState },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeLimits {
    pub r_max: usize,
    /// How many deficient members to try as T_1.
    pub seeds: usize,
}

fn in_r(family: &RainbowFamily, reservoir: &[bool]) -> i64 {
    family.members().iter().flatten().filter(|e| reservoir[e.idx()]).count() as i64
}

fn finish(
    inst: &ColouredInstance,
    before: &RainbowFamily,
    after: RainbowFamily,
    reservoir: &[bool],
    chain: Vec<usize>,
    growth_factors: Vec<f64>,
    state: CascadeState,
) -> Result<CascadeOutcome> {
    after.validate(inst)?;
    if after.covered_len() != before.covered_len() + 1 {
        return Err(Error::Internal(format!(
            "improvement changed |E| from {} to {}",
            before.covered_len(),
            after.covered_len()
        )));
    }
    let switch = SwitchChain::between(before, &after);
    if let Some(st) = switch.steps.iter().find(|s| s.added.len() > 3) {
        return Err(Error::Internal(format!("member {} gained {} elements", st.member, st.added.len())));
    }
    let reservoir_cost = in_r(&after, reservoir) - in_r(before, reservoir);
    let chain_length = state.chain.len().saturating_sub(1);
    Ok(CascadeOutcome::Improved(Box::new(Improvement {
        family: after,
        switch,
        chain,
        chain_length,
        growth_factors,
        reservoir_cost,
        state,
    })))
}

/// One more covered element. Tries a direct small improvement on every
/// deficient member first, then grows absorbable chains from the most
/// deficient members in turn.
pub fn cascade_improve(
    inst: &ColouredInstance,
    family: &RainbowFamily,
    reservoir: &[bool],
    limits: &CascadeLimits,
) -> Result<CascadeOutcome> {
    let n = inst.n();
    if family.members().iter().all(|m| m.len() == n) {
        return Err(Error::Precondition("every member is already a transversal basis".into()));
    }
    let mut seeds: Vec<usize> = (0..family.len()).filter(|&j| family.member(j).len() < n).collect();
    seeds.sort_by_key(|&j| (family.member(j).len(), j));

    for &t in &seeds {
        if let Some(s) = small_improvement(inst, family, t) {
            let mut g = family.clone();
            g.replace(t, s);
            let state = CascadeState { chain: vec![t], ..Default::default() };
            return finish(inst, family, g, reservoir, vec![t], Vec::new(), state);
        }
    }

    let mut longest = CascadeState::default();
    let tried = seeds.len().min(limits.seeds.max(1));
    for &t1 in seeds.iter().take(tried) {
        match grow_chain(inst, family, reservoir, t1, limits.r_max)? {
            Ok(outcome) => return Ok(outcome),
            Err(state) => {
                if state.chain.len() > longest.chain.len() {
                    longest = state;
                }
            }
        }
    }
    Ok(CascadeOutcome::NotImproved { seeds_tried: tried, longest })
}

/// Absorbable elements of `g`'s member `t` reachable through the colour
/// witnesses; uncovered ones end the search at once.
enum Level {
    Improved(RainbowFamily),
    /// (element, new set for member t)
    Found(Vec<(Elem, Vec<Elem>)>, usize),
}

fn expand(inst: &ColouredInstance, g: &RainbowFamily, t: usize, reservoir: &[bool]) -> Result<Level> {
    let ws = match one_absorbable_colours(inst, g, t, reservoir)? {
        OneAbsorbable::Improvement(s) => {
            let mut h = g.clone();
            h.replace(t, s);
            return Ok(Level::Improved(h));
        }
        OneAbsorbable::Colours(ws) => ws,
    };
    let tester = inst.span_tester(g.member(t));
    let mut out = Vec::new();
    for w in &ws {
        for &e in inst.class(w.colour) {
            if tester.spans(e) {
                continue;
            }
            let set = with(&w.set, e);
            if !g.is_covered(e) {
                let mut h = g.clone();
                h.replace(t, set);
                return Ok(Level::Improved(h));
            }
            out.push((e, set));
        }
    }
    Ok(Level::Found(out, ws.len()))
}

fn grow_chain(
    inst: &ColouredInstance,
    family: &RainbowFamily,
    reservoir: &[bool],
    t1: usize,
    r_max: usize,
) -> Result<std::result::Result<CascadeOutcome, CascadeState>> {
    let n = inst.n();
    let mut st = CascadeState { chain: vec![t1], ..Default::default() };
    let mut growth = Vec::new();
    // frontier: absorbable element ↦ witness index
    let mut frontier: BTreeMap<Elem, usize> = BTreeMap::new();
    match expand(inst, family, t1, reservoir)? {
        Level::Improved(h) => {
            let chain = st.chain.clone();
            return finish(inst, family, h, reservoir, chain, growth, st).map(Ok);
        }
        Level::Found(found, colours) => {
            st.scratch.colours = colours;
            for (e, set) in found {
                if family.owner(e) == Some(t1) || frontier.contains_key(&e) {
                    continue;
                }
                st.witnesses.push(Witness { level: 1, elem: e, parent: None, set });
                frontier.insert(e, st.witnesses.len() - 1);
            }
        }
    }
    let mut prev_m = 0usize;
    while st.chain.len() < r_max.max(1) {
        if audit::enabled() {
            for (&e, &w) in &frontier {
                verify_witness(inst, family, &st.chain, e, &st.sets(w))?;
            }
        }
        let mut counts = vec![0usize; family.len()];
        for e in frontier.keys() {
            if let Some(o) = family.owner(*e) {
                counts[o] += 1;
            }
        }
        let Some(next) = (0..family.len())
            .filter(|j| !st.chain.contains(j) && counts[*j] > 0)
            .max_by_key(|&j| (counts[j], std::cmp::Reverse(j)))
        else {
            return Ok(Err(st));
        };
        let m = counts[next];
        let last = *st.chain.last().expect("chain starts non-empty");
        growth.push(m as f64 / (prev_m + n - family.member(last).len()).max(1) as f64);
        prev_m = m;
        st.absorb_counts.push(m);
        st.chain.push(next);
        let e_star: Vec<(Elem, usize)> =
            frontier.iter().filter(|(e, _)| family.owner(**e) == Some(next)).map(|(&e, &w)| (e, w)).collect();
        st.scratch = Scratch { e_star: e_star.len(), ..Default::default() };
        let mut new_frontier: BTreeMap<Elem, usize> = BTreeMap::new();
        for (e, w) in e_star {
            let sets = st.sets(w);
            let mut g = family.clone();
            g.replace(next, without(family.member(next), e));
            for (&j, s) in st.chain.iter().zip(&sets) {
                g.replace(j, s.clone());
            }
            if !sets.iter().any(|s| s.contains(&e)) {
                // the rewrite alone already grows the family
                let mut h = family.clone();
                for (&j, s) in st.chain.iter().zip(&sets) {
                    h.replace(j, s.clone());
                }
                let chain = st.chain.clone();
                return finish(inst, family, h, reservoir, chain, growth, st).map(Ok);
            }
            match expand(inst, &g, next, reservoir)? {
                Level::Improved(h) => {
                    let chain = st.chain.clone();
                    return finish(inst, family, h, reservoir, chain, growth, st).map(Ok);
                }
                Level::Found(found, colours) => {
                    st.scratch.colours += colours;
                    for (e2, set) in found {
                        let owner = g.owner(e2);
                        if owner.is_some_and(|o| st.chain.contains(&o)) {
                            st.scratch.e_double_prime += 1;
                            continue;
                        }
                        if new_frontier.contains_key(&e2) {
                            continue;
                        }
                        st.witnesses.push(Witness { level: st.chain.len(), elem: e2, parent: Some(w), set });
                        new_frontier.insert(e2, st.witnesses.len() - 1);
                    }
                }
            }
        }
        st.scratch.e_prime = new_frontier.len();
        frontier = new_frontier;
    }
    Ok(Err(st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::rainbow::max_rainbow_independent;

    #[test]
    fn direct_add_is_chain_length_zero() {
        let inst = generate::linear(3, 5, 8).unwrap();
        let f = RainbowFamily::new(&inst, vec![vec![inst.class(0)[0]]]).unwrap();
        let none = vec![false; inst.ground_len()];
        let limits = CascadeLimits { r_max: 5, seeds: 3 };
        match cascade_improve(&inst, &f, &none, &limits).unwrap() {
            CascadeOutcome::Improved(imp) => {
                assert_eq!(imp.chain_length, 0);
                assert_eq!(imp.family.covered_len(), 2);
            }
            other => panic!("expected improvement, got {other:?}"),
        }
    }

    #[test]
    fn basis_member_is_rejected() {
        let inst = generate::linear(3, 5, 8).unwrap();
        let all: Vec<Elem> = inst.ground().collect();
        let b = max_rainbow_independent(&inst, &all).unwrap();
        assert_eq!(b.len(), 3);
        let f = RainbowFamily::new(&inst, vec![b]).unwrap();
        let none = vec![false; inst.ground_len()];
        assert!(matches!(one_absorbable_colours(&inst, &f, 0, &none), Err(Error::Argument(_))));
        assert!(matches!(
            cascade_improve(&inst, &f, &none, &CascadeLimits { r_max: 3, seeds: 1 }),
            Err(Error::Precondition(_))
        ));
    }
}
