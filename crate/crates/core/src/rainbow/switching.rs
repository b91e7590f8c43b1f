//! ℓ-reductions, switching an uncovered element into a family, and the
//! inclusion-maximal extension loop built on it.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{MemberIndex, RainbowFamily};
use crate::exchange::rainbow_augment;
use crate::matroid::{sorted, with, Elem};
use crate::{audit, ColouredInstance, Error, Result};

/// Changes to one member: T_j ↦ (T_j ∖ removed) ∪ added.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwitchStep {
    pub member: usize,
    pub removed: Vec<Elem>,
    pub added: Vec<Elem>,
}

/// The member-by-member difference between two families of equal length.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SwitchChain {
    pub steps: Vec<SwitchStep>,
    /// Σ_j |S_j ∖ T_j|
    pub total_churn: usize,
}

impl SwitchChain {
    pub fn between(before: &RainbowFamily, after: &RainbowFamily) -> Self {
        let mut steps = Vec::new();
        for (j, (t, s)) in before.members().iter().zip(after.members()).enumerate() {
            let removed: Vec<Elem> = t.iter().copied().filter(|e| s.binary_search(e).is_err()).collect();
            let added: Vec<Elem> = s.iter().copied().filter(|e| t.binary_search(e).is_err()).collect();
            if !removed.is_empty() || !added.is_empty() {
                steps.push(SwitchStep { member: j, removed, added });
            }
        }
        let total_churn = steps.iter().map(|s| s.added.len()).sum();
        SwitchChain { steps, total_churn }
    }

    /// Applies the steps to `family` and validates the result.
    pub fn replay(&self, inst: &ColouredInstance, family: &RainbowFamily) -> Result<RainbowFamily> {
        let mut f = family.clone();
        for st in &self.steps {
            if st.member >= f.len() || st.removed.iter().any(|e| f.member(st.member).binary_search(e).is_err()) {
                return Err(Error::Contract(format!("step on member {} does not match the family", st.member)));
            }
            let mut set: Vec<Elem> =
                f.member(st.member).iter().copied().filter(|e| !st.removed.contains(e)).collect();
            set.extend(&st.added);
            f.replace(st.member, set);
        }
        f.validate(inst)?;
        Ok(f)
    }
}

fn pow3(r: usize) -> Result<usize> {
    3usize
        .checked_pow(r as u32)
        .ok_or_else(|| Error::Argument(format!("3^{r} overflows")))
}

fn check_ell(ell: usize, r: usize) -> Result<()> {
    if ell <= pow3(r)? {
        return Err(Error::Argument(format!("ℓ = {ell} must exceed 3^{r}")));
    }
    Ok(())
}

/// Deletes every covered element that at least ℓ members could take in
/// (T + x rainbow independent). Returns the reduced family and the deleted
/// elements, ascending.
pub fn ell_reduction(
    inst: &ColouredInstance,
    family: &RainbowFamily,
    ell: usize,
) -> Result<(RainbowFamily, Vec<Elem>)> {
    if ell == 0 {
        return Err(Error::Argument("ℓ must be positive".into()));
    }
    let idx = MemberIndex::new(inst, family.members());
    let removed: Vec<Elem> = family
        .covered()
        .into_iter()
        .filter(|&x| (0..idx.len()).filter(|&j| idx.fits(j, x)).take(ell).count() >= ell)
        .collect();
    let mut out = family.clone();
    for j in 0..out.len() {
        let keep: Vec<Elem> =
            out.member(j).iter().copied().filter(|e| removed.binary_search(e).is_err()).collect();
        if keep.len() != out.member(j).len() {
            out.replace(j, keep);
        }
    }
    Ok((out, removed))
}

/// 𝒯⁽⁰⁾ = 𝒯 and 𝒯⁽ⁱ⁾ the ℓ-reduction of 𝒯⁽ⁱ⁻¹⁾, for i up to r.
pub fn reductions(
    inst: &ColouredInstance,
    family: &RainbowFamily,
    ell: usize,
    r: usize,
) -> Result<Vec<RainbowFamily>> {
    let mut levels = vec![family.clone()];
    for _ in 0..r {
        let (next, _) = ell_reduction(inst, levels.last().unwrap(), ell)?;
        levels.push(next);
    }
    Ok(levels)
}

/// Lowest level, then lowest member index, with T + e rainbow independent.
fn find_host(inst: &ColouredInstance, levels: &[RainbowFamily], e: Elem, from: usize) -> Option<(usize, usize)> {
    (from..levels.len()).find_map(|i| {
        let idx = MemberIndex::new(inst, levels[i].members());
        (0..idx.len()).find(|&j| idx.fits(j, e)).map(|j| (i, j))
    })
}

/// Puts uncovered `e` into the family so that E(𝒮) = E(𝒯) + e, with
/// Σ_j |S_j ∖ T_j| ≤ 3^r. Needs ℓ > 3^r. Returns `None` when no member of
/// any of the reductions 𝒯⁽⁰⁾..𝒯⁽ʳ⁾ can take e.
pub fn switch_in_element(
    inst: &ColouredInstance,
    family: &RainbowFamily,
    e: Elem,
    ell: usize,
    r: usize,
) -> Result<Option<(RainbowFamily, SwitchChain)>> {
    check_ell(ell, r)?;
    inst.check(&[e])?;
    if family.is_covered(e) {
        return Err(Error::Contract(format!("element {} is already covered", inst.id(e))));
    }
    let levels = reductions(inst, family, ell, r)?;
    let Some((level, host)) = find_host(inst, &levels, e, 0) else {
        return Ok(None);
    };
    switch_at(inst, &levels[..=level], e, host).map(Some)
}

fn switch_at(
    inst: &ColouredInstance,
    levels: &[RainbowFamily],
    e: Elem,
    host: usize,
) -> Result<(RainbowFamily, SwitchChain)> {
    let before = &levels[0];
    let after = switch_rec(inst, levels, e, host)?;
    let chain = SwitchChain::between(before, &after);
    let bound = pow3(levels.len() - 1)?;
    if chain.total_churn > bound {
        return Err(Error::Internal(format!("switch churn {} exceeds {bound}", chain.total_churn)));
    }
    if after.covered() != with(&before.covered(), e) {
        return Err(Error::Internal("switch changed the covered set beyond adding e".into()));
    }
    if audit::enabled() {
        after.validate(inst)?;
    }
    Ok((after, chain))
}

/// levels[0..] are successive reductions and some member of the last level
/// (index `host`) takes e.
fn switch_rec(inst: &ColouredInstance, levels: &[RainbowFamily], e: Elem, host: usize) -> Result<RainbowFamily> {
    let top = &levels[0];
    if levels.len() == 1 {
        let mut f = top.clone();
        f.replace(host, with(top.member(host), e));
        return Ok(f);
    }
    let inner = switch_rec(inst, &levels[1..], e, host)?;
    let reduced = &levels[1];
    // reinstate the elements the reduction deleted, as far as they fit
    let mut star = RainbowFamily::empty(inst, top.len());
    for j in 0..top.len() {
        let s1 = inner.member(j);
        let t = top.member(j);
        let t1 = reduced.member(j);
        let mut base: Vec<Elem> = s1.iter().copied().filter(|x| t1.binary_search(x).is_ok()).collect();
        base.extend(t.iter().copied().filter(|x| t1.binary_search(x).is_err()));
        star.replace(j, rainbow_augment(inst, s1, &sorted(&base))?);
    }
    // hand the elements that did not fit to distinct members, lowest index first
    let idx = MemberIndex::new(inst, star.members());
    let mut used = vec![false; top.len()];
    let displaced: Vec<Elem> = top.covered().into_iter().filter(|&x| !star.is_covered(x)).collect();
    let mut out = star.clone();
    for x in displaced {
        let j = (0..top.len()).find(|&j| !used[j] && idx.fits(j, x)).ok_or_else(|| {
            Error::Internal(format!("no free member takes displaced element {}", inst.id(x)))
        })?;
        used[j] = true;
        out.replace(j, with(out.member(j), x));
    }
    Ok(out)
}

/// Knobs for [`inclusion_maximal_extend`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendOptions {
    pub ell: usize,
    pub r: usize,
    /// Only these elements may be switched in (indexed by element).
    pub allowed: Option<Vec<bool>>,
    /// Scan uncovered elements in a seeded random order instead of by id.
    pub shuffle: Option<u64>,
}

impl ExtendOptions {
    pub fn new(ell: usize, r: usize) -> Self {
        ExtendOptions { ell, r, allowed: None, shuffle: None }
    }
}

/// Switches uncovered elements in until none can be hosted by any member
/// of any reduction 𝒯⁽⁰⁾..𝒯⁽ʳ⁾. Each round grows E(𝒯) by one element.
pub fn inclusion_maximal_extend(
    inst: &ColouredInstance,
    family: &RainbowFamily,
    opts: &ExtendOptions,
) -> Result<RainbowFamily> {
    check_ell(opts.ell, opts.r)?;
    let mut f = family.clone();
    let mut rng = opts.shuffle.map(ChaCha8Rng::seed_from_u64);
    let candidates = |f: &RainbowFamily, rng: &mut Option<ChaCha8Rng>| {
        let mut u: Vec<Elem> = f
            .uncovered()
            .into_iter()
            .filter(|e| opts.allowed.as_ref().is_none_or(|a| a[e.idx()]))
            .collect();
        if let Some(rng) = rng {
            u.shuffle(rng);
        }
        u
    };
    loop {
        // level 0 directly: add anything that fits somewhere
        let mut idx = MemberIndex::new(inst, f.members());
        for e in candidates(&f, &mut rng) {
            if let Some(j) = (0..idx.len()).find(|&j| idx.fits(j, e)) {
                let set = with(f.member(j), e);
                idx.refresh(j, &set);
                f.replace(j, set);
            }
        }
        if opts.r == 0 {
            break;
        }
        let levels = reductions(inst, &f, opts.ell, opts.r)?;
        let found = candidates(&f, &mut rng)
            .into_iter()
            .find_map(|e| find_host(inst, &levels, e, 1).map(|(i, j)| (e, i, j)));
        match found {
            Some((e, i, j)) => f = switch_at(inst, &levels[..=i], e, j)?.0,
            None => break,
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::matroid::{AnyMatroid, UniformMatroid};

    fn free(n: usize) -> ColouredInstance {
        let m = AnyMatroid::Uniform(UniformMatroid::new(n, n * n));
        ColouredInstance::new(m, (1..=(n * n) as u64).collect(), (0..n * n).map(|i| i / n).collect()).unwrap()
    }

    #[test]
    fn reduction_trivial_cases() {
        let inst = free(2);
        let a = inst.class(0)[0];
        let b = inst.class(1)[0];
        let f = RainbowFamily::new(&inst, vec![vec![a], vec![b]]).unwrap();
        let (g, removed) = ell_reduction(&inst, &f, 3).unwrap();
        assert!(removed.is_empty());
        assert_eq!(g, f);
        let (g, removed) = ell_reduction(&inst, &f, 1).unwrap();
        assert_eq!(removed, vec![a, b]);
        assert_eq!(g.covered_len(), 0);
    }

    #[test]
    fn bases_are_never_reduced() {
        let inst = free(2);
        let f = RainbowFamily::new(&inst, vec![vec![inst.class(0)[0], inst.class(1)[0]]]).unwrap();
        assert!(ell_reduction(&inst, &f, 1).unwrap().1.is_empty());
    }

    #[test]
    fn direct_switch_has_churn_one() {
        let inst = free(2);
        let f = RainbowFamily::empty(&inst, 2);
        let e = inst.class(1)[1];
        let (g, chain) = switch_in_element(&inst, &f, e, 2, 0).unwrap().unwrap();
        assert_eq!(g.member(0), &[e]);
        assert_eq!(chain.total_churn, 1);
        assert_eq!(chain.replay(&inst, &f).unwrap(), g);
        assert!(switch_in_element(&inst, &g, e, 2, 0).is_err());
        assert!(switch_in_element(&inst, &f, e, 1, 0).is_err());
    }

    #[test]
    fn extension_covers_a_single_element() {
        let inst = free(1);
        let f = RainbowFamily::empty(&inst, 1);
        let g = inclusion_maximal_extend(&inst, &f, &ExtendOptions::new(4, 1)).unwrap();
        assert_eq!(g.covered_len(), 1);
    }

    #[test]
    fn extension_leaves_nothing_addable() {
        for seed in 0..5 {
            let inst = generate::linear(4, 5, seed).unwrap();
            let f = RainbowFamily::empty(&inst, 5);
            let g = inclusion_maximal_extend(&inst, &f, &ExtendOptions::new(4, 1)).unwrap();
            g.validate(&inst).unwrap();
            let levels = reductions(&inst, &g, 4, 1).unwrap();
            for e in g.uncovered() {
                assert!(find_host(&inst, &levels, e, 0).is_none());
            }
        }
    }
}
