//! Constructive exchanges and injections between independent sets.
//!
//! Every function checks its inputs and, when auditing is on, re-verifies its
//! output through the oracle before returning.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::matching::max_matching;
use crate::matroid::{extend_to_basis, sorted, with, Elem};
use crate::{audit, ColouredInstance, Error, Result};

/// An injective map between element sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Injection(BTreeMap<Elem, Elem>);

impl Injection {
    pub fn get(&self, x: Elem) -> Option<Elem> {
        self.0.get(&x).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.0.iter().map(|(&a, &b)| (a, b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self) -> Vec<Elem> {
        sorted(&self.0.values().copied().collect::<Vec<_>>())
    }

    pub fn is_injective(&self) -> bool {
        let img = self.image();
        img.windows(2).all(|w| w[0] != w[1])
    }

    fn inverse(&self) -> Injection {
        Injection(self.0.iter().map(|(&a, &b)| (b, a)).collect())
    }
}

/// Outcome of [`inject_between`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum InjectBetween {
    /// An element of S that can be added to T outright.
    Addable(Elem),
    /// φ: S → T with T − φ(x) + x independent and spanning spn(T).
    Injection(Injection),
}

/// Which set [`double_switch`] certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SwitchCase {
    /// T − q′ + x
    A,
    /// T − x′ − q′ + x + q
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleSwitch {
    pub case: SwitchCase,
    pub set: Vec<Elem>,
}

fn require_independent(inst: &ColouredInstance, s: &[Elem], what: &str) -> Result<()> {
    inst.check(s)?;
    if !inst.is_independent(s) {
        return Err(Error::Contract(format!("{what} is not independent")));
    }
    Ok(())
}

fn require_rainbow_independent(inst: &ColouredInstance, s: &[Elem], what: &str) -> Result<()> {
    inst.check(s)?;
    if !inst.is_rainbow_independent(s) {
        return Err(Error::Contract(format!("{what} is not rainbow independent")));
    }
    Ok(())
}

fn require_basis(inst: &ColouredInstance, s: &[Elem], what: &str) -> Result<()> {
    require_independent(inst, s, what)?;
    if s.len() != inst.n() {
        return Err(Error::Contract(format!("{what} is not a basis")));
    }
    Ok(())
}

/// `t - out + inn`, as a fresh vector.
pub fn swap(t: &[Elem], out: &[Elem], inn: &[Elem]) -> Vec<Elem> {
    let mut v: Vec<Elem> = t.iter().copied().filter(|x| !out.contains(x)).collect();
    v.extend_from_slice(inn);
    v.sort_unstable();
    v
}

/// Whether `s` (independent) spans exactly spn(t), checked via rank and
/// per-element containment.
pub fn same_span(inst: &ColouredInstance, s: &[Elem], t: &[Elem]) -> bool {
    let ts = inst.span_tester(t);
    if ts.rank() != inst.rank(s) {
        return false;
    }
    s.iter().all(|&x| ts.spans(x))
}

/// Grows rainbow independent `s` by elements of rainbow independent `t`
/// (lowest index first) whenever the result stays rainbow independent.
///
/// Every element of `t` left out is blocked either by its colour, which some
/// element of `s ∖ t` occupies, or by the span, and each kind of blocking
/// accounts for at most `|s ∖ t|` elements. So `|t ∖ S*| ≤ 2·|s ∖ t|`.
pub fn rainbow_augment(inst: &ColouredInstance, s: &[Elem], t: &[Elem]) -> Result<Vec<Elem>> {
    require_rainbow_independent(inst, s, "S")?;
    require_rainbow_independent(inst, t, "T")?;
    let mut out = sorted(s);
    let mut colours = inst.colour_mask(&out);
    let mut span = inst.span_tester(&out);
    for &x in sorted(t).iter() {
        if out.contains(&x) || colours[inst.colour(x)] || span.spans(x) {
            continue;
        }
        out = with(&out, x);
        colours[inst.colour(x)] = true;
        span = inst.span_tester(&out);
    }
    let s_minus_t = s.iter().filter(|x| !t.contains(x)).count();
    let t_minus_out = t.iter().filter(|x| !out.contains(x)).count();
    if t_minus_out > 2 * s_minus_t {
        return Err(Error::Internal(format!(
            "rainbow augmentation left {t_minus_out} elements of T behind, bound {}",
            2 * s_minus_t
        )));
    }
    debug_assert!(inst.is_rainbow_independent(&out));
    Ok(out)
}

/// ψ: B → B′ with B′ − ψ(x) + x independent for every x, from a perfect
/// matching of the exchange graph.
pub fn basis_exchange_bijection(inst: &ColouredInstance, b: &[Elem], b2: &[Elem]) -> Result<Injection> {
    require_basis(inst, b, "B")?;
    require_basis(inst, b2, "B′")?;
    bijection_unchecked(inst, b, b2)
}

fn bijection_unchecked(inst: &ColouredInstance, b: &[Elem], b2: &[Elem]) -> Result<Injection> {
    let tester = inst.span_tester(b2);
    let pos: BTreeMap<Elem, usize> = b2.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let adj: Vec<Vec<usize>> = b
        .iter()
        .map(|&x| {
            tester
                .circuit(x)
                .unwrap_or_default()
                .iter()
                .map(|y| pos[y])
                .collect()
        })
        .collect();
    let m = max_matching(&adj, b2.len());
    let mut map = BTreeMap::new();
    for (i, r) in m.iter().enumerate() {
        match r {
            Some(r) => {
                map.insert(b[i], b2[*r]);
            }
            None => {
                return Err(Error::Internal(format!(
                    "exchange graph between bases has no perfect matching (element {})",
                    b[i]
                )))
            }
        }
    }
    let psi = Injection(map);
    if audit::enabled() {
        for (x, y) in psi.iter() {
            if !inst.is_independent(&swap(b2, &[y], &[x])) {
                return Err(Error::Internal(format!("B′ − {y} + {x} is dependent")));
            }
        }
    }
    Ok(psi)
}

/// φ: S → B with S − x + φ(x) independent for every x ∈ S and S + b
/// independent for every b ∈ B outside the image.
pub fn inject_to_basis(inst: &ColouredInstance, s: &[Elem], b: &[Elem]) -> Result<Injection> {
    require_independent(inst, s, "S")?;
    require_basis(inst, b, "B")?;
    let b2 = extend_to_basis(inst.matroid(), s);
    let psi = bijection_unchecked(inst, b, &b2)?;
    let phi = Injection(psi.inverse().0.into_iter().filter(|(k, _)| s.contains(k)).collect());
    if audit::enabled() {
        verify_inject_to_basis(inst, s, b, &phi)?;
    }
    Ok(phi)
}

pub fn verify_inject_to_basis(inst: &ColouredInstance, s: &[Elem], b: &[Elem], phi: &Injection) -> Result<()> {
    if phi.len() != s.len() || !phi.is_injective() {
        return Err(Error::Internal("φ is not an injection of S".into()));
    }
    for &x in s {
        let y = phi.get(x).ok_or_else(|| Error::Internal(format!("φ undefined at {x}")))?;
        if !b.contains(&y) || !inst.is_independent(&swap(s, &[x], &[y])) {
            return Err(Error::Internal(format!("S − {x} + φ({x}) is dependent")));
        }
    }
    let img = phi.image();
    for &y in b.iter().filter(|y| !img.contains(y)) {
        if !inst.is_independent(&with(&sorted(s), y)) {
            return Err(Error::Internal(format!("S + {y} is dependent")));
        }
    }
    Ok(())
}

/// Either some x ∈ S (lowest index) with T + x independent, or an injection
/// φ: S → T with T − φ(x) + x independent and of the same span as T.
pub fn inject_between(inst: &ColouredInstance, s: &[Elem], t: &[Elem]) -> Result<InjectBetween> {
    require_independent(inst, s, "S")?;
    require_independent(inst, t, "T")?;
    let tester = inst.span_tester(t);
    if let Some(&x) = sorted(s).iter().find(|&&x| !tester.spans(x)) {
        return Ok(InjectBetween::Addable(x));
    }
    let b = extend_to_basis(inst.matroid(), s);
    let b2 = extend_to_basis(inst.matroid(), t);
    let psi = bijection_unchecked(inst, &b, &b2)?;
    let phi = Injection(psi.0.into_iter().filter(|(k, _)| s.contains(k)).collect());
    if let Some((x, y)) = phi.iter().find(|(_, y)| !t.contains(y)) {
        return Err(Error::Internal(format!("ψ({x}) = {y} leaves T although S ⊆ spn(T)")));
    }
    if audit::enabled() {
        verify_inject_between(inst, s, t, &phi)?;
    }
    Ok(InjectBetween::Injection(phi))
}

pub fn verify_inject_between(inst: &ColouredInstance, s: &[Elem], t: &[Elem], phi: &Injection) -> Result<()> {
    if phi.len() != s.len() || !phi.is_injective() {
        return Err(Error::Internal("φ is not an injection of S".into()));
    }
    for &x in s {
        let y = phi.get(x).ok_or_else(|| Error::Internal(format!("φ undefined at {x}")))?;
        let set = swap(t, &[y], &[x]);
        if !t.contains(&y) || set.len() != t.len() || !inst.is_independent(&set) || !same_span(inst, &set, t) {
            return Err(Error::Internal(format!("T − φ({x}) + {x} fails the exchange contract")));
        }
    }
    Ok(())
}

/// Combines two single exchanges T − x′ + x and T − q′ + q into one set of
/// size |T| that frees the colour slot of q′: either T − q′ + x (case A) or
/// T − x′ − q′ + x + q (case B), whichever is independent, A first.
pub fn double_switch(
    inst: &ColouredInstance,
    t: &[Elem],
    x: Elem,
    x2: Elem,
    q: Elem,
    q2: Elem,
) -> Result<DoubleSwitch> {
    require_independent(inst, t, "T")?;
    inst.check(&[x, x2, q, q2])?;
    if t.contains(&x) || t.contains(&q) || !t.contains(&x2) || !t.contains(&q2) {
        return Err(Error::Contract("need x, q outside T and x′, q′ inside".into()));
    }
    let tester = inst.span_tester(t);
    for (a, b) in [(x, x2), (q, q2)] {
        if !tester.spans(a) || !inst.is_independent(&swap(t, &[b], &[a])) {
            return Err(Error::Contract(format!("T − {b} + {a} does not preserve spn(T)")));
        }
    }
    let a = swap(t, &[q2], &[x]);
    if x2 == q2 || inst.is_independent(&a) {
        return Ok(DoubleSwitch { case: SwitchCase::A, set: a });
    }
    let b = swap(t, &[x2, q2], &[x, q]);
    if b.len() == t.len() && inst.is_independent(&b) {
        debug_assert!(same_span(inst, &b, t));
        return Ok(DoubleSwitch { case: SwitchCase::B, set: b });
    }
    Err(Error::Internal("neither double-switch candidate is independent".into()))
}
