//! Covering the ground set with few transversal bases.
//!
//! The pipeline: a family of ⌊(1+λ)n⌋ disjoint rainbow independent sets whose
//! uncovered set U has an empty ⌊λn⌋-deadlock, a colour-balancing pass on U,
//! a split of U into rainbow independent sets, and a final greedy extension
//! of everything to transversal bases.

use log::warn;
use serde::Serialize;

use crate::exchange::{inject_between, rainbow_augment, InjectBetween};
use crate::matroid::{closure, greedy_independent, sorted, with, without, Elem};
use crate::oracle::{bf_min_cover, bf_rainbow_decomposition, BruteForceBudget};
use crate::partition::{decompose, deadlock_or_all};
use crate::rainbow::{floor_mul, inclusion_maximal_extend, max_rainbow_independent, ExtendOptions, RainbowFamily};
use crate::solution::TraceEvent;
use crate::{audit, ColouredInstance, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverConfig {
    pub epsilon: f64,
    pub lambda: f64,
    pub nu: f64,
    /// Cap on descent plus balancing steps.
    pub iteration_budget: usize,
    pub ell: usize,
    pub r: usize,
    /// Extra shuffled starts when the first family keeps a deadlock.
    pub restarts: usize,
    /// Exhaustive minimum cover is tried up to this rank.
    pub exact_max_n: usize,
    pub seed: u64,
}

impl CoverConfig {
    /// λ = ε/3 and ν = λ²/4.
    pub fn new(epsilon: f64) -> Result<Self> {
        let lambda = epsilon / 3.0;
        let cfg = CoverConfig {
            epsilon,
            lambda,
            nu: lambda * lambda / 4.0,
            iteration_budget: 10_000,
            ell: 4,
            r: 1,
            restarts: 3,
            exact_max_n: 3,
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = lambda;
        self.nu = lambda * lambda / 4.0;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.lambda && self.lambda < self.epsilon && self.epsilon < 1.0) {
            return Err(Error::Argument(format!(
                "need 0 < λ < ε < 1, got λ = {}, ε = {}",
                self.lambda, self.epsilon
            )));
        }
        if self.iteration_budget == 0 || self.ell == 0 {
            return Err(Error::Argument("budgets must be positive".into()));
        }
        Ok(())
    }

    /// The deadlock parameter ⌊λn⌋, or 1 when that is 0 (second field).
    pub fn deadlock_k(&self, n: usize) -> (usize, bool) {
        match floor_mul(self.lambda, n) {
            0 => (1, true),
            k => (k, false),
        }
    }
}

/// Per-phase statistics attached to a [`CoverSolution`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CoverStats {
    pub members: usize,
    pub k: usize,
    pub k_substituted: bool,
    /// Deadlock parameters tracked by the descent, largest first.
    pub ladder: Vec<usize>,
    pub initial_uncovered: usize,
    pub uncovered_after_build: usize,
    pub descent_steps: usize,
    /// The tracked tuple after every accepted descent step.
    pub tuple_trace: Vec<Vec<usize>>,
    pub build_success: bool,
    pub residual_deadlock: usize,
    pub balance_steps: usize,
    pub balance_absorbed: usize,
    pub balance_relaxed: usize,
    pub balance_success: bool,
    pub colour_max_before: usize,
    pub colour_max_after: usize,
    pub potential_before: usize,
    pub potential_after: usize,
    pub leftover_sets: usize,
    pub leftover_target: usize,
    /// Exhaustive check that U splits into 2k rainbow independent sets, run
    /// for small U.
    pub leftover_exact: Option<bool>,
    pub pipeline_count: usize,
    pub pruned: usize,
    pub fallback: Option<String>,
    pub budget_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverSolution {
    pub bases: Vec<Vec<Elem>>,
    pub covers: bool,
    pub count: usize,
    pub audit: CoverStats,
    #[serde(skip)]
    pub trace: Vec<TraceEvent>,
}

/// Result of [`build_no_deadlock_family`].
#[derive(Clone, Debug, PartialEq)]
pub struct NoDeadlockFamily {
    pub family: RainbowFamily,
    /// D_k(U) = ∅ for the uncovered set U.
    pub success: bool,
    pub residual_deadlock: Vec<Elem>,
    pub ladder: Vec<usize>,
    pub steps: usize,
    pub tuple_trace: Vec<Vec<usize>>,
    pub trace: Vec<TraceEvent>,
}

/// The deadlock parameters whose sizes are tracked, largest first: the even
/// ladder z, z−2, …, z/2 with z the largest multiple of 4 not above λn, or
/// the pair (k, k−2) when z < 8.
pub fn ladder(k: usize) -> Vec<usize> {
    let z = 4 * (k / 4);
    if z >= 8 {
        (z / 2..=z).rev().step_by(2).collect()
    } else {
        vec![k, k.saturating_sub(2)]
    }
}

fn tuple(inst: &ColouredInstance, u: &[Elem], ladder: &[usize]) -> Result<Vec<usize>> {
    let mut t = Vec::with_capacity(ladder.len() + 1);
    for &j in ladder {
        t.push(deadlock_or_all(inst.matroid(), u, j)?.len());
    }
    t.push(u.len());
    Ok(t)
}

fn span_mask(inst: &ColouredInstance, set: &[Elem]) -> Result<Vec<bool>> {
    let mut mask = vec![false; inst.ground_len()];
    for e in closure(inst.matroid(), set)? {
        mask[e.idx()] = true;
    }
    Ok(mask)
}

struct Descent {
    family: RainbowFamily,
    tuple: Vec<usize>,
    event: TraceEvent,
}

/// First (ladder index, e, T) in scan order whose exchange strictly lowers
/// the tuple.
fn descent_step(
    inst: &ColouredInstance,
    f: &RainbowFamily,
    ladder: &[usize],
    current: &[usize],
) -> Result<Option<Descent>> {
    let u = f.uncovered();
    for (li, pair) in ladder.windows(2).enumerate() {
        let top = deadlock_or_all(inst.matroid(), &u, pair[0])?;
        if top.is_empty() {
            continue;
        }
        let below = deadlock_or_all(inst.matroid(), &u, pair[1])?;
        let span = span_mask(inst, &below)?;
        for e in greedy_independent(inst.matroid(), &top) {
            for t in 0..f.len() {
                let member = f.member(t);
                let core: Vec<Elem> = member.iter().copied().filter(|x| span[x.idx()]).collect();
                let core = with(&core, e);
                if !inst.is_rainbow_independent(&core) {
                    continue;
                }
                let next = rainbow_augment(inst, &core, member)?;
                let removed: Vec<Elem> = member.iter().copied().filter(|x| !next.contains(x)).collect();
                let mut g = f.clone();
                g.replace(t, next);
                let tup = tuple(inst, &g.uncovered(), ladder)?;
                if tup.as_slice() < current {
                    let event = TraceEvent::Descent { ladder_index: li, member: t, added: e, removed, tuple: tup.clone() };
                    return Ok(Some(Descent { family: g, tuple: tup, event }));
                }
            }
        }
    }
    Ok(None)
}

/// ⌊(1+λ)n⌋ members (n + 1 when ⌊λn⌋ = 0) built by inclusion-maximal
/// extension, then lexicographic descent on the deadlock-size tuple until
/// D_k(U) = ∅ or the budget runs out. Shuffled restarts are tried while a
/// deadlock remains; the best family found is returned either way.
pub fn build_no_deadlock_family(inst: &ColouredInstance, cfg: &CoverConfig) -> Result<NoDeadlockFamily> {
    cfg.validate()?;
    let n = inst.n();
    let (k, substituted) = cfg.deadlock_k(n);
    let m = if substituted { n + 1 } else { floor_mul(1.0 + cfg.lambda, n).max(n + 1) };
    if floor_mul(1.0 + cfg.lambda, n) < n + 1 {
        warn!("⌊(1+λ)n⌋ = {} leaves no spare member; using {m}", floor_mul(1.0 + cfg.lambda, n));
    }
    let ladder = ladder(k);
    let mut best: Option<NoDeadlockFamily> = None;
    let mut steps = 0;
    for attempt in 0..=cfg.restarts {
        let mut opts = ExtendOptions::new(cfg.ell, cfg.r);
        opts.shuffle = (attempt > 0).then(|| cfg.seed.wrapping_add(attempt as u64));
        let mut f = inclusion_maximal_extend(inst, &RainbowFamily::empty(inst, m), &opts)?;
        let mut cur = tuple(inst, &f.uncovered(), &ladder)?;
        let mut tuple_trace = vec![cur.clone()];
        let mut trace = Vec::new();
        let mut residual = deadlock_or_all(inst.matroid(), &f.uncovered(), k)?;
        while !residual.is_empty() && steps < cfg.iteration_budget {
            let Some(step) = descent_step(inst, &f, &ladder, &cur)? else { break };
            steps += 1;
            f = inclusion_maximal_extend(inst, &step.family, &opts)?;
            let after = tuple(inst, &f.uncovered(), &ladder)?;
            if after > step.tuple || step.tuple >= cur {
                return Err(Error::Internal("descent tuple increased".into()));
            }
            trace.push(step.event);
            cur = after;
            tuple_trace.push(cur.clone());
            residual = deadlock_or_all(inst.matroid(), &f.uncovered(), k)?;
        }
        if audit::enabled() {
            f.validate(inst)?;
        }
        let run = NoDeadlockFamily {
            success: residual.is_empty(),
            residual_deadlock: residual,
            family: f,
            ladder: ladder.clone(),
            steps,
            tuple_trace,
            trace,
        };
        let better = best.as_ref().is_none_or(|b| {
            (run.residual_deadlock.len(), run.family.uncovered().len())
                < (b.residual_deadlock.len(), b.family.uncovered().len())
        });
        let done = run.success || steps >= cfg.iteration_budget;
        if better {
            best = Some(run);
        }
        if done {
            break;
        }
    }
    let mut out = best.expect("at least one attempt runs");
    out.steps = steps;
    Ok(out)
}

/// Result of [`balance_colours`].
#[derive(Clone, Debug, PartialEq)]
pub struct Balanced {
    pub family: RainbowFamily,
    /// Every colour has at most k elements left in U.
    pub success: bool,
    pub steps: usize,
    pub absorbed: usize,
    /// Swaps accepted under the relaxed partner rule.
    pub relaxed: usize,
    pub histogram: Vec<usize>,
    pub trace: Vec<TraceEvent>,
}

fn histogram(inst: &ColouredInstance, u: &[Elem]) -> Vec<usize> {
    let mut h = vec![0; inst.n()];
    for &e in u {
        h[inst.colour(e)] += 1;
    }
    h
}

/// Σ_c |B_c ∩ U|²
pub fn colour_potential(inst: &ColouredInstance, u: &[Elem]) -> usize {
    histogram(inst, u).iter().map(|h| h * h).sum()
}

/// Lowers Σ_c |B_c ∩ U|² until no colour has more than k = ⌊λn⌋ uncovered
/// elements. A member T missing an overfull colour c′ takes x ∈ B_{c′} ∩ U,
/// outright when T + x stays independent, otherwise in exchange for φ(x)
/// from an injection of B_{c′} ∩ U into T. The partner φ(x) must avoid
/// spn(D_{k−1}(U)) and come from a colour with fewer than λn/2 uncovered
/// elements; when no such partner exists, any partner outside that span
/// whose colour is at least two below c′ is accepted. Every step keeps
/// D_k(U) = ∅, checked by recomputation.
pub fn balance_colours(
    inst: &ColouredInstance,
    family: &RainbowFamily,
    cfg: &CoverConfig,
) -> Result<Balanced> {
    cfg.validate()?;
    let n = inst.n();
    let (k, _) = cfg.deadlock_k(n);
    let mut f = family.clone();
    let mut out = Balanced {
        family: f.clone(),
        success: false,
        steps: 0,
        absorbed: 0,
        relaxed: 0,
        histogram: Vec::new(),
        trace: Vec::new(),
    };
    if !deadlock_or_all(inst.matroid(), &f.uncovered(), k)?.is_empty() {
        return Err(Error::Contract("balancing needs an empty deadlock on the uncovered set".into()));
    }
    let half = cfg.lambda * n as f64 / 2.0;
    loop {
        let u = f.uncovered();
        let hist = histogram(inst, &u);
        let mut over: Vec<usize> = (0..n).filter(|&c| hist[c] > k).collect();
        if over.is_empty() {
            out.success = true;
            break;
        }
        if out.steps >= cfg.iteration_budget {
            break;
        }
        over.sort_by_key(|&c| std::cmp::Reverse(hist[c]));
        let span = span_mask(inst, &deadlock_or_all(inst.matroid(), &u, k - 1)?)?;
        let mut applied = None;
        'search: for relaxed in [false, true] {
            for &c in &over {
                let pool: Vec<Elem> = inst.class(c).iter().copied().filter(|e| !f.is_covered(*e)).collect();
                for t in 0..f.len() {
                    let member = f.member(t);
                    if member.iter().any(|&x| inst.colour(x) == c) {
                        continue;
                    }
                    match inject_between(inst, &pool, member)? {
                        InjectBetween::Addable(x) => {
                            applied = Some((t, with(member, x), x, None, false));
                            break 'search;
                        }
                        InjectBetween::Injection(phi) => {
                            for (x, y) in phi.iter() {
                                let hy = hist[inst.colour(y)];
                                let partner_ok = !span[y.idx()]
                                    && hy + 1 < hist[c]
                                    && (relaxed || (hy as f64) < half);
                                if !partner_ok {
                                    continue;
                                }
                                let next = with(&without(member, y), x);
                                let u_next = with(&without(&u, x), y);
                                if deadlock_or_all(inst.matroid(), &u_next, k)?.is_empty() {
                                    applied = Some((t, next, x, Some(y), relaxed));
                                    break 'search;
                                }
                            }
                        }
                    }
                }
            }
        }
        let Some((t, next, x, y, relaxed)) = applied else { break };
        f.replace(t, next);
        out.steps += 1;
        if y.is_none() {
            out.absorbed += 1;
        }
        if relaxed {
            out.relaxed += 1;
        }
        let potential = colour_potential(inst, &f.uncovered());
        out.trace.push(TraceEvent::Balance { member: t, absorbed: x, released: y, potential });
        if audit::enabled() {
            f.validate(inst)?;
            if !deadlock_or_all(inst.matroid(), &f.uncovered(), k)?.is_empty() {
                return Err(Error::Internal("balancing step created a deadlock".into()));
            }
        }
    }
    out.histogram = histogram(inst, &f.uncovered());
    out.family = f;
    Ok(out)
}

/// Result of [`decompose_leftover`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeftoverSplit {
    pub sets: Vec<Vec<Elem>>,
    /// Whether U splits into 2k rainbow independent sets, by exhaustive
    /// search; only run when |U| ≤ 10.
    pub exact: Option<bool>,
}

const EXACT_LEFTOVER: usize = 10;

/// Partitions U into rainbow independent sets. Requires U to split into k
/// independent sets (as it does when D_k(U) = ∅) and at most k elements of
/// any colour in U; the target count is 2k.
pub fn decompose_leftover(inst: &ColouredInstance, u: &[Elem], k: usize) -> Result<LeftoverSplit> {
    inst.check(u)?;
    if k == 0 {
        return Err(Error::Argument("k must be positive".into()));
    }
    let u = sorted(u);
    if decompose(inst.matroid(), &u, k)?.certificate.is_some() {
        return Err(Error::Contract(format!("U does not split into {k} independent sets")));
    }
    if let Some(c) = histogram(inst, &u).iter().position(|&h| h > k) {
        return Err(Error::Contract(format!("colour {} occurs more than {k} times in U", c + 1)));
    }
    split_leftover(inst, &u, k)
}

fn peel(inst: &ColouredInstance, u: &[Elem]) -> Result<Vec<Vec<Elem>>> {
    let mut rest = u.to_vec();
    let mut sets = Vec::new();
    while !rest.is_empty() {
        let s = max_rainbow_independent(inst, &rest)?;
        if s.is_empty() {
            return Err(Error::Internal("rainbow peeling stalled on a loop".into()));
        }
        rest.retain(|e| !s.contains(e));
        sets.push(s);
    }
    Ok(sets)
}

/// k independent parts, each cut by colour repetition, then merged first-fit.
fn split_by_parts(inst: &ColouredInstance, u: &[Elem], k: usize) -> Result<Vec<Vec<Elem>>> {
    let parts = decompose(inst.matroid(), u, k)?;
    let mut pieces: Vec<Vec<Elem>> = Vec::new();
    for part in &parts.parts {
        let mut seen = vec![0usize; inst.n()];
        let mut layers: Vec<Vec<Elem>> = Vec::new();
        for &e in part {
            let c = inst.colour(e);
            if layers.len() <= seen[c] {
                layers.push(Vec::new());
            }
            layers[seen[c]].push(e);
            seen[c] += 1;
        }
        pieces.extend(layers);
    }
    let left: Vec<Elem> = u.iter().copied().filter(|e| parts.covered.binary_search(e).is_err()).collect();
    pieces.extend(peel(inst, &left)?);
    pieces.sort_by_key(|p| std::cmp::Reverse(p.len()));
    let mut merged: Vec<Vec<Elem>> = Vec::new();
    for p in pieces {
        let slot = merged.iter().position(|s| {
            let mut joint = s.clone();
            joint.extend_from_slice(&p);
            inst.is_rainbow_independent(&joint)
        });
        match slot {
            Some(i) => merged[i].extend(p),
            None => merged.push(p),
        }
    }
    Ok(merged.into_iter().map(|s| sorted(&s)).collect())
}

fn split_leftover(inst: &ColouredInstance, u: &[Elem], k: usize) -> Result<LeftoverSplit> {
    if u.is_empty() {
        return Ok(LeftoverSplit { sets: Vec::new(), exact: None });
    }
    let a = split_by_parts(inst, u, k)?;
    let b = peel(inst, u)?;
    let mut sets = if a.len() <= b.len() { a } else { b };
    let mut exact = None;
    if u.len() <= EXACT_LEFTOVER {
        let found = bf_rainbow_decomposition(inst, u, 2 * k, &BruteForceBudget::default())?;
        exact = Some(found.is_some());
        if let Some(w) = found {
            let w: Vec<Vec<Elem>> = w.into_iter().filter(|s| !s.is_empty()).collect();
            if w.len() < sets.len() {
                sets = w;
            }
        }
    }
    Ok(LeftoverSplit { sets, exact })
}

/// Extends each rainbow independent set to a transversal basis by adding,
/// for every missing colour in turn, its lowest element outside the current
/// span.
pub fn extend_to_bases(inst: &ColouredInstance, sets: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
    sets.iter().map(|s| extend_one(inst, s)).collect()
}

fn extend_one(inst: &ColouredInstance, s: &[Elem]) -> Result<Vec<Elem>> {
    inst.check(s)?;
    if !inst.is_rainbow_independent(s) {
        return Err(Error::Contract("set to extend is not rainbow independent".into()));
    }
    let mut out = sorted(s);
    let present = inst.colour_mask(&out);
    for c in (0..inst.n()).filter(|&c| !present[c]) {
        let tester = inst.span_tester(&out);
        let x = inst.class(c).iter().copied().find(|&x| !tester.spans(x)).ok_or_else(|| {
            Error::Internal(format!("colour {} cannot extend a rainbow independent set", c + 1))
        })?;
        out = with(&out, x);
    }
    Ok(out)
}

/// Drops bases all of whose elements another kept basis also covers, last
/// first.
fn prune(inst: &ColouredInstance, bases: &mut Vec<Vec<Elem>>) -> usize {
    let mut mult = vec![0usize; inst.ground_len()];
    for b in bases.iter() {
        for e in b {
            mult[e.idx()] += 1;
        }
    }
    let before = bases.len();
    let mut i = bases.len();
    while i > 0 {
        i -= 1;
        if bases[i].iter().all(|e| mult[e.idx()] > 1) {
            for e in &bases[i] {
                mult[e.idx()] -= 1;
            }
            bases.remove(i);
        }
    }
    before - bases.len()
}

/// Repeatedly extends a maximum rainbow independent subset of the uncovered
/// elements.
fn greedy_cover(inst: &ColouredInstance) -> Result<Vec<Vec<Elem>>> {
    let mut covered = vec![false; inst.ground_len()];
    let mut bases = Vec::new();
    loop {
        let rest: Vec<Elem> = inst.ground().filter(|e| !covered[e.idx()]).collect();
        if rest.is_empty() {
            break;
        }
        let s = max_rainbow_independent(inst, &rest)?;
        let b = extend_one(inst, &s)?;
        for e in &b {
            covered[e.idx()] = true;
        }
        bases.push(b);
    }
    prune(inst, &mut bases);
    Ok(bases)
}

/// The whole covering pipeline. Falls back to a greedy cover when the
/// pipeline needs more than 2n − 2 bases, and to the exhaustive minimum at
/// small rank.
pub fn cover(inst: &ColouredInstance, cfg: &CoverConfig) -> Result<CoverSolution> {
    cfg.validate()?;
    let n = inst.n();
    let (k, k_substituted) = cfg.deadlock_k(n);
    let mut stats = CoverStats { k, k_substituted, initial_uncovered: inst.ground_len(), ..Default::default() };

    let built = build_no_deadlock_family(inst, cfg)?;
    stats.members = built.family.len();
    stats.ladder = built.ladder.clone();
    stats.descent_steps = built.steps;
    stats.tuple_trace = built.tuple_trace.clone();
    stats.build_success = built.success;
    stats.residual_deadlock = built.residual_deadlock.len();
    let mut trace = built.trace;
    let u = built.family.uncovered();
    stats.uncovered_after_build = u.len();
    stats.colour_max_before = histogram(inst, &u).into_iter().max().unwrap_or(0);
    stats.potential_before = colour_potential(inst, &u);
    trace.push(TraceEvent::Phase {
        name: "build".into(),
        detail: format!("|U| = {}, residual deadlock {}", u.len(), built.residual_deadlock.len()),
    });

    let mut family = built.family;
    if built.success {
        let mut bcfg = cfg.clone();
        bcfg.iteration_budget = cfg.iteration_budget.saturating_sub(built.steps).max(1);
        let bal = balance_colours(inst, &family, &bcfg)?;
        stats.balance_steps = bal.steps;
        stats.balance_absorbed = bal.absorbed;
        stats.balance_relaxed = bal.relaxed;
        stats.balance_success = bal.success;
        trace.extend(bal.trace);
        family = bal.family;
    }
    stats.budget_exhausted = built.steps + stats.balance_steps >= cfg.iteration_budget;
    let u = family.uncovered();
    stats.colour_max_after = histogram(inst, &u).into_iter().max().unwrap_or(0);
    stats.potential_after = colour_potential(inst, &u);

    let split = if built.success && stats.balance_success {
        decompose_leftover(inst, &u, k)?
    } else {
        split_leftover(inst, &u, k)?
    };
    stats.leftover_sets = split.sets.len();
    stats.leftover_target = 2 * k;
    stats.leftover_exact = split.exact;

    let mut sets: Vec<Vec<Elem>> = family.members().to_vec();
    sets.extend(split.sets);
    let mut bases = extend_to_bases(inst, &sets)?;
    stats.pipeline_count = bases.len();
    stats.pruned = prune(inst, &mut bases);

    if n >= 2 && bases.len() > 2 * n - 2 {
        let greedy = greedy_cover(inst)?;
        if greedy.len() < bases.len() {
            bases = greedy;
            stats.fallback = Some("greedy".into());
        }
    }
    let exact_wanted = n <= cfg.exact_max_n || ((2..=4).contains(&n) && bases.len() > 2 * n - 2);
    if exact_wanted && bases.len() > n {
        let budget = BruteForceBudget { max_ground: 16, time_cap_ms: Some(5_000), ..Default::default() };
        match bf_min_cover(inst, &budget) {
            Ok(w) if w.count < bases.len() => {
                bases = w.bases;
                stats.fallback = Some("exact".into());
            }
            Ok(_) | Err(Error::SizeCap(_)) => {}
            Err(e) => return Err(e),
        }
    }

    let mut covered = vec![false; inst.ground_len()];
    for b in &bases {
        for e in b {
            covered[e.idx()] = true;
        }
    }
    for e in inst.ground() {
        if !covered[e.idx()] {
            let b = extend_one(inst, &[e])?;
            for x in &b {
                covered[x.idx()] = true;
            }
            bases.push(b);
        }
    }
    if let Some(b) = bases.iter().find(|b| !inst.is_transversal_basis(b)) {
        return Err(Error::Internal(format!("emitted set {:?} is not a transversal basis", inst.ids_of(b))));
    }
    trace.push(TraceEvent::Phase { name: "cover".into(), detail: format!("{} bases", bases.len()) });
    Ok(CoverSolution { count: bases.len(), covers: true, bases, audit: stats, trace })
}
