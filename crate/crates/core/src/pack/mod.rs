//! Packing disjoint transversal bases.
//!
//! A random reservoir R is set aside, a family of ⌊(1−ε)n⌋ disjoint rainbow
//! independent sets is grown outside R, padded with empty members to
//! ⌈(1−ε)n⌉, and then improved one element at a time by absorbable-element
//! cascades until every member is a basis or the budget runs out.

mod cascade;
mod reservoir;

use std::time::{Duration, Instant};

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::matroid::Elem;
use crate::oracle::{bf_max_disjoint_transversal_bases, BruteForceBudget};
use crate::rainbow::{
    ceil_mul, floor_mul, inclusion_maximal_extend, max_rainbow_independent_from, ExtendOptions, RainbowFamily,
};
use crate::solution::TraceEvent;
use crate::{ColouredInstance, Error, Result};

pub use cascade::{
    cascade_improve, one_absorbable_colours, small_improvement, verify_witness, CascadeLimits, CascadeOutcome,
    CascadeState, ColourWitness, Improvement, OneAbsorbable, Scratch, Witness,
};
pub use reservoir::{check_reservoir, sample_reservoir, ReservoirConfig, ReservoirReport, Violation};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PackConfig {
    pub epsilon: f64,
    /// Allowed share of reservoir elements in the family, as a fraction of
    /// n²; reported against, never enforced.
    pub sigma: f64,
    /// Reservoir-cost constant of the per-improvement ledger.
    pub big_l: f64,
    /// Overrides the cascade depth cap min(⌈(L/8)·ln(n²/s)⌉ + 2, 3n).
    pub r_max: Option<usize>,
    /// Deficient members tried as chain starts per improvement.
    pub seeds: usize,
    pub max_improvements: usize,
    pub budget_ms: Option<u64>,
    pub ell: usize,
    pub r: usize,
    /// Use the exhaustive packing when the heuristic finds fewer than n
    /// bases and n ≤ 4.
    pub exact_fallback: bool,
}

impl PackConfig {
    /// σ = ε³/20 and L = 10⁷/ε⁵.
    pub fn new(epsilon: f64) -> Result<Self> {
        let c = PackConfig {
            epsilon,
            sigma: epsilon.powi(3) / 20.0,
            big_l: 1e7 / epsilon.powi(5),
            r_max: None,
            seeds: 4,
            max_improvements: 100_000,
            budget_ms: None,
            ell: 4,
            r: 1,
            exact_fallback: false,
        };
        c.validate()?;
        if epsilon >= 0.1 {
            warn!("ε = {epsilon} is outside (0, 1/10); the constants are used as heuristics only");
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.epsilon && self.epsilon < 1.0) {
            return Err(Error::Argument(format!("ε = {} outside (0, 1)", self.epsilon)));
        }
        if self.sigma <= 0.0 || self.big_l <= 0.0 || self.max_improvements == 0 || self.ell == 0 {
            return Err(Error::Argument("σ, L and budgets must be positive".into()));
        }
        if self.r_max == Some(0) || self.budget_ms == Some(0) {
            return Err(Error::Argument("r_max and the time budget must be positive".into()));
        }
        Ok(())
    }

    /// Cascade depth cap for deficiency s.
    pub fn depth(&self, n: usize, s: usize) -> usize {
        if let Some(r) = self.r_max {
            return r;
        }
        let ln = ((n * n) as f64 / s.max(1) as f64).ln().max(0.0);
        let formula = (self.big_l / 8.0 * ln).ceil() + 2.0;
        (formula.min((3 * n) as f64) as usize).max(2)
    }
}

/// ⌊(1−ε)n⌋ disjoint rainbow independent sets inside ground ∖ R, grown by
/// inclusion-maximal extension.
pub fn build_avoiding_family(
    inst: &ColouredInstance,
    epsilon: f64,
    reservoir: &[Elem],
    ell: usize,
    r: usize,
) -> Result<RainbowFamily> {
    inst.check(reservoir)?;
    let m = floor_mul(1.0 - epsilon, inst.n());
    let mut opts = ExtendOptions::new(ell, r);
    let mut allowed = vec![true; inst.ground_len()];
    for e in reservoir {
        allowed[e.idx()] = false;
    }
    opts.allowed = Some(allowed);
    let f = inclusion_maximal_extend(inst, &RainbowFamily::empty(inst, m), &opts)?;
    if let Some(e) = f.members().iter().flatten().find(|e| reservoir.contains(e)) {
        return Err(Error::Internal(format!("avoiding family took reservoir element {}", inst.id(*e))));
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReservoirSummary {
    pub eta: f64,
    pub size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CascadeStats {
    pub improvements: usize,
    pub max_chain: usize,
    /// Per-level growth ratios of every chain that led to an improvement.
    pub growth_factors: Vec<f64>,
    /// Levels whose ratio reached 1 + ε/4.
    pub growth_met: usize,
    pub growth_levels: usize,
    pub local_augmentations: usize,
    pub stalls: usize,
    pub reservoir_cost_total: i64,
    /// Improvements whose reservoir cost exceeded L·ln(n²/s).
    pub cost_over_ledger: usize,
    /// Improvements made while |E| < ¾n².
    pub below_three_quarters: usize,
    pub avoiding_members: usize,
    pub avoiding_covered: usize,
    pub members: usize,
    pub non_basis_dropped: usize,
    /// Bases re-extracted from the elements of dropped members and the
    /// uncovered rest.
    pub salvaged: usize,
    /// A seeded peel of the whole ground set beat the cascade result.
    pub repeeled: bool,
    pub budget_exhausted: bool,
    pub exact_used: bool,
    /// |E(𝒯) ∩ R| stayed within σn² throughout.
    pub sigma_respected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Floors {
    pub half_n: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PackSolution {
    pub bases_found: usize,
    pub bases: Vec<Vec<Elem>>,
    pub reservoir: ReservoirSummary,
    pub cascade_stats: CascadeStats,
    pub floors: Floors,
    #[serde(skip)]
    pub trace: Vec<TraceEvent>,
}

/// Largest rainbow independent subset of U ∪ T grown from T, for the most
/// deficient member where that beats T.
/// Repeatedly takes a transversal basis out of `pool` by matroid
/// intersection, starting each from a random greedy rainbow set when `rng`
/// is given.
fn peel(inst: &ColouredInstance, mut pool: Vec<Elem>, mut rng: Option<&mut ChaCha8Rng>) -> Result<Vec<Vec<Elem>>> {
    let n = inst.n();
    let mut out = Vec::new();
    while pool.len() >= n {
        let mut start = Vec::new();
        if let Some(rng) = rng.as_deref_mut() {
            let mut order = pool.clone();
            order.shuffle(rng);
            for e in order {
                start.push(e);
                if !inst.is_rainbow_independent(&start) {
                    start.pop();
                }
            }
        }
        let s = max_rainbow_independent_from(inst, &pool, &start)?;
        if s.len() < n {
            break;
        }
        pool.retain(|e| !s.contains(e));
        out.push(s);
    }
    Ok(out)
}

fn local_augment(inst: &ColouredInstance, f: &RainbowFamily) -> Result<Option<RainbowFamily>> {
    let n = inst.n();
    let mut order: Vec<usize> = (0..f.len()).filter(|&j| f.member(j).len() < n).collect();
    order.sort_by_key(|&j| (f.member(j).len(), j));
    let u = f.uncovered();
    for t in order {
        let mut pool = u.clone();
        pool.extend_from_slice(f.member(t));
        let s = max_rainbow_independent_from(inst, &pool, f.member(t))?;
        if s.len() > f.member(t).len() {
            let mut g = f.clone();
            g.replace(t, s);
            return Ok(Some(g));
        }
    }
    Ok(None)
}

pub fn pack(inst: &ColouredInstance, pcfg: &PackConfig, rcfg: &ReservoirConfig) -> Result<PackSolution> {
    pcfg.validate()?;
    let n = inst.n();
    let started = Instant::now();
    let deadline = pcfg.budget_ms.map(|ms| started + Duration::from_millis(ms));
    let reservoir = sample_reservoir(inst, rcfg)?;
    let mut mask = vec![false; inst.ground_len()];
    for e in &reservoir {
        mask[e.idx()] = true;
    }
    let mut stats = CascadeStats { sigma_respected: true, ..Default::default() };
    let mut trace = Vec::new();

    let mut family = build_avoiding_family(inst, pcfg.epsilon, &reservoir, pcfg.ell, pcfg.r)?;
    stats.avoiding_members = family.len();
    stats.avoiding_covered = family.covered_len();
    let target = ceil_mul(1.0 - pcfg.epsilon, n).max(1);
    while family.len() < target {
        family.push(Vec::new());
    }
    stats.members = family.len();
    trace.push(TraceEvent::Phase {
        name: "avoiding".into(),
        detail: format!("{} members cover {} of {}", stats.avoiding_members, stats.avoiding_covered, n * n),
    });

    let sigma_cap = pcfg.sigma * (n * n) as f64;
    let full = family.len() * n;
    while family.covered_len() < full {
        if stats.improvements + stats.local_augmentations >= pcfg.max_improvements
            || deadline.is_some_and(|d| Instant::now() > d)
        {
            stats.budget_exhausted = true;
            break;
        }
        let s = full - family.covered_len();
        let limits = CascadeLimits { r_max: pcfg.depth(n, s), seeds: pcfg.seeds };
        if 4 * family.covered_len() < 3 * n * n {
            stats.below_three_quarters += 1;
        }
        match cascade_improve(inst, &family, &mask, &limits)? {
            CascadeOutcome::Improved(imp) => {
                stats.improvements += 1;
                stats.max_chain = stats.max_chain.max(imp.chain_length);
                for &g in &imp.growth_factors {
                    stats.growth_levels += 1;
                    if g >= 1.0 + pcfg.epsilon / 4.0 {
                        stats.growth_met += 1;
                    }
                }
                stats.growth_factors.extend(&imp.growth_factors);
                stats.reservoir_cost_total += imp.reservoir_cost;
                let ledger = pcfg.big_l * ((n * n) as f64 / s as f64).ln();
                if imp.reservoir_cost as f64 > ledger {
                    stats.cost_over_ledger += 1;
                }
                trace.push(TraceEvent::Improvement {
                    covered: imp.family.covered_len(),
                    chain: imp.chain.clone(),
                    churn: imp.switch.total_churn,
                    reservoir_cost: imp.reservoir_cost,
                    method: "cascade".into(),
                });
                family = imp.family;
            }
            CascadeOutcome::NotImproved { .. } => match local_augment(inst, &family)? {
                Some(g) => {
                    stats.local_augmentations += 1;
                    let before = family.members().iter().flatten().filter(|e| mask[e.idx()]).count() as i64;
                    let after = g.members().iter().flatten().filter(|e| mask[e.idx()]).count() as i64;
                    trace.push(TraceEvent::Improvement {
                        covered: g.covered_len(),
                        chain: Vec::new(),
                        churn: crate::rainbow::SwitchChain::between(&family, &g).total_churn,
                        reservoir_cost: after - before,
                        method: "augment".into(),
                    });
                    stats.reservoir_cost_total += after - before;
                    family = g;
                }
                None => {
                    stats.stalls += 1;
                    break;
                }
            },
        }
        let in_r = family.members().iter().flatten().filter(|e| mask[e.idx()]).count();
        if in_r as f64 > sigma_cap {
            stats.sigma_respected = false;
        }
    }

    let mut bases: Vec<Vec<Elem>> = family.members().iter().filter(|m| m.len() == n).cloned().collect();
    stats.non_basis_dropped = family.len() - bases.len();
    if stats.non_basis_dropped > 0 {
        let mut used = vec![false; inst.ground_len()];
        bases.iter().flatten().for_each(|e| used[e.idx()] = true);
        let pool: Vec<Elem> = inst.ground().filter(|e| !used[e.idx()]).collect();
        let extra = peel(inst, pool, None)?;
        stats.salvaged = extra.len();
        bases.extend(extra);
    }
    for i in 0..pcfg.seeds as u64 {
        if bases.len() >= target {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(rcfg.seed.wrapping_add(i));
        let cand = peel(inst, inst.ground().collect(), Some(&mut rng))?;
        if cand.len() > bases.len() {
            bases = cand;
            stats.repeeled = true;
        }
    }
    if pcfg.exact_fallback && n <= 4 && bases.len() < n {
        let budget = BruteForceBudget { max_ground: 16, time_cap_ms: Some(10_000), ..Default::default() };
        match bf_max_disjoint_transversal_bases(inst, &budget) {
            Ok(w) if w.count > bases.len() => {
                bases = w.bases;
                stats.exact_used = true;
            }
            Ok(_) | Err(Error::SizeCap(_)) => {}
            Err(e) => return Err(e),
        }
    }
    trace.push(TraceEvent::Phase { name: "pack".into(), detail: format!("{} bases", bases.len()) });
    Ok(PackSolution {
        bases_found: bases.len(),
        bases,
        reservoir: ReservoirSummary { eta: rcfg.eta, size: reservoir.len() },
        cascade_stats: stats,
        floors: Floors { half_n: n.div_ceil(2), target },
        trace,
    })
}
