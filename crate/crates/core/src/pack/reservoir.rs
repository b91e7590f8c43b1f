//! The random reservoir R and checks of the properties the packing argument
//! wants from it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::matroid::Elem;
use crate::{ColouredInstance, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReservoirConfig {
    pub eta: f64,
    pub gamma: f64,
    pub seed: u64,
}

impl ReservoirConfig {
    pub fn new(eta: f64, gamma: f64, seed: u64) -> Result<Self> {
        let c = ReservoirConfig { eta, gamma, seed };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::Argument(format!("η = {} outside [0, 1]", self.eta)));
        }
        if self.gamma <= 0.0 {
            return Err(Error::Argument(format!("γ = {} must be positive", self.gamma)));
        }
        Ok(())
    }
}

/// Each element independently with probability η, decided in ascending
/// element order from a ChaCha8 stream seeded by `seed`.
pub fn sample_reservoir(inst: &ColouredInstance, rcfg: &ReservoirConfig) -> Result<Vec<Elem>> {
    rcfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(rcfg.seed);
    Ok(inst.ground().filter(|_| rng.gen_bool(rcfg.eta)).collect())
}

/// One sampled (T, C) or (Q, C) pair that broke its inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub property: char,
    pub set_size: usize,
    pub colours: usize,
    pub observed: f64,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReservoirReport {
    /// Colours with (η−γ)n ≤ |B_c ∩ R| ≤ (η+γ)n.
    pub diamond_ok: usize,
    pub diamond_fraction: f64,
    pub diamond_bad_colours: Vec<usize>,
    pub samples: usize,
    pub star_violations: usize,
    pub spade_violations: usize,
    pub triangle_violations: usize,
    /// The first few violations, for inspection.
    pub examples: Vec<Violation>,
}

impl ReservoirReport {
    pub fn all_hold(&self) -> bool {
        self.diamond_bad_colours.is_empty()
            && self.star_violations == 0
            && self.spade_violations == 0
            && self.triangle_violations == 0
    }
}

/// Checks ♦ for every colour and ★, ♠, ▲ on `samples` random pairs each.
///
/// ★ and ♠ count, for a random independent T and colour set C, the elements
/// of ⋃_{c∈C} B_c outside spn(T) that lie outside (★) or inside (♠) R, and
/// compare with (1−η)(n−|T|)|C| − γn² and η(n−|T|)|C| − γn². ▲ draws Q ⊆ R
/// missing at most γn² elements and C with |C| ≥ ε′n, and asks for
/// rk(⋃_{c∈C} B_c ∩ Q) ≥ (1−ε′)n.
pub fn check_reservoir(
    inst: &ColouredInstance,
    r: &[Elem],
    rcfg: &ReservoirConfig,
    eps_prime: f64,
    samples: usize,
) -> Result<ReservoirReport> {
    rcfg.validate()?;
    inst.check(r)?;
    let n = inst.n();
    let nf = n as f64;
    let slack = rcfg.gamma * nf * nf;
    let mut in_r = vec![false; inst.ground_len()];
    for e in r {
        in_r[e.idx()] = true;
    }

    let mut diamond_bad_colours = Vec::new();
    for c in 0..n {
        let k = inst.class(c).iter().filter(|e| in_r[e.idx()]).count() as f64;
        if k < (rcfg.eta - rcfg.gamma) * nf - 1e-9 || k > (rcfg.eta + rcfg.gamma) * nf + 1e-9 {
            diamond_bad_colours.push(c);
        }
    }
    let diamond_ok = n - diamond_bad_colours.len();

    let mut rng = ChaCha8Rng::seed_from_u64(rcfg.seed ^ 0x005e_ed0f_7e57);
    let mut report = ReservoirReport {
        diamond_ok,
        diamond_fraction: if n == 0 { 1.0 } else { diamond_ok as f64 / nf },
        diamond_bad_colours,
        samples,
        star_violations: 0,
        spade_violations: 0,
        triangle_violations: 0,
        examples: Vec::new(),
    };
    let ground: Vec<Elem> = inst.ground().collect();
    let colours: Vec<usize> = (0..n).collect();
    let note = |report: &mut ReservoirReport, v: Violation| {
        match v.property {
            '★' => report.star_violations += 1,
            '♠' => report.spade_violations += 1,
            _ => report.triangle_violations += 1,
        }
        if report.examples.len() < 8 {
            report.examples.push(v);
        }
    };

    for _ in 0..samples {
        // a random independent T of random size
        let target = rng.gen_range(0..=n);
        let mut order = ground.clone();
        order.shuffle(&mut rng);
        let mut t = Vec::new();
        for e in order {
            if t.len() == target {
                break;
            }
            t.push(e);
            if !inst.is_independent(&t) {
                t.pop();
            }
        }
        let size = rng.gen_range(1..=n.max(1));
        let cs: Vec<usize> = colours.choose_multiple(&mut rng, size).copied().collect();
        let tester = inst.span_tester(&t);
        let (mut outside, mut inside) = (0usize, 0usize);
        for &c in &cs {
            for &e in inst.class(c) {
                if !tester.spans(e) {
                    if in_r[e.idx()] {
                        inside += 1;
                    } else {
                        outside += 1;
                    }
                }
            }
        }
        let base = (nf - t.len() as f64) * cs.len() as f64;
        let star = (1.0 - rcfg.eta) * base - slack;
        if (outside as f64) < star - 1e-9 {
            let v = Violation { property: '★', set_size: t.len(), colours: cs.len(), observed: outside as f64, required: star };
            note(&mut report, v);
        }
        let spade = rcfg.eta * base - slack;
        if (inside as f64) < spade - 1e-9 {
            let v = Violation { property: '♠', set_size: t.len(), colours: cs.len(), observed: inside as f64, required: spade };
            note(&mut report, v);
        }

        // ▲
        let min_c = ((eps_prime * nf).ceil() as usize).clamp(1, n.max(1));
        let size = rng.gen_range(min_c..=n.max(min_c));
        let cs: Vec<usize> = colours.choose_multiple(&mut rng, size).copied().collect();
        let drop = rng.gen_range(0..=(slack.floor() as usize).min(r.len()));
        let mut q = r.to_vec();
        q.shuffle(&mut rng);
        q.truncate(r.len() - drop);
        let mut in_q = vec![false; inst.ground_len()];
        for e in &q {
            in_q[e.idx()] = true;
        }
        let pool: Vec<Elem> = cs.iter().flat_map(|&c| inst.class(c)).copied().filter(|e| in_q[e.idx()]).collect();
        let rank = inst.rank(&pool) as f64;
        let need = (1.0 - eps_prime) * nf;
        if rank < need - 1e-9 {
            let v = Violation { property: '▲', set_size: q.len(), colours: cs.len(), observed: rank, required: need };
            note(&mut report, v);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn extreme_probabilities() {
        let inst = generate::linear(3, 5, 1).unwrap();
        let none = sample_reservoir(&inst, &ReservoirConfig::new(0.0, 0.1, 3).unwrap()).unwrap();
        assert!(none.is_empty());
        let all = sample_reservoir(&inst, &ReservoirConfig::new(1.0, 0.1, 3).unwrap()).unwrap();
        assert_eq!(all.len(), 9);
        let rep = check_reservoir(&inst, &all, &ReservoirConfig::new(1.0, 0.01, 3).unwrap(), 0.5, 20).unwrap();
        assert_eq!(rep.diamond_ok, 3);
        let rep = check_reservoir(&inst, &none, &ReservoirConfig::new(0.0, 0.01, 3).unwrap(), 0.5, 20).unwrap();
        assert_eq!(rep.spade_violations, 0);
    }

    #[test]
    fn seeded_and_reproducible() {
        let inst = generate::linear(4, 7, 2).unwrap();
        let c = ReservoirConfig::new(0.4, 0.1, 99).unwrap();
        assert_eq!(sample_reservoir(&inst, &c).unwrap(), sample_reservoir(&inst, &c).unwrap());
        assert!(ReservoirConfig::new(1.5, 0.1, 0).is_err());
        assert!(ReservoirConfig::new(0.5, 0.0, 0).is_err());
    }
}
