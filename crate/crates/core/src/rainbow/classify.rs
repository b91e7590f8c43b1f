//! Which of the three structural outcomes a family exhibits: a small member,
//! a member/colour pair with many addable uncovered elements, or a large
//! ℓ-reduction loss.

use serde::Serialize;

use super::{availability_graph, ceil_mul, ell_reduction, floor_mul, MemberIndex, RainbowFamily};
use crate::matroid::Elem;
use crate::{ColouredInstance, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Outcome {
    /// Some member has at most μn elements.
    #[serde(rename = "i")]
    SmallMember,
    /// Some (T, c) has more addable uncovered colour-c elements than the
    /// threshold.
    #[serde(rename = "ii")]
    ManyAddable,
    /// The ℓ-reduction removes at least γn² elements.
    #[serde(rename = "iii")]
    ReductionLoss,
}

/// Threshold variant for outcome (ii).
#[derive(Clone, Debug, PartialEq)]
pub enum ClassifyMode {
    /// ⌊(1+λ)n⌋ members; threshold deg(c) − ⌊λn⌋.
    Cover { lambda: f64 },
    /// ⌊(1−ε)n⌋ members avoiding the reservoir; threshold
    /// deg(c) − |B_c ∩ R| + ⌈εn⌉, counting only elements outside R.
    Pack { epsilon: f64, reservoir: Vec<Elem> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub outcomes: Vec<Outcome>,
    pub smallest_member: Option<(usize, usize)>,
    /// Best (member, colour, addable count, threshold) by margin.
    pub best_pair: Option<(usize, usize, usize, i64)>,
    pub reduction_loss: usize,
    pub loss_threshold: f64,
}

/// Reports every outcome that holds; an empty list means none does.
pub fn classify_family(
    inst: &ColouredInstance,
    family: &RainbowFamily,
    mu: f64,
    ell: usize,
    gamma: f64,
    mode: &ClassifyMode,
) -> Result<ClassifyReport> {
    let n = inst.n();
    let mut outcomes = Vec::new();

    let smallest_member = family.members().iter().enumerate().map(|(j, s)| (j, s.len())).min_by_key(|p| p.1);
    if smallest_member.is_some_and(|(_, len)| len as f64 <= mu * n as f64 + 1e-9) {
        outcomes.push(Outcome::SmallMember);
    }

    let graph = availability_graph(inst, family);
    let mut in_reservoir = vec![false; inst.ground_len()];
    if let ClassifyMode::Pack { reservoir, .. } = mode {
        for e in reservoir {
            in_reservoir[e.idx()] = true;
        }
    }
    let idx = MemberIndex::new(inst, family.members());
    let mut best_pair: Option<(usize, usize, usize, i64)> = None;
    for &(j, c) in &graph.graph.edges {
        let class = inst.class(c);
        let addable = class
            .iter()
            .filter(|&&e| !family.is_covered(e) && !in_reservoir[e.idx()] && idx.fits(j, e))
            .count();
        let deg = graph.colour_degree[c] as i64;
        let threshold = match mode {
            ClassifyMode::Cover { lambda } => deg - floor_mul(*lambda, n) as i64,
            ClassifyMode::Pack { epsilon, .. } => {
                let in_r = class.iter().filter(|e| in_reservoir[e.idx()]).count() as i64;
                deg - in_r + ceil_mul(*epsilon, n) as i64
            }
        };
        let margin = addable as i64 - threshold;
        if best_pair.is_none_or(|(_, _, a, t)| margin > a as i64 - t) {
            best_pair = Some((j, c, addable, threshold));
        }
    }
    if best_pair.is_some_and(|(_, _, a, t)| a as i64 > t) {
        outcomes.push(Outcome::ManyAddable);
    }

    let (reduced, _) = ell_reduction(inst, family, ell)?;
    let reduction_loss = family.covered_len() - reduced.covered_len();
    let loss_threshold = gamma * (n * n) as f64;
    if reduction_loss as f64 >= loss_threshold {
        outcomes.push(Outcome::ReductionLoss);
    }
    Ok(ClassifyReport { outcomes, smallest_member, best_pair, reduction_loss, loss_threshold })
}
