//! The colour-availability graph and the good-edges counting bound.

use num_rational::Rational64;
use serde::Serialize;

use super::RainbowFamily;
use crate::{ColouredInstance, Error, Result};

/// A bipartite graph with left vertices `0..left`, right vertices
/// `0..right` and distinct edges (x, y).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteGraph {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        if let Some(&(x, y)) = edges.iter().find(|&&(x, y)| x >= left || y >= right) {
            return Err(Error::Argument(format!("edge ({x}, {y}) outside the vertex classes")));
        }
        Ok(BipartiteGraph { left, right, edges })
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.left];
        for &(x, _) in &self.edges {
            d[x] += 1;
        }
        d
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.right];
        for &(_, y) in &self.edges {
            d[y] += 1;
        }
        d
    }
}

/// Members on the left, colours on the right; (T, c) is an edge when colour c
/// is missing from T.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvailabilityGraph {
    pub graph: BipartiteGraph,
    pub member_degree: Vec<usize>,
    pub colour_degree: Vec<usize>,
}

pub fn availability_graph(inst: &ColouredInstance, family: &RainbowFamily) -> AvailabilityGraph {
    let mut edges = Vec::new();
    for (j, s) in family.members().iter().enumerate() {
        let mask = inst.colour_mask(s);
        edges.extend((0..inst.n()).filter(|&c| !mask[c]).map(|c| (j, c)));
    }
    let graph = BipartiteGraph { left: family.len(), right: inst.n(), edges };
    AvailabilityGraph { member_degree: graph.left_degrees(), colour_degree: graph.right_degrees(), graph }
}

/// Thresholds for [`good_edges`] and the weighted corollary built on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GoodEdgeParams {
    pub alpha: Rational64,
    pub beta: Rational64,
    pub delta: Rational64,
    pub mu: Rational64,
    pub sigma: Rational64,
    pub lambda: Rational64,
    pub rho: Rational64,
}

impl GoodEdgeParams {
    /// Plain counting form; the corollary fields are zero.
    pub fn new(alpha: Rational64, beta: Rational64, delta: Rational64) -> Result<Self> {
        let zero = Rational64::from_integer(0);
        let p = GoodEdgeParams { alpha, beta, delta, mu: zero, sigma: zero, lambda: zero, rho: zero };
        p.check()?;
        Ok(p)
    }

    /// Weighted form: picks β > α with (β − σ)(1 − μ) < λ, halfway to the
    /// largest admissible value, and the matching ρ. Needs
    /// σ < α ≤ σ + λ and α, μ, δ, σ, λ > 0.
    pub fn corollary(
        alpha: Rational64,
        mu: Rational64,
        delta: Rational64,
        sigma: Rational64,
        lambda: Rational64,
    ) -> Result<Self> {
        let zero = Rational64::from_integer(0);
        let one = Rational64::from_integer(1);
        if [alpha, mu, delta, sigma, lambda].iter().any(|&v| v <= zero) {
            return Err(Error::Argument("α, μ, δ, σ, λ must be positive".into()));
        }
        if !(sigma < alpha && alpha <= sigma + lambda) {
            return Err(Error::Argument("need σ < α ≤ σ + λ".into()));
        }
        let beta = if mu >= one {
            alpha + one
        } else {
            let top = sigma + lambda / (one - mu);
            (alpha + top) / 2
        };
        let slack = lambda - (beta - sigma) * (one - mu).max(zero);
        let rho = delta * (beta - alpha) / beta * slack;
        let p = GoodEdgeParams { alpha, beta, delta, mu, sigma, lambda, rho };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        let zero = Rational64::from_integer(0);
        if !(zero < self.alpha && self.alpha < self.beta) || self.delta <= zero {
            return Err(Error::Argument("need 0 < α < β and δ > 0".into()));
        }
        Ok(())
    }

    /// ⌈δ(β − α)/β · |X|·|Y|⌉
    pub fn guaranteed(&self, left: usize, right: usize) -> i64 {
        let v = self.delta * (self.beta - self.alpha) / self.beta * Rational64::from_integer((left * right) as i64);
        v.ceil().to_integer()
    }
}

fn int(v: usize) -> Rational64 {
    Rational64::from_integer(v as i64)
}

/// All edges (x, y) with deg(y) ≤ β·deg(x). Requires |X| ≤ α|Y| and
/// deg(y) ≥ δ|X| for every y; the returned count is checked against
/// δ(β − α)/β·|X|·|Y|.
pub fn good_edges(g: &BipartiteGraph, params: &GoodEdgeParams) -> Result<Vec<(usize, usize)>> {
    params.check()?;
    if int(g.left) > params.alpha * int(g.right) {
        return Err(Error::Precondition(format!(
            "|X| = {} exceeds α·|Y| = {}",
            g.left,
            params.alpha * int(g.right)
        )));
    }
    let dx = g.left_degrees();
    let dy = g.right_degrees();
    if let Some(y) = (0..g.right).find(|&y| int(dy[y]) < params.delta * int(g.left)) {
        return Err(Error::Precondition(format!(
            "right vertex {y} has degree {} < δ·|X| = {}",
            dy[y],
            params.delta * int(g.left)
        )));
    }
    let good: Vec<(usize, usize)> =
        g.edges.iter().copied().filter(|&(x, y)| int(dy[y]) <= params.beta * int(dx[x])).collect();
    if (good.len() as i64) < params.guaranteed(g.left, g.right) {
        return Err(Error::Internal(format!(
            "{} good edges, fewer than the guaranteed {}",
            good.len(),
            params.guaranteed(g.left, g.right)
        )));
    }
    Ok(good)
}

/// σ·Σ_E deg(x) ≥ ρ·|X|·|Y|² + Σ_E (deg(y) − λ|Y|) for the edge set E.
pub fn corollary_holds(g: &BipartiteGraph, params: &GoodEdgeParams, edges: &[(usize, usize)]) -> bool {
    let dx = g.left_degrees();
    let dy = g.right_degrees();
    let lhs: Rational64 = edges.iter().map(|&(x, _)| params.sigma * int(dx[x])).sum();
    let rhs: Rational64 = params.rho * int(g.left) * int(g.right) * int(g.right)
        + edges.iter().map(|&(_, y)| int(dy[y]) - params.lambda * int(g.right)).sum::<Rational64>();
    lhs >= rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn single_left_vertex() {
        let g = BipartiteGraph::new(1, 2, vec![(0, 0), (0, 1)]).unwrap();
        let p = GoodEdgeParams::new(r(1, 2), r(1, 1), r(1, 1)).unwrap();
        assert_eq!(good_edges(&g, &p).unwrap(), vec![(0, 0), (0, 1)]);
        assert_eq!(p.guaranteed(1, 2), 1);
    }

    #[test]
    fn complete_graph_all_good() {
        let edges = (0..3).flat_map(|x| (0..5).map(move |y| (x, y))).collect();
        let g = BipartiteGraph::new(3, 5, edges).unwrap();
        let p = GoodEdgeParams::new(r(3, 5), r(1, 1), r(1, 1)).unwrap();
        assert_eq!(good_edges(&g, &p).unwrap().len(), 15);
    }

    #[test]
    fn weights_sum_to_right_side() {
        let g = BipartiteGraph::new(3, 4, vec![(0, 0), (1, 0), (1, 1), (2, 2), (0, 3), (2, 3)]).unwrap();
        let dy = g.right_degrees();
        let total: Rational64 = g.edges.iter().map(|&(_, y)| r(1, dy[y] as i64)).sum();
        assert_eq!(total, r(4, 1));
    }

    #[test]
    fn hypotheses_are_checked() {
        let g = BipartiteGraph::new(2, 2, vec![(0, 0), (1, 0)]).unwrap();
        let p = GoodEdgeParams::new(r(1, 1), r(2, 1), r(1, 2)).unwrap();
        assert!(matches!(good_edges(&g, &p), Err(Error::Precondition(m)) if m.contains("right vertex 1")));
        assert!(GoodEdgeParams::new(r(1, 1), r(1, 1), r(1, 1)).is_err());
    }

    #[test]
    fn corollary_parameters() {
        let p = GoodEdgeParams::corollary(r(11, 10), r(1, 10), r(1, 40), r(1, 1), r(1, 10)).unwrap();
        assert!(p.beta > p.alpha);
        assert!((p.beta - p.sigma) * (r(1, 1) - p.mu) < p.lambda);
        assert!(p.rho > r(0, 1));
    }
}
