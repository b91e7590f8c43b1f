//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matroid::{is_prime, AnyMatroid, Elem, GraphicMatroid, LinearMatroid, Matroid};
use crate::{ColouredInstance, Error, Result};

/// n uniformly random ordered bases of GF(p)ⁿ, by rejection sampling.
pub fn linear(n: usize, p: u32, seed: u64) -> Result<ColouredInstance> {
    if n == 0 {
        return Err(Error::Argument("n must be positive".into()));
    }
    if !is_prime(p as u64) {
        return Err(Error::Argument(format!("{p} is not prime")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = Vec::with_capacity(n * n);
    for _ in 0..n {
        loop {
            let cand: Vec<Vec<u32>> =
                (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
            let m = LinearMatroid::new(p, n, cand.clone())?;
            let all: Vec<Elem> = (0..n).map(Elem::from).collect();
            if m.is_independent(&all) {
                vectors.extend(cand);
                break;
            }
        }
    }
    let m = AnyMatroid::Linear(LinearMatroid::new(p, n, vectors)?);
    finish(m, n)
}

/// n uniform spanning trees of a seeded multigraph on `vertices = n + 1`
/// vertices. The multigraph is complete with every pair of vertices joined
/// by one to three parallel edges; trees are drawn with Wilson's algorithm.
pub fn graphic(n: usize, vertices: usize, seed: u64) -> Result<ColouredInstance> {
    if n == 0 || vertices != n + 1 {
        return Err(Error::Argument(format!(
            "graphic instances of rank {n} need exactly {} vertices, got {vertices}",
            n + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    for u in 0..vertices {
        for v in u + 1..vertices {
            for _ in 0..rng.gen_range(1..=3) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    let mut edges = Vec::with_capacity(n * n);
    for _ in 0..n {
        edges.extend(wilson(&adj, &mut rng));
    }
    let m = AnyMatroid::Graphic(GraphicMatroid::new(vertices, edges)?);
    finish(m, n)
}

/// Loop-erased random walks toward a root at vertex 0.
fn wilson(adj: &[Vec<usize>], rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let nv = adj.len();
    let mut in_tree = vec![false; nv];
    let mut next = vec![usize::MAX; nv];
    in_tree[0] = true;
    for start in 1..nv {
        let mut u = start;
        while !in_tree[u] {
            next[u] = adj[u][rng.gen_range(0..adj[u].len())];
            u = next[u];
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u];
        }
    }
    (1..nv).map(|v| (v.min(next[v]) as u32, v.max(next[v]) as u32)).collect()
}

fn finish(m: AnyMatroid, n: usize) -> Result<ColouredInstance> {
    let ids = (1..=(n * n) as u64).collect();
    let colours = (0..n * n).map(|i| i / n).collect();
    ColouredInstance::new(m, ids, colours)
}
