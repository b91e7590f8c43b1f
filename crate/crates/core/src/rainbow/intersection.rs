//! Maximum rainbow independent sets: matroid intersection of the underlying
//! matroid with the colour partition matroid.

use std::collections::VecDeque;

use crate::matroid::{sorted, Elem};
use crate::{ColouredInstance, Error, Result};

/// A largest rainbow independent subset of `subset`.
pub fn max_rainbow_independent(inst: &ColouredInstance, subset: &[Elem]) -> Result<Vec<Elem>> {
    max_rainbow_independent_from(inst, subset, &[])
}

/// Like [`max_rainbow_independent`], but augments from `seed`, a rainbow
/// independent subset of `subset`. Elements of the seed may be exchanged
/// out along the way; the result is still of maximum size.
pub fn max_rainbow_independent_from(
    inst: &ColouredInstance,
    subset: &[Elem],
    seed: &[Elem],
) -> Result<Vec<Elem>> {
    inst.check(subset)?;
    let mut ground = sorted(subset);
    ground.dedup();
    if !inst.is_rainbow_independent(seed) || seed.iter().any(|e| ground.binary_search(e).is_err()) {
        return Err(Error::Contract("seed must be a rainbow independent subset".into()));
    }
    let mut local = vec![usize::MAX; inst.ground_len()];
    for (i, e) in ground.iter().enumerate() {
        local[e.idx()] = i;
    }
    let mut inside = vec![false; ground.len()];
    for e in seed {
        inside[local[e.idx()]] = true;
    }
    while augment(inst, &ground, &local, &mut inside) {}
    Ok((0..ground.len()).filter(|&i| inside[i]).map(|i| ground[i]).collect())
}

/// One shortest augmenting path. Sources can be added without breaking
/// independence, sinks without repeating a colour; y ∈ I → z ∉ I when
/// I − y + z is independent, z → y when y carries z's colour.
fn augment(inst: &ColouredInstance, ground: &[Elem], local: &[usize], inside: &mut [bool]) -> bool {
    let current: Vec<Elem> = (0..ground.len()).filter(|&i| inside[i]).map(|i| ground[i]).collect();
    let tester = inst.span_tester(&current);
    let mut holder = vec![None; inst.n()];
    for &e in &current {
        holder[inst.colour(e)] = Some(local[e.idx()]);
    }
    let n = ground.len();
    // y ∈ I → z ∉ I arcs, by inverting circuits
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for z in 0..n {
        if inside[z] {
            continue;
        }
        match tester.circuit(ground[z]) {
            None => {
                seen[z] = true;
                queue.push_back(z);
            }
            Some(c) => {
                for y in c {
                    out_of[local[y.idx()]].push(z);
                }
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        if inside[v] {
            for &z in &out_of[v] {
                if !seen[z] {
                    seen[z] = true;
                    parent[z] = v;
                    queue.push_back(z);
                }
            }
            continue;
        }
        match holder[inst.colour(ground[v])] {
            None => {
                let mut cur = v;
                loop {
                    inside[cur] = !inside[cur];
                    if parent[cur] == usize::MAX {
                        break;
                    }
                    cur = parent[cur];
                }
                return true;
            }
            Some(y) if !seen[y] => {
                seen[y] = true;
                parent[y] = v;
                queue.push_back(y);
            }
            Some(_) => {}
        }
    }
    false
}
