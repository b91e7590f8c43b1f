//! Maximum bipartite matching (Hopcroft–Karp).

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Maximum matching of a bipartite graph given as adjacency lists from the
/// left side (`adj[l]` lists right vertices in `0..right`). Returns the
/// partner of every left vertex.
pub fn max_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut match_l = vec![NIL; left];
    let mut match_r = vec![NIL; right];
    let mut dist = vec![0usize; left];
    loop {
        // layered BFS from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..left {
            if match_l[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let m = match_r[r];
                if m == NIL {
                    found = true;
                } else if dist[m] == usize::MAX {
                    dist[m] = dist[l] + 1;
                    queue.push_back(m);
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; left];
        for l in 0..left {
            if match_l[l] == NIL {
                augment(l, adj, &mut match_l, &mut match_r, &mut dist, &mut it);
            }
        }
    }
    match_l.into_iter().map(|r| (r != NIL).then_some(r)).collect()
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    while it[l] < adj[l].len() {
        let r = adj[l][it[l]];
        it[l] += 1;
        let m = match_r[r];
        if m == NIL || (dist[m] == dist[l] + 1 && augment(m, adj, match_l, match_r, dist, it)) {
            match_l[l] = r;
            match_r[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}
