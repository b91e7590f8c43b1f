//! Cycle matroids of multigraphs.

use std::collections::VecDeque;

use super::{Elem, Matroid, SpanTester};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphicMatroid {
    vertices: usize,
    edges: Vec<(u32, u32)>,
}

/// Union-find with union by size and path halving.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let g = self.parent[self.parent[x] as usize];
            self.parent[x] = g;
            x = g as usize;
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
        true
    }
}

impl GraphicMatroid {
    pub fn new(vertices: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        if let Some((i, &(u, v))) = edges
            .iter()
            .enumerate()
            .find(|(_, &(u, v))| u as usize >= vertices || v as usize >= vertices)
        {
            return Err(Error::Validation(format!(
                "edge {i} = {u}-{v} leaves the vertex range 0..{vertices}"
            )));
        }
        Ok(GraphicMatroid { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edge(&self, e: Elem) -> (u32, u32) {
        self.edges[e.idx()]
    }

    pub fn select(&self, picks: &[usize]) -> GraphicMatroid {
        GraphicMatroid {
            vertices: self.vertices,
            edges: picks.iter().map(|&i| self.edges[i]).collect(),
        }
    }
}

impl Matroid for GraphicMatroid {
    fn ground_len(&self) -> usize {
        self.edges.len()
    }

    fn rank(&self, set: &[Elem]) -> usize {
        let mut ds = DisjointSets::new(self.vertices);
        set.iter()
            .filter(|e| {
                let (u, v) = self.edges[e.idx()];
                ds.union(u as usize, v as usize)
            })
            .count()
    }

    fn span_tester(&self, base: &[Elem]) -> Box<dyn SpanTester + '_> {
        let mut ds = DisjointSets::new(self.vertices);
        let mut forest = Vec::new();
        for &e in base {
            let (u, v) = self.edges[e.idx()];
            if ds.union(u as usize, v as usize) {
                forest.push(e);
            }
        }
        let mut adj = vec![Vec::new(); self.vertices];
        for &e in &forest {
            let (u, v) = self.edges[e.idx()];
            adj[u as usize].push((v, e));
            adj[v as usize].push((u, e));
        }
        let comp = (0..self.vertices).map(|v| ds.find(v) as u32).collect();
        Box::new(ForestSpan { m: self, base: base.to_vec(), rank: forest.len(), comp, adj })
    }
}

struct ForestSpan<'a> {
    m: &'a GraphicMatroid,
    base: Vec<Elem>,
    rank: usize,
    comp: Vec<u32>,
    adj: Vec<Vec<(u32, Elem)>>,
}

impl ForestSpan<'_> {
    /// Edges on the forest path between `s` and `t` (same component).
    fn path(&self, s: usize, t: usize) -> Vec<Elem> {
        let mut prev: Vec<Option<(u32, Elem)>> = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &(w, e) in &self.adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    prev[w as usize] = Some((v as u32, e));
                    queue.push_back(w as usize);
                }
            }
        }
        let mut out = Vec::new();
        let mut v = t;
        while let Some((u, e)) = prev[v] {
            out.push(e);
            v = u as usize;
        }
        out
    }
}

impl SpanTester for ForestSpan<'_> {
    fn rank(&self) -> usize {
        self.rank
    }

    fn spans(&self, e: Elem) -> bool {
        let (u, v) = self.m.edges[e.idx()];
        self.comp[u as usize] == self.comp[v as usize]
    }

    fn circuit(&self, e: Elem) -> Option<Vec<Elem>> {
        if self.base.contains(&e) {
            return Some(vec![e]);
        }
        if !self.spans(e) {
            return None;
        }
        let (u, v) = self.m.edges[e.idx()];
        Some(self.path(u as usize, v as usize))
    }
}
