//! Vector matroids over GF(p).

use super::{Elem, Matroid, SpanTester};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMatroid {
    p: u32,
    dim: usize,
    vectors: Vec<Vec<u32>>,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl LinearMatroid {
    /// Entries are reduced mod `p`.
    pub fn new(p: u32, dim: usize, vectors: Vec<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Argument(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::Argument(format!("prime {p} too large")));
        }
        let mut vectors = vectors;
        for (i, v) in vectors.iter_mut().enumerate() {
            if v.len() != dim {
                return Err(Error::Validation(format!(
                    "vector {i} has length {} instead of {dim}",
                    v.len()
                )));
            }
            for a in v.iter_mut() {
                *a %= p;
            }
        }
        Ok(LinearMatroid { p, dim, vectors })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, e: Elem) -> &[u32] {
        &self.vectors[e.idx()]
    }

    pub fn select(&self, picks: &[usize]) -> LinearMatroid {
        LinearMatroid {
            p: self.p,
            dim: self.dim,
            vectors: picks.iter().map(|&i| self.vectors[i].clone()).collect(),
        }
    }

    fn echelon(&self, base: &[Elem], track: bool) -> Echelon {
        let mut ech = Echelon::new(self.p as u64, self.dim, if track { base.len() } else { 0 });
        for (pos, &e) in base.iter().enumerate() {
            ech.push(&self.vectors[e.idx()], pos);
        }
        ech
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Incremental row echelon form. Each stored row is kept with a pivot entry
/// of 1 and, optionally, its expression in terms of the pushed vectors.
struct Echelon {
    p: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<u64>>,
    width: usize,
    dim: usize,
}

impl Echelon {
    fn new(p: u64, dim: usize, width: usize) -> Self {
        Echelon { p, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new(), width, dim }
    }

    /// Reduces `v` against the stored rows; `t` accumulates the multiples of
    /// each pushed vector that were subtracted.
    fn reduce(&self, v: &mut [u64], mut t: Option<&mut Vec<u64>>) {
        let p = self.p;
        for (k, row) in self.rows.iter().enumerate() {
            let f = v[self.pivots[k]];
            if f == 0 {
                continue;
            }
            for (a, &b) in v.iter_mut().zip(row) {
                if b != 0 {
                    *a = (*a + p - f * b % p) % p;
                }
            }
            if let Some(t) = t.as_deref_mut() {
                for (a, &b) in t.iter_mut().zip(&self.combos[k]) {
                    *a = (*a + f * b) % p;
                }
            }
        }
    }

    fn push(&mut self, v: &[u32], pos: usize) -> bool {
        let mut r: Vec<u64> = v.iter().map(|&a| a as u64).collect();
        let track = self.width > 0;
        let mut t = vec![0u64; self.width];
        self.reduce(&mut r, track.then_some(&mut t));
        let Some(piv) = r.iter().position(|&a| a != 0) else {
            return false;
        };
        let inv = pow_mod(r[piv], self.p - 2, self.p);
        for a in r.iter_mut() {
            *a = *a * inv % self.p;
        }
        if track {
            // row = (v - sum t_j v_j) / r[piv]
            let mut c: Vec<u64> = t.iter().map(|&a| (self.p - a) % self.p).collect();
            c[pos] = (c[pos] + 1) % self.p;
            for a in c.iter_mut() {
                *a = *a * inv % self.p;
            }
            self.combos.push(c);
        }
        self.rows.push(r);
        self.pivots.push(piv);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn in_span(&self, v: &[u32]) -> bool {
        if self.rows.len() == self.dim {
            return true;
        }
        let mut r: Vec<u64> = v.iter().map(|&a| a as u64).collect();
        self.reduce(&mut r, None);
        r.iter().all(|&a| a == 0)
    }
}

impl Matroid for LinearMatroid {
    fn ground_len(&self) -> usize {
        self.vectors.len()
    }

    fn rank(&self, set: &[Elem]) -> usize {
        self.echelon(set, false).rank()
    }

    fn span_tester(&self, base: &[Elem]) -> Box<dyn SpanTester + '_> {
        Box::new(LinearSpan { m: self, base: base.to_vec(), ech: self.echelon(base, true) })
    }
}

struct LinearSpan<'a> {
    m: &'a LinearMatroid,
    base: Vec<Elem>,
    ech: Echelon,
}

impl SpanTester for LinearSpan<'_> {
    fn rank(&self) -> usize {
        self.ech.rank()
    }

    fn spans(&self, e: Elem) -> bool {
        self.ech.in_span(self.m.vector(e))
    }

    fn circuit(&self, e: Elem) -> Option<Vec<Elem>> {
        if self.base.contains(&e) {
            return Some(vec![e]);
        }
        let mut r: Vec<u64> = self.m.vector(e).iter().map(|&a| a as u64).collect();
        let mut t = vec![0u64; self.base.len()];
        self.ech.reduce(&mut r, Some(&mut t));
        if r.iter().any(|&a| a != 0) {
            return None;
        }
        Some(
            self.base
                .iter()
                .zip(&t)
                .filter(|(_, &c)| c != 0)
                .map(|(&x, _)| x)
                .collect(),
        )
    }
}
