//! Checking emitted bases, and the trace events solvers record.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::matroid::Elem;
use crate::ColouredInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Pack,
    Cover,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub checked_bases: usize,
    pub errors: Vec<String>,
}

/// Checks bases given by element ids. Pack solutions need pairwise disjoint
/// transversal bases; cover solutions need transversal bases whose union is
/// the whole ground set. `count`, when present, must equal the number of
/// bases.
pub fn verify(inst: &ColouredInstance, mode: Mode, bases: &[Vec<u64>], count: Option<usize>) -> VerifyReport {
    let mut errors = Vec::new();
    let mut first_use: HashMap<u64, usize> = HashMap::new();
    let mut covered = vec![false; inst.ground_len()];
    for (i, ids) in bases.iter().enumerate() {
        let mut elems = Vec::with_capacity(ids.len());
        for &id in ids {
            match inst.elem(id) {
                Some(e) => elems.push(e),
                None => errors.push(format!("basis {i}: unknown element {id}")),
            }
        }
        if elems.len() != ids.len() {
            continue;
        }
        if elems.len() != inst.n() {
            errors.push(format!("basis {i}: has {} elements, expected {}", elems.len(), inst.n()));
        }
        if !inst.is_rainbow(&elems) {
            errors.push(format!("basis {i}: repeats a colour"));
        }
        if !inst.is_independent(&elems) {
            errors.push(format!("basis {i}: independence violated"));
        }
        for (&id, &e) in ids.iter().zip(&elems) {
            covered[e.idx()] = true;
            if let Some(&j) = first_use.get(&id) {
                if mode == Mode::Pack && j != i {
                    errors.push(format!("element {id} appears in bases {j} and {i}"));
                }
            } else {
                first_use.insert(id, i);
            }
        }
    }
    if mode == Mode::Cover {
        let missing: Vec<u64> =
            (0..inst.ground_len()).filter(|&i| !covered[i]).map(|i| inst.id(Elem::from(i))).collect();
        if !missing.is_empty() {
            errors.push(format!("uncovered elements {missing:?}"));
        }
    }
    if let Some(c) = count {
        if c != bases.len() {
            errors.push(format!("count field {c} but {} bases listed", bases.len()));
        }
    }
    VerifyReport { ok: errors.is_empty(), checked_bases: bases.len(), errors }
}

/// One line of a solver trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    /// A deadlock-descent step: member `member` took `added` and gave up
    /// `removed`; `tuple` is the deadlock-size tuple afterwards.
    Descent { ladder_index: usize, member: usize, added: Elem, removed: Vec<Elem>, tuple: Vec<usize> },
    /// A colour-balancing swap (or an outright absorption when `released` is
    /// `None`).
    Balance { member: usize, absorbed: Elem, released: Option<Elem>, potential: usize },
    /// One packing improvement.
    Improvement { covered: usize, chain: Vec<usize>, churn: usize, reservoir_cost: i64, method: String },
    /// A solver phase finished.
    Phase { name: String, detail: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::oracle::{bf_max_disjoint_transversal_bases, BruteForceBudget};

    #[test]
    fn pack_verification() {
        let inst = generate::linear(3, 5, 7).unwrap();
        let w = bf_max_disjoint_transversal_bases(&inst, &BruteForceBudget::default()).unwrap();
        let ids: Vec<Vec<u64>> = w.bases.iter().map(|b| inst.ids_of(b)).collect();
        assert!(verify(&inst, Mode::Pack, &ids, Some(ids.len())).ok);
        let mut dup = ids.clone();
        dup.push(ids[0].clone());
        let rep = verify(&inst, Mode::Pack, &dup, None);
        assert!(!rep.ok);
        assert!(rep.errors[0].contains(&format!("element {}", ids[0][0])));
        let rep = verify(&inst, Mode::Pack, &ids, Some(ids.len() + 1));
        assert!(!rep.ok);
    }

    #[test]
    fn cover_needs_everything() {
        let inst = generate::linear(2, 3, 1).unwrap();
        let w = bf_max_disjoint_transversal_bases(&inst, &BruteForceBudget::default()).unwrap();
        let ids: Vec<Vec<u64>> = w.bases.iter().map(|b| inst.ids_of(b)).collect();
        let rep = verify(&inst, Mode::Cover, &ids[..1], None);
        assert!(!rep.ok);
        assert!(rep.errors.iter().any(|e| e.contains("uncovered")));
    }
}
