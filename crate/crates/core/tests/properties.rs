use proptest::prelude::*;

use rota_core::cover::{cover, CoverConfig};
use rota_core::matroid::{closure, rank};
use rota_core::oracle::{bf_deadlock, bf_union_rank, BruteForceBudget};
use rota_core::pack::{pack, PackConfig, ReservoirConfig};
use rota_core::partition::{deadlock, decompose, union_rank};
use rota_core::solution::{verify, Mode};
use rota_core::{format, generate, ColouredInstance, Elem};

fn instance(n: usize, small_field: bool, graphic: bool, seed: u64) -> ColouredInstance {
    if graphic {
        generate::graphic(n, n + 1, seed).unwrap()
    } else {
        generate::linear(n, if small_field { 2 } else { 5 }, seed).unwrap()
    }
}

fn pick(inst: &ColouredInstance, mask: u32) -> Vec<Elem> {
    inst.ground().filter(|e| mask >> (e.idx() % 32) & 1 == 1).take(12).collect()
}

fn ids(inst: &ColouredInstance, sets: &[Vec<Elem>]) -> Vec<Vec<u64>> {
    sets.iter().map(|s| inst.ids_of(s)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(n in 1usize..6, graphic: bool, seed: u64) {
        let inst = instance(n, false, graphic, seed);
        let text = format::serialize(&inst);
        let back = format::parse(&text).unwrap();
        prop_assert_eq!(format::serialize(&back), text);
        prop_assert_eq!(format::digest(&back), format::digest(&inst));
    }

    #[test]
    fn rank_is_submodular(n in 2usize..5, small: bool, graphic: bool, seed: u64, a: u32, b: u32) {
        let inst = instance(n, small, graphic, seed);
        let m = inst.matroid();
        let (a, b) = (pick(&inst, a), pick(&inst, b));
        let mut join = a.clone();
        join.extend(b.iter().copied().filter(|e| !a.contains(e)));
        let meet: Vec<Elem> = a.iter().copied().filter(|e| b.contains(e)).collect();
        prop_assert!(rank(m, &a).unwrap() + rank(m, &b).unwrap() >= rank(m, &join).unwrap() + rank(m, &meet).unwrap());
        let cl = closure(m, &a).unwrap();
        prop_assert_eq!(rank(m, &cl).unwrap(), rank(m, &a).unwrap());
    }

    #[test]
    fn deadlock_matches_enumeration(n in 2usize..5, small: bool, graphic: bool, seed: u64, mask: u32, k in 1usize..4) {
        let inst = instance(n, small, graphic, seed);
        let u = pick(&inst, mask);
        let mut fast = deadlock(inst.matroid(), &u, k).unwrap().deadlock;
        let mut slow = bf_deadlock(inst.matroid(), &u, k, &BruteForceBudget::default()).unwrap();
        fast.sort();
        slow.sort();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn union_rank_matches_min_max(n in 2usize..5, small: bool, seed: u64, mask: u32, k in 1usize..4) {
        let inst = instance(n, small, false, seed);
        let u = pick(&inst, mask);
        let fast = union_rank(inst.matroid(), &u, k).unwrap();
        prop_assert_eq!(fast, bf_union_rank(inst.matroid(), &u, k, &BruteForceBudget::default()).unwrap());
        let res = decompose(inst.matroid(), &u, k).unwrap();
        let covered: usize = res.parts.iter().map(Vec::len).sum();
        prop_assert_eq!(covered, fast);
        prop_assert_eq!(res.certificate.is_none(), fast == u.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pack_output_verifies(n in 2usize..8, graphic: bool, seed: u64) {
        let inst = instance(n, false, graphic, seed);
        let sol = pack(&inst, &PackConfig::new(0.25).unwrap(), &ReservoirConfig::new(0.3, 0.05, seed).unwrap()).unwrap();
        let rep = verify(&inst, Mode::Pack, &ids(&inst, &sol.bases), Some(sol.bases_found));
        prop_assert!(rep.ok, "{:?}", rep.errors);
        prop_assert!(sol.bases_found >= n.div_ceil(2));
    }

    #[test]
    fn cover_output_verifies(n in 2usize..8, graphic: bool, seed: u64) {
        let inst = instance(n, false, graphic, seed);
        let sol = cover(&inst, &CoverConfig::new(0.3).unwrap()).unwrap();
        let rep = verify(&inst, Mode::Cover, &ids(&inst, &sol.bases), Some(sol.count));
        prop_assert!(rep.ok, "{:?}", rep.errors);
        prop_assert!(sol.count <= 2 * n - 2);
    }
}
