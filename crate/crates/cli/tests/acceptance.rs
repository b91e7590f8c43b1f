//! Acceptance gates. Prints one PASS/FAIL line per criterion and exits
//! nonzero when a criterion outside the known shortfalls fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rota_core::cover::{build_no_deadlock_family, cover, CoverConfig};
use rota_core::exchange::{
    basis_exchange_bijection, double_switch, inject_between, inject_to_basis, rainbow_augment, InjectBetween,
    SwitchCase,
};
use rota_core::matroid::{closure, rank, UniformMatroid};
use rota_core::oracle::{bf_deadlock, bf_is_overcrowded, bf_min_cover, bf_rainbow_decomposition, BruteForceBudget};
use rota_core::pack::{check_reservoir, pack, sample_reservoir, PackConfig, ReservoirConfig};
use rota_core::partition::{decompose, deadlock, is_overcrowded};
use rota_core::rainbow::{good_edges, switch_in_element, BipartiteGraph, GoodEdgeParams, RainbowFamily};
use rota_core::solution::{verify, Mode};
use rota_core::{generate, AnyMatroid, ColouredInstance, Elem};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn set(v: &[Elem]) -> BTreeSet<Elem> {
    v.iter().copied().collect()
}

fn sorted(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort();
    v.dedup();
    v
}

/// Small dependent-rich instances: GF(2)/GF(3) vectors or multigraph trees.
fn small_instance(rng: &mut ChaCha8Rng) -> ColouredInstance {
    let n = rng.gen_range(2..=4);
    let seed = rng.gen();
    if rng.gen_bool(0.3) {
        generate::graphic(n, n + 1, seed).unwrap()
    } else {
        generate::linear(n, *[2, 3].choose(rng).unwrap(), seed).unwrap()
    }
}

fn random_subset(rng: &mut ChaCha8Rng, inst: &ColouredInstance, max: usize) -> Vec<Elem> {
    let mut g: Vec<Elem> = inst.ground().collect();
    g.shuffle(rng);
    let size = rng.gen_range(0..=max.min(g.len()));
    sorted(g[..size].to_vec())
}

fn random_rainbow_independent(rng: &mut ChaCha8Rng, inst: &ColouredInstance) -> Vec<Elem> {
    let mut g: Vec<Elem> = inst.ground().collect();
    g.shuffle(rng);
    let target = rng.gen_range(0..=inst.n());
    let mut s = Vec::new();
    for e in g {
        if s.len() == target {
            break;
        }
        s.push(e);
        if !inst.is_rainbow_independent(&s) {
            s.pop();
        }
    }
    sorted(s)
}

fn random_independent(rng: &mut ChaCha8Rng, inst: &ColouredInstance, lo: usize) -> Vec<Elem> {
    let mut g: Vec<Elem> = inst.ground().collect();
    g.shuffle(rng);
    let target = rng.gen_range(lo..=inst.n());
    let mut s = Vec::new();
    for e in g {
        if s.len() == target {
            break;
        }
        s.push(e);
        if !inst.is_independent(&s) {
            s.pop();
        }
    }
    sorted(s)
}

fn swap(t: &[Elem], out: &[Elem], inn: &[Elem]) -> Vec<Elem> {
    let mut v: Vec<Elem> = t.iter().copied().filter(|x| !out.contains(x)).collect();
    v.extend_from_slice(inn);
    sorted(v)
}

fn same_span(inst: &ColouredInstance, a: &[Elem], b: &[Elem]) -> bool {
    let mut u = a.to_vec();
    u.extend_from_slice(b);
    let r = inst.rank(&u);
    inst.rank(a) == r && inst.rank(b) == r
}

fn budget() -> BruteForceBudget {
    BruteForceBudget { max_ground: 16, ..Default::default() }
}

fn rota(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rota")).args(args).output().expect("spawn rota");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn rank_at_most_four(dir: &Path) -> Outcome {
    let started = Instant::now();
    for seed in 0..50u64 {
        let n = 2 + (seed % 3) as usize;
        let inst = dir.join(format!("r4_{seed}.txt"));
        let sol = dir.join(format!("r4_{seed}.json"));
        let (inst, sol) = (inst.to_str().unwrap(), sol.to_str().unwrap());
        let seed_s = seed.to_string();
        let n_s = n.to_string();
        let (code, _) = rota(&["generate", "--kind", "linear", "-n", &n_s, "-p", "5", "--seed", &seed_s, "-o", inst]);
        ensure(code == 0, || format!("generate failed for seed {seed}"))?;
        let (code, _) = rota(&["pack", "-i", inst, "--exact-fallback", "--seed", &seed_s, "--json", sol]);
        ensure(code == 0, || format!("pack exited {code} on seed {seed}"))?;
        let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(sol).unwrap()).unwrap();
        let found = report["bases_found"].as_u64().unwrap_or(0) as usize;
        ensure(found == n, || format!("seed {seed}: {found} bases for n = {n}"))?;
        let (code, _) = rota(&["verify", "-i", inst, "-s", sol]);
        ensure(code == 0, || format!("verify rejected seed {seed}"))?;
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("50 instances, n bases each, {secs:.1} s"))
}

fn covering_bound() -> Outcome {
    let mut cases = Vec::new();
    for seed in 0..4u64 {
        for n in 2..=10 {
            cases.push(generate::linear(n, if seed % 2 == 0 { 5 } else { 7 }, seed).unwrap());
        }
        for n in 2..=8 {
            cases.push(generate::graphic(n, n + 1, seed).unwrap());
        }
    }
    for seed in 10..40u64 {
        let n = 2 + (seed % 2) as usize;
        cases.push(generate::linear(n, *[2, 3, 5].choose(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap(), seed).unwrap());
    }
    let (mut exact_checked, mut worst) = (0, 0.0f64);
    for (i, inst) in cases.iter().enumerate() {
        let n = inst.n();
        let sol = cover(inst, &CoverConfig::new(0.3).unwrap()).map_err(|e| format!("case {i}: {e}"))?;
        ensure(sol.count <= 2 * n - 2, || format!("case {i}: {} bases for n = {n}", sol.count))?;
        let ids: Vec<Vec<u64>> = sol.bases.iter().map(|b| inst.ids_of(b)).collect();
        let rep = verify(inst, Mode::Cover, &ids, Some(sol.count));
        ensure(rep.ok, || format!("case {i}: {:?}", rep.errors))?;
        if n <= 3 {
            let best = bf_min_cover(inst, &budget()).map_err(|e| e.to_string())?;
            ensure(best.count == sol.count, || format!("case {i}: {} bases, optimum {}", sol.count, best.count))?;
            exact_checked += 1;
        }
        worst = worst.max(sol.count as f64 / n as f64);
    }
    Ok(format!("{} instances, max count/n {worst:.2}, {exact_checked} matched the exact optimum", cases.len()))
}

fn packing_floor() -> Outcome {
    let mut ratios = Vec::new();
    for seed in 0..30u64 {
        let n = 8 + (seed % 9) as usize;
        let inst = generate::linear(n, 7, seed).unwrap();
        let sol = pack(&inst, &PackConfig::new(0.25).unwrap(), &ReservoirConfig::new(0.3, 0.05, seed).unwrap())
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let ids: Vec<Vec<u64>> = sol.bases.iter().map(|b| inst.ids_of(b)).collect();
        let rep = verify(&inst, Mode::Pack, &ids, Some(sol.bases_found));
        ensure(rep.ok, || format!("seed {seed}: {:?}", rep.errors))?;
        ensure(sol.bases_found >= n.div_ceil(2), || format!("seed {seed}: {} bases for n = {n}", sol.bases_found))?;
        ratios.push(sol.bases_found as f64 / n as f64);
    }
    ratios.sort_by(f64::total_cmp);
    let median = (ratios[14] + ratios[15]) / 2.0;
    Ok(format!("30 instances, min count/n {:.2}, median {median:.2} (target 0.75)", ratios[0]))
}

fn deadlock_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut nonempty = 0;
    for case in 0..200 {
        let inst = small_instance(&mut rng);
        let u = random_subset(&mut rng, &inst, 12);
        let k = 1 + case % 3;
        let fast = sorted(deadlock(inst.matroid(), &u, k).map_err(|e| e.to_string())?.deadlock);
        let slow = sorted(bf_deadlock(inst.matroid(), &u, k, &budget()).map_err(|e| e.to_string())?);
        ensure(fast == slow, || format!("case {case} (k = {k}): {fast:?} vs {slow:?}"))?;
        if k == 1 {
            ensure(fast == u, || format!("case {case}: D_1(U) ≠ U"))?;
        } else if !fast.is_empty() {
            nonempty += 1;
        }
    }
    Ok(format!("200 cases, {nonempty} nonempty deadlocks at k ≥ 2"))
}

fn partition_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut splits = 0;
    for case in 0..200 {
        let inst = small_instance(&mut rng);
        let u = random_subset(&mut rng, &inst, 12);
        let k = 1 + case % 3;
        let dense = (1usize..1 << u.len()).any(|mask| {
            let s: Vec<Elem> = (0..u.len()).filter(|i| mask >> i & 1 == 1).map(|i| u[i]).collect();
            s.len() > k * inst.rank(&s)
        });
        let res = decompose(inst.matroid(), &u, k).map_err(|e| e.to_string())?;
        ensure(res.certificate.is_none() == !dense, || format!("case {case}: success disagrees with enumeration"))?;
        match &res.certificate {
            Some(s) => ensure(s.len() > k * inst.rank(s), || format!("case {case}: certificate is not dense"))?,
            None => {
                splits += 1;
                ensure(res.parts.len() <= k, || format!("case {case}: {} parts", res.parts.len()))?;
                ensure(res.parts.iter().all(|p| inst.is_independent(p)), || format!("case {case}: dependent part"))?;
                let mut all: Vec<Elem> = res.parts.concat();
                all.sort();
                ensure(all == u, || format!("case {case}: parts do not reconstruct U"))?;
            }
        }
    }
    Ok(format!("200 cases, {splits} split, {} certified dense", 200 - splits))
}

fn exchange_instance(rng: &mut ChaCha8Rng) -> ColouredInstance {
    let n = rng.gen_range(2..=6);
    generate::linear(n, *[2, 3, 5].choose(rng).unwrap(), rng.gen()).unwrap()
}

fn exchange_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..500 {
        let inst = exchange_instance(&mut rng);
        let s = random_rainbow_independent(&mut rng, &inst);
        let t = random_rainbow_independent(&mut rng, &inst);
        let out = rainbow_augment(&inst, &s, &t).map_err(|e| format!("augment {case}: {e}"))?;
        let (so, ss, st) = (set(&out), set(&s), set(&t));
        ensure(inst.is_rainbow_independent(&out), || format!("augment {case}: not rainbow independent"))?;
        ensure(ss.is_subset(&so) && so.is_subset(&ss.union(&st).copied().collect()), || {
            format!("augment {case}: S ⊆ S* ⊆ S ∪ T fails")
        })?;
        ensure(st.difference(&so).count() <= 2 * ss.difference(&st).count(), || format!("augment {case}: bound"))?;
    }
    for case in 0..500 {
        let inst = exchange_instance(&mut rng);
        let b = inst.class(rng.gen_range(0..inst.n())).to_vec();
        let b2 = random_independent(&mut rng, &inst, inst.n());
        let psi = basis_exchange_bijection(&inst, &b, &b2).map_err(|e| format!("bijection {case}: {e}"))?;
        ensure(psi.len() == b.len() && set(&psi.image()) == set(&b2), || format!("bijection {case}: not onto B′"))?;
        for &x in &b {
            let y = psi.get(x).ok_or(format!("bijection {case}: ψ undefined"))?;
            ensure(inst.is_independent(&swap(&b2, &[y], &[x])), || format!("bijection {case}: B′ − ψ(x) + x"))?;
        }
    }
    for case in 0..500 {
        let inst = exchange_instance(&mut rng);
        let s = random_independent(&mut rng, &inst, 0);
        let b = random_independent(&mut rng, &inst, inst.n());
        let phi = inject_to_basis(&inst, &s, &b).map_err(|e| format!("inject_to_basis {case}: {e}"))?;
        let img = phi.image();
        ensure(phi.len() == s.len() && set(&img).len() == s.len(), || format!("inject_to_basis {case}: not injective"))?;
        for &x in &s {
            let y = phi.get(x).ok_or(format!("inject_to_basis {case}: φ undefined"))?;
            ensure(b.contains(&y) && inst.is_independent(&swap(&s, &[x], &[y])), || {
                format!("inject_to_basis {case}: S − x + φ(x)")
            })?;
        }
        for &y in b.iter().filter(|y| !img.contains(y)) {
            ensure(inst.is_independent(&swap(&s, &[], &[y])), || format!("inject_to_basis {case}: S + b"))?;
        }
    }
    for case in 0..500 {
        let inst = exchange_instance(&mut rng);
        let t = random_independent(&mut rng, &inst, 0);
        // half the time draw S inside spn(T) so the injection case is exercised
        let s = if rng.gen_bool(0.5) {
            let span = closure(inst.matroid(), &t).unwrap();
            let mut pool = span.clone();
            pool.shuffle(&mut rng);
            let mut s = Vec::new();
            for e in pool {
                s.push(e);
                if !inst.is_independent(&s) || rng.gen_bool(0.3) {
                    s.pop();
                }
            }
            sorted(s)
        } else {
            random_independent(&mut rng, &inst, 0)
        };
        let addable: Vec<Elem> =
            s.iter().copied().filter(|&x| !t.contains(&x) && inst.is_independent(&swap(&t, &[], &[x]))).collect();
        match inject_between(&inst, &s, &t).map_err(|e| format!("inject_between {case}: {e}"))? {
            InjectBetween::Addable(x) => ensure(addable.contains(&x), || format!("inject_between {case}: T + x"))?,
            InjectBetween::Injection(phi) => {
                ensure(addable.is_empty(), || format!("inject_between {case}: case (a) was available"))?;
                ensure(phi.len() == s.len() && phi.is_injective(), || format!("inject_between {case}: not injective"))?;
                for &x in &s {
                    let y = phi.get(x).ok_or(format!("inject_between {case}: φ undefined"))?;
                    let sw = swap(&t, &[y], &[x]);
                    ensure(t.contains(&y) && inst.is_independent(&sw) && same_span(&inst, &sw, &t), || {
                        format!("inject_between {case}: T − φ(x) + x")
                    })?;
                }
            }
        }
    }
    let mut done = 0;
    while done < 500 {
        let inst = exchange_instance(&mut rng);
        let t = random_independent(&mut rng, &inst, 1);
        let tester = inst.span_tester(&t);
        let outside: Vec<Elem> = inst.ground().filter(|e| !t.contains(e) && tester.spans(*e)).collect();
        if outside.len() < 2 {
            continue;
        }
        let picks: Vec<Elem> = outside.choose_multiple(&mut rng, 2).copied().collect();
        let (x, q) = (picks[0], picks[1]);
        let x2 = *tester.circuit(x).unwrap().choose(&mut rng).unwrap();
        let q2 = *tester.circuit(q).unwrap().choose(&mut rng).unwrap();
        let ds = double_switch(&inst, &t, x, x2, q, q2).map_err(|e| format!("double_switch {done}: {e}"))?;
        let expect = match ds.case {
            SwitchCase::A => swap(&t, &[q2], &[x]),
            SwitchCase::B => {
                ensure(x2 != q2, || format!("double_switch {done}: case B with x′ = q′"))?;
                swap(&t, &[x2, q2], &[x, q])
            }
        };
        ensure(sorted(ds.set.clone()) == expect, || format!("double_switch {done}: wrong set"))?;
        ensure(expect.len() == t.len() && inst.is_independent(&expect) && same_span(&inst, &expect, &t), || {
            format!("double_switch {done}: set fails the span contract")
        })?;
        done += 1;
    }
    Ok("500 cases for each of five operations".into())
}

fn random_family(rng: &mut ChaCha8Rng, inst: &ColouredInstance) -> RainbowFamily {
    let m = rng.gen_range(1..=3 * inst.n() + 4);
    let mut members = vec![Vec::new(); m];
    let mut g: Vec<Elem> = inst.ground().collect();
    g.shuffle(rng);
    // saturated families leave no member able to take an uncovered element,
    // which forces the switch through deeper reductions
    let saturate = rng.gen_bool(0.5);
    let fill = rng.gen_range(0.5..1.0);
    for e in g {
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);
        let tries = if saturate { m } else { usize::from(rng.gen_bool(fill)) };
        for &j in order.iter().take(tries) {
            members[j].push(e);
            if inst.is_rainbow_independent(&members[j]) {
                break;
            }
            members[j].pop();
        }
    }
    RainbowFamily::new(inst, members.into_iter().map(sorted).collect()).unwrap()
}

/// A family where uncovered `e` only fits after one ℓ-reduction: member 0
/// holds x of e's colour, and four more members span e but not x, so x is
/// deleted by the reduction and e can replace it.
fn reduction_case(rng: &mut ChaCha8Rng) -> Option<(ColouredInstance, RainbowFamily, Elem)> {
    let n = rng.gen_range(4..=6);
    let inst = generate::linear(n, *[2, 3].choose(rng).unwrap(), rng.gen()).unwrap();
    let c = rng.gen_range(0..n);
    let pair: Vec<Elem> = inst.class(c).choose_multiple(rng, 2).copied().collect();
    let (x, e) = (pair[0], pair[1]);
    let mut members = vec![vec![x]];
    let mut used: BTreeSet<Elem> = [x, e].into();
    for _ in 0..12 {
        let mut pool: Vec<Elem> = inst.ground().filter(|f| inst.colour(*f) != c && !used.contains(f)).collect();
        pool.shuffle(rng);
        let mut t: Vec<Elem> = Vec::new();
        for f in pool {
            t.push(f);
            if !inst.is_rainbow_independent(&t) || inst.span_tester(&t).spans(x) {
                t.pop();
                continue;
            }
            if inst.span_tester(&t).spans(e) {
                break;
            }
        }
        if !t.is_empty() && inst.span_tester(&t).spans(e) {
            used.extend(t.iter().copied());
            members.push(sorted(t));
            if members.len() == 5 {
                let family = RainbowFamily::new(&inst, members).unwrap();
                return Some((inst, family, e));
            }
        }
    }
    None
}

fn switching_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut applied, mut none, mut deep, mut worst) = (0, 0, 0, 0);
    let mut case = 0;
    while applied < 500 {
        case += 1;
        ensure(case < 20_000, || format!("only {applied} switches applied"))?;
        let (inst, family, e, (ell, r)) = if case % 2 == 0 {
            let Some((inst, family, e)) = reduction_case(&mut rng) else { continue };
            (inst, family, e, (4, 1))
        } else {
            let inst = exchange_instance(&mut rng);
            let family = random_family(&mut rng, &inst);
            let Some(&e) = family.uncovered().choose(&mut rng) else { continue };
            (inst, family, e, [(4, 1), (10, 2), (2, 0), (28, 3)][case % 8 / 2])
        };
        match switch_in_element(&inst, &family, e, ell, r).map_err(|err| format!("case {case}: {err}"))? {
            None => none += 1,
            Some((after, _)) => {
                applied += 1;
                ensure(after.len() == family.len(), || format!("case {case}: member count changed"))?;
                after.validate(&inst).map_err(|err| format!("case {case}: {err}"))?;
                let mut want = family.covered();
                want.push(e);
                ensure(sorted(after.covered()) == sorted(want), || format!("case {case}: E(𝒮) ≠ E(𝒯) + e"))?;
                let churn: usize = (0..family.len())
                    .map(|j| after.member(j).iter().filter(|x| !family.member(j).contains(x)).count())
                    .sum();
                ensure(churn <= 3usize.pow(r as u32), || format!("case {case}: churn {churn} > 3^{r}"))?;
                worst = worst.max(churn);
                deep += usize::from(churn > 1);
            }
        }
    }
    Ok(format!("500 switches applied ({deep} through a reduction, {none} draws without a host), max churn {worst}"))
}

fn good_edges_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let r = |a, b| Rational64::new(a, b);
    for case in 0..100 {
        let alpha = *[r(1, 2), r(1, 1), r(2, 1)].choose(&mut rng).unwrap();
        let beta = alpha * *[r(3, 2), r(2, 1), r(3, 1)].choose(&mut rng).unwrap();
        let delta = *[r(1, 4), r(1, 3), r(1, 2), r(1, 1)].choose(&mut rng).unwrap();
        let right = rng.gen_range(2..=12usize);
        let max_left = (alpha * Rational64::from_integer(right as i64)).floor().to_integer() as usize;
        let left = rng.gen_range(1..=max_left.max(1));
        let min_deg = (delta * Rational64::from_integer(left as i64)).ceil().to_integer() as usize;
        let xs: Vec<usize> = (0..left).collect();
        let mut edges = Vec::new();
        for y in 0..right {
            let d = rng.gen_range(min_deg..=left);
            edges.extend(xs.choose_multiple(&mut rng, d).map(|&x| (x, y)));
        }
        let g = BipartiteGraph::new(left, right, edges.clone()).unwrap();
        let params = GoodEdgeParams::new(alpha, beta, delta).unwrap();
        let good = good_edges(&g, &params).map_err(|e| format!("case {case}: {e}"))?;
        let mut dx = vec![0i64; left];
        let mut dy = vec![0i64; right];
        for &(x, y) in &edges {
            dx[x] += 1;
            dy[y] += 1;
        }
        let expect: BTreeSet<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(x, y)| Rational64::from_integer(dy[y]) <= beta * Rational64::from_integer(dx[x]))
            .collect();
        ensure(good.iter().copied().collect::<BTreeSet<_>>() == expect, || format!("case {case}: wrong edge set"))?;
        let bound = (delta * (beta - alpha) / beta * Rational64::from_integer((left * right) as i64)).ceil();
        ensure(good.len() as i64 >= bound.to_integer(), || format!("case {case}: {} < {bound}", good.len()))?;
    }
    Ok("100 graphs".into())
}

fn rainbow_decomposition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut found, mut tries) = (0, 0);
    let mut sizes = 0;
    while found < 100 {
        tries += 1;
        ensure(tries < 200_000, || format!("only {found} preconditioned sets found"))?;
        let inst = small_instance(&mut rng);
        let k = rng.gen_range(2..=3);
        let u = random_subset(&mut rng, &inst, 10);
        let mut mult = vec![0; inst.n()];
        u.iter().for_each(|&e| mult[inst.colour(e)] += 1);
        if u.len() < 4 || mult.iter().any(|&c| c > k) {
            continue;
        }
        if !bf_deadlock(inst.matroid(), &u, k, &budget()).map_err(|e| e.to_string())?.is_empty() {
            continue;
        }
        let parts = bf_rainbow_decomposition(&inst, &u, 2 * k, &budget()).map_err(|e| e.to_string())?;
        let parts = parts.ok_or_else(|| format!("set {found}: no split into {} rainbow independent sets", 2 * k))?;
        ensure(parts.iter().all(|p| inst.is_rainbow_independent(p)) && sorted(parts.concat()) == u, || {
            format!("set {found}: invalid witness")
        })?;
        sizes += u.len();
        found += 1;
    }
    Ok(format!("100 sets, mean size {:.1}", sizes as f64 / 100.0))
}

fn reservoir_diamond() -> Outcome {
    let n = 200;
    let colours: Vec<usize> = (0..n).flat_map(|c| std::iter::repeat_n(c, n)).collect();
    let ids: Vec<u64> = (1..=(n * n) as u64).collect();
    let inst = ColouredInstance::new(AnyMatroid::Uniform(UniformMatroid::new(n, n * n)), ids, colours).unwrap();
    let (mut ok, mut worst) = (0, 1.0f64);
    for seed in 0..20 {
        let rcfg = ReservoirConfig::new(0.3, 0.05, seed).unwrap();
        let r = sample_reservoir(&inst, &rcfg).unwrap();
        let rep = check_reservoir(&inst, &r, &rcfg, 0.125, 0).unwrap();
        ok += rep.diamond_ok;
        worst = worst.min(rep.diamond_fraction);
    }
    let frac = ok as f64 / (20 * n) as f64;
    let detail = format!("{:.1}% of colours satisfy ♦ over 20 seeds (worst seed {:.1}%)", 100.0 * frac, 100.0 * worst);
    ensure(frac >= 0.95, || detail.clone())?;
    Ok(detail)
}

fn cover_contract() -> Outcome {
    let mut cases = Vec::new();
    for seed in 0..3u64 {
        for n in 2..=9 {
            cases.push(generate::linear(n, 5, seed).unwrap());
            cases.push(generate::graphic(n, n + 1, seed).unwrap());
        }
    }
    let mut rechecked = 0;
    for (i, inst) in cases.iter().enumerate() {
        let cfg = CoverConfig::new(0.3).unwrap();
        let sol = cover(inst, &cfg).map_err(|e| format!("case {i}: {e}"))?;
        let union: BTreeSet<Elem> = sol.bases.iter().flatten().copied().collect();
        ensure(union == inst.ground().collect::<BTreeSet<_>>(), || format!("case {i}: union ≠ ground"))?;
        ensure(sol.bases.iter().all(|b| inst.is_transversal_basis(b)), || format!("case {i}: non-transversal basis"))?;
        let built = build_no_deadlock_family(inst, &cfg).map_err(|e| format!("case {i}: {e}"))?;
        if built.success {
            let (k, _) = cfg.deadlock_k(inst.n());
            let u = built.family.uncovered();
            let d = deadlock(inst.matroid(), &u, k).map_err(|e| e.to_string())?;
            ensure(d.deadlock.is_empty(), || format!("case {i}: D_k(U) nonempty on recheck"))?;
            ensure(decompose(inst.matroid(), &u, k).map_err(|e| e.to_string())?.certificate.is_none(), || {
                format!("case {i}: U does not split into {k} independent sets")
            })?;
            if u.len() <= 16 {
                let bf = bf_deadlock(inst.matroid(), &u, k, &budget()).map_err(|e| e.to_string())?;
                ensure(bf.is_empty(), || format!("case {i}: exhaustive D_k(U) nonempty"))?;
            }
            rechecked += 1;
        }
    }
    Ok(format!("{} covers exact, {rechecked} successful builds re-verified", cases.len()))
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..300 {
        let inst = small_instance(&mut rng);
        let m = inst.matroid();
        let a = random_subset(&mut rng, &inst, 16);
        let b = random_subset(&mut rng, &inst, 16);
        let union: Vec<Elem> = set(&a).union(&set(&b)).copied().collect();
        let meet: Vec<Elem> = set(&a).intersection(&set(&b)).copied().collect();
        let (ra, rb) = (rank(m, &a).unwrap(), rank(m, &b).unwrap());
        ensure(ra + rb >= rank(m, &union).unwrap() + rank(m, &meet).unwrap(), || format!("submodularity {case}"))?;
    }
    for case in 0..300 {
        let inst = small_instance(&mut rng);
        let m = inst.matroid();
        let s = random_subset(&mut rng, &inst, 8);
        let extra = random_subset(&mut rng, &inst, 4);
        let t: Vec<Elem> = set(&s).union(&set(&extra)).copied().collect();
        let cs = sorted(closure(m, &s).unwrap());
        ensure(set(&s).is_subset(&set(&cs)), || format!("closure {case}: S ⊄ cl(S)"))?;
        ensure(sorted(closure(m, &cs).unwrap()) == cs, || format!("closure {case}: not idempotent"))?;
        ensure(set(&cs).is_subset(&set(&closure(m, &t).unwrap())), || format!("closure {case}: not monotone"))?;
        ensure(rank(m, &cs).unwrap() == rank(m, &s).unwrap(), || format!("closure {case}: rank changed"))?;
    }
    for case in 0..300 {
        let inst = small_instance(&mut rng);
        let m = inst.matroid();
        let u = random_subset(&mut rng, &inst, 14);
        let sub: Vec<Elem> = u.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        let k = rng.gen_range(2..=4);
        let k2 = rng.gen_range(1..k);
        let d = set(&deadlock(m, &u, k).unwrap().deadlock);
        ensure(set(&deadlock(m, &sub, k).unwrap().deadlock).is_subset(&d), || format!("monotone in U {case}"))?;
        ensure(d.is_subset(&set(&deadlock(m, &u, k2).unwrap().deadlock)), || format!("monotone in k {case}"))?;
    }
    let mut done = 0;
    while done < 300 {
        let inst = small_instance(&mut rng);
        let m = inst.matroid();
        let k = rng.gen_range(2..=3);
        let s1 = deadlock(m, &random_subset(&mut rng, &inst, 12), k).unwrap().deadlock;
        let s2 = deadlock(m, &random_subset(&mut rng, &inst, 12), k).unwrap().deadlock;
        if s1.is_empty() && s2.is_empty() {
            continue;
        }
        let u: Vec<Elem> = set(&s1).union(&set(&s2)).copied().collect();
        ensure(bf_is_overcrowded(m, &s1, k, &budget()).unwrap(), || format!("union {done}: S₁ not overcrowded"))?;
        ensure(bf_is_overcrowded(m, &s2, k, &budget()).unwrap(), || format!("union {done}: S₂ not overcrowded"))?;
        ensure(bf_is_overcrowded(m, &u, k, &budget()).unwrap(), || format!("union {done}: S₁ ∪ S₂ not overcrowded"))?;
        ensure(is_overcrowded(m, &u, k).unwrap(), || format!("union {done}: fast test disagrees"))?;
        done += 1;
    }
    let (mut done, mut grown) = (0, 0);
    while done < 300 {
        let inst = small_instance(&mut rng);
        let m = inst.matroid();
        let k = rng.gen_range(2..=4);
        let k2 = rng.gen_range(1..k);
        let u = random_subset(&mut rng, &inst, 12);
        let d2 = deadlock(m, &u, k2).unwrap().deadlock;
        let tester = inst.span_tester(&d2);
        let mut free: Vec<Elem> = inst.ground().filter(|e| !u.contains(e) && !tester.spans(*e)).collect();
        free.shuffle(&mut rng);
        free.truncate(rng.gen_range(0..=k - k2));
        if free.is_empty() && rng.gen_bool(0.8) {
            continue;
        }
        let bigger = sorted([u.clone(), free.clone()].concat());
        let before = sorted(deadlock(m, &u, k).unwrap().deadlock);
        let after = sorted(deadlock(m, &bigger, k).unwrap().deadlock);
        ensure(before == after, || format!("stability {done}: D_k changed after adding {free:?}"))?;
        grown += usize::from(!free.is_empty());
        done += 1;
    }
    Ok(format!("5 × 300 assertions ({grown} stability cases with U′ ≠ ∅)"))
}

/// Criteria whose gate cannot be met at the stated parameters. They still
/// run and print FAIL; only other failures make the target fail.
const KNOWN_SHORTFALLS: &[(usize, &str)] = &[(
    10,
    "|B_c ∩ R| ~ Bin(200, 0.3) has standard deviation 6.5, so the ±γn = ±10 window holds for about 89% of colours",
)];

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let dir_path = dir.path().to_path_buf();
    let c1 = move || rank_at_most_four(&dir_path);
    let criteria: Vec<Criterion> = vec![
        ("rank ≤ 4 packs n bases", Box::new(c1)),
        ("cover count ≤ 2n − 2", Box::new(covering_bound)),
        ("pack floor ⌈n/2⌉", Box::new(packing_floor)),
        ("deadlock oracle equivalence", Box::new(deadlock_equivalence)),
        ("partition correctness", Box::new(partition_correctness)),
        ("exchange operations", Box::new(exchange_suite)),
        ("switching churn ≤ 3^r", Box::new(switching_bound)),
        ("good-edge count", Box::new(good_edges_bound)),
        ("2k rainbow decomposition", Box::new(rainbow_decomposition)),
        ("reservoir ♦ at n = 200", Box::new(reservoir_diamond)),
        ("cover pipeline contract", Box::new(cover_contract)),
        ("matroid and deadlock properties", Box::new(property_suite)),
    ];
    let mut failed = 0;
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let res = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>().map(String::as_str))));
        let secs = started.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {:>2}. {name}: {detail} [{secs:.1} s]", i + 1),
            Err(detail) => {
                failed += 1;
                let known = KNOWN_SHORTFALLS.iter().find(|(c, _)| *c == i + 1);
                match known {
                    Some((_, why)) => println!("FAIL {:>2}. {name}: {detail} [{secs:.1} s] (known shortfall: {why})", i + 1),
                    None => {
                        unexpected += 1;
                        println!("FAIL {:>2}. {name}: {detail} [{secs:.1} s]", i + 1);
                    }
                }
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
