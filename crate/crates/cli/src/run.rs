use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use rota_core::cover::{cover, CoverConfig};
use rota_core::oracle::{
    bf_deadlock, bf_max_disjoint_transversal_bases, bf_min_cover, bf_rainbow_decomposition, BruteForceBudget,
};
use rota_core::pack::{check_reservoir, pack, sample_reservoir, PackConfig, ReservoirConfig};
use rota_core::partition::deadlock;
use rota_core::solution::{verify, Mode, TraceEvent};
use rota_core::{format, generate, ColouredInstance, Elem};

use crate::{BfArgs, BfProblem, BatchArgs, Cli, Command, CoverArgs, DeadlockArgs, GenerateArgs, Kind, Output, PackArgs,
    ReservoirArgs, VerifyArgs};

pub const OK: u8 = 0;
pub const VERIFY_FAILED: u8 = 2;
pub const PARSE_ERROR: u8 = 3;
pub const PARTIAL: u8 = 4;
const FAILURE: u8 = 1;

/// What a command produced: an exit code, a JSON report, a one-line
/// summary and trace events.
struct Outcome {
    code: u8,
    report: Option<Value>,
    summary: String,
    trace: Vec<TraceEvent>,
}

impl Outcome {
    fn new(code: u8, report: Value, summary: String) -> Self {
        Outcome { code, report: Some(report), summary, trace: Vec::new() }
    }
}

pub fn dispatch(cli: &Cli) -> u8 {
    match execute(cli) {
        Ok((out, output)) => match emit(&out, output.as_ref()) {
            Ok(()) => out.code,
            Err(e) => {
                eprintln!("error: {e:#}");
                FAILURE
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let parse = e.chain().any(|c| {
        matches!(c.downcast_ref::<rota_core::Error>(), Some(rota_core::Error::Parse { .. }))
            || c.downcast_ref::<serde_json::Error>().is_some()
    });
    if parse {
        PARSE_ERROR
    } else {
        FAILURE
    }
}

fn execute(cli: &Cli) -> Result<(Outcome, Option<Output>)> {
    Ok(match &cli.command {
        Command::Generate(a) => (generate_cmd(a)?, None),
        Command::Verify(a) => (verify_cmd(a)?, Some(a.output.clone())),
        Command::Cover(a) => (cover_cmd(a)?, Some(a.output.clone())),
        Command::Pack(a) => (pack_cmd(a)?, Some(a.output.clone())),
        Command::Deadlock(a) => (deadlock_cmd(a)?, Some(a.output.clone())),
        Command::Reservoir(a) => (reservoir_cmd(a)?, Some(a.output.clone())),
        Command::Bf(a) => (bf_cmd(a)?, Some(a.output.clone())),
        Command::Batch(a) => (batch_cmd(a, cli.audit)?, None),
    })
}

fn emit(out: &Outcome, output: Option<&Output>) -> Result<()> {
    let json_target = output.and_then(|o| o.json.as_deref());
    if let (Some(target), Some(report)) = (json_target, &out.report) {
        let text = serde_json::to_string_pretty(report)?;
        if target == "-" {
            println!("{text}");
        } else {
            fs::write(target, text + "\n").with_context(|| format!("writing {target}"))?;
        }
    }
    if json_target != Some("-") && !out.summary.is_empty() {
        println!("{}", out.summary);
    }
    if let Some(path) = output.and_then(|o| o.trace.as_ref()) {
        let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        for ev in &out.trace {
            writeln!(f, "{}", serde_json::to_string(ev)?)?;
        }
    }
    Ok(())
}

fn load(path: &Path) -> Result<ColouredInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let inst = format::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(inst)
}

fn ids(inst: &ColouredInstance, sets: &[Vec<Elem>]) -> Vec<Vec<u64>> {
    sets.iter().map(|s| inst.ids_of(s)).collect()
}

fn subset(inst: &ColouredInstance, ids: &Option<Vec<u64>>) -> Result<Vec<Elem>> {
    match ids {
        Some(ids) => Ok(inst.elems_of(ids)?),
        None => Ok(inst.ground().collect()),
    }
}

/// Common report fields: digest, config echo, timing and version.
fn report(mode: &str, inst: &ColouredInstance, config: impl Serialize, started: Instant, body: Value) -> Result<Value> {
    let mut v = json!({
        "mode": mode,
        "n": inst.n(),
        "digest": format::digest(inst),
        "config": serde_json::to_value(config)?,
        "timing_ms": started.elapsed().as_millis() as u64,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    Ok(v)
}

fn generate_cmd(a: &GenerateArgs) -> Result<Outcome> {
    let inst = match a.kind {
        Kind::Linear => generate::linear(a.n, a.p, a.seed)?,
        Kind::Graphic => generate::graphic(a.n, a.v.unwrap_or(a.n + 1), a.seed)?,
    };
    let text = format::serialize(&inst);
    let summary = match &a.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            format!("wrote rank-{} instance to {} (digest {})", a.n, path.display(), format::digest(&inst))
        }
        None => {
            print!("{text}");
            String::new()
        }
    };
    Ok(Outcome { code: OK, report: None, summary, trace: Vec::new() })
}

fn verify_cmd(a: &VerifyArgs) -> Result<Outcome> {
    let inst = load(&a.instance)?;
    let text = fs::read_to_string(&a.solution).with_context(|| format!("reading {}", a.solution.display()))?;
    let sol: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.solution.display()))?;
    let mode = match sol.get("mode").and_then(Value::as_str) {
        Some("pack") => Mode::Pack,
        Some("cover") => Mode::Cover,
        other => bail!("solution has no pack/cover mode (found {other:?})"),
    };
    let bases: Vec<Vec<u64>> = serde_json::from_value(sol.get("bases").cloned().unwrap_or(Value::Null))
        .context("reading the bases array")?;
    let count_key = if mode == Mode::Pack { "bases_found" } else { "count" };
    let count = sol.get(count_key).and_then(Value::as_u64).map(|c| c as usize);
    let mut rep = verify(&inst, mode, &bases, count);
    if let Some(d) = sol.get("digest").and_then(Value::as_str) {
        if d != format::digest(&inst) {
            rep.errors.push("solution was produced for a different instance".into());
            rep.ok = false;
        }
    }
    let summary = if rep.ok {
        format!("PASS: {} bases", rep.checked_bases)
    } else {
        format!("FAIL: {}", rep.errors.join("; "))
    };
    let code = if rep.ok { OK } else { VERIFY_FAILED };
    Ok(Outcome::new(code, serde_json::to_value(&rep)?, summary))
}

fn cover_cmd(a: &CoverArgs) -> Result<Outcome> {
    let started = Instant::now();
    let inst = load(&a.instance)?;
    let mut cfg = CoverConfig::new(a.epsilon)?;
    if let Some(l) = a.lambda {
        cfg = cfg.with_lambda(l)?;
    }
    cfg.iteration_budget = a.budget;
    cfg.ell = a.ell;
    cfg.r = a.r;
    cfg.restarts = a.restarts;
    cfg.exact_max_n = a.exact_max_n;
    cfg.seed = a.seed;
    cfg.validate()?;
    let sol = cover(&inst, &cfg)?;
    let n = inst.n();
    let body = json!({
        "count": sol.count,
        "covers": sol.covers,
        "bases": ids(&inst, &sol.bases),
        "phase_stats": sol.audit,
        "bounds": {
            "two_n_minus_two": (2 * n).saturating_sub(2).max(1),
            "one_plus_eps_n": (1.0 + a.epsilon) * n as f64,
        },
    });
    let v = report("cover", &inst, &cfg, started, body)?;
    let code = if sol.audit.budget_exhausted && !sol.audit.build_success { PARTIAL } else { OK };
    let summary = format!("cover: {} bases for rank {n} (2n-2 = {})", sol.count, (2 * n).saturating_sub(2));
    Ok(Outcome { code, report: Some(v), summary, trace: sol.trace })
}

fn pack_cmd(a: &PackArgs) -> Result<Outcome> {
    let started = Instant::now();
    let inst = load(&a.instance)?;
    let mut cfg = PackConfig::new(a.epsilon)?;
    if let Some(s) = a.sigma {
        cfg.sigma = s;
    }
    if let Some(l) = a.big_l {
        cfg.big_l = l;
    }
    cfg.r_max = a.rmax;
    cfg.seeds = a.seeds;
    cfg.budget_ms = a.budget_ms;
    cfg.ell = a.ell;
    cfg.r = a.r;
    cfg.exact_fallback = a.exact_fallback;
    cfg.validate()?;
    let rcfg = ReservoirConfig::new(a.eta, a.gamma, a.seed)?;
    let sol = pack(&inst, &cfg, &rcfg)?;
    let body = json!({
        "bases_found": sol.bases_found,
        "bases": ids(&inst, &sol.bases),
        "reservoir": sol.reservoir,
        "cascade_stats": sol.cascade_stats,
        "floors": sol.floors,
    });
    let v = report("pack", &inst, json!({ "pack": &cfg, "reservoir": &rcfg }), started, body)?;
    let code = if sol.cascade_stats.budget_exhausted { PARTIAL } else { OK };
    let summary = format!(
        "pack: {} disjoint bases for rank {} (target {}, floor {})",
        sol.bases_found,
        inst.n(),
        sol.floors.target,
        sol.floors.half_n
    );
    Ok(Outcome { code, report: Some(v), summary, trace: sol.trace })
}

fn deadlock_cmd(a: &DeadlockArgs) -> Result<Outcome> {
    let started = Instant::now();
    let inst = load(&a.instance)?;
    let u = subset(&inst, &a.subset)?;
    let rep = deadlock(inst.matroid(), &u, a.k)?;
    let body = json!({
        "k": a.k,
        "deadlock": inst.ids_of(&rep.deadlock),
        "rank": rep.rank,
        "surplus": rep.surplus,
    });
    let v = report("deadlock", &inst, json!({ "k": a.k, "subset": inst.ids_of(&u) }), started, body)?;
    let summary = format!("D_{}: {} of {} elements, rank {}", a.k, rep.deadlock.len(), u.len(), rep.rank);
    Ok(Outcome::new(OK, v, summary))
}

fn reservoir_cmd(a: &ReservoirArgs) -> Result<Outcome> {
    let started = Instant::now();
    let inst = load(&a.instance)?;
    let rcfg = ReservoirConfig::new(a.eta, a.gamma, a.seed)?;
    let r = sample_reservoir(&inst, &rcfg)?;
    let rep = check_reservoir(&inst, &r, &rcfg, a.eps_prime, a.samples)?;
    let summary = format!(
        "reservoir: |R| = {}, ♦ on {:.1}% of colours, ★/♠/▲ violations {}/{}/{} in {} samples",
        r.len(),
        100.0 * rep.diamond_fraction,
        rep.star_violations,
        rep.spade_violations,
        rep.triangle_violations,
        rep.samples
    );
    let body = json!({ "size": r.len(), "report": rep });
    let v = report("reservoir", &inst, &rcfg, started, body)?;
    Ok(Outcome::new(OK, v, summary))
}

fn bf_cmd(a: &BfArgs) -> Result<Outcome> {
    let started = Instant::now();
    let inst = load(&a.instance)?;
    let budget = BruteForceBudget { time_cap_ms: a.time_cap_ms, force: a.force, ..Default::default() };
    if a.force {
        log::warn!("size caps disabled; enumeration may take very long");
    }
    let (body, summary) = match a.problem {
        BfProblem::Deadlock => {
            let u = subset(&inst, &a.subset)?;
            let d = bf_deadlock(inst.matroid(), &u, a.k, &budget)?;
            let s = format!("bf D_{}: {} of {} elements", a.k, d.len(), u.len());
            (json!({ "k": a.k, "deadlock": inst.ids_of(&d) }), s)
        }
        BfProblem::Pack => {
            let w = bf_max_disjoint_transversal_bases(&inst, &budget)?;
            let s = format!("bf pack: {} disjoint bases", w.count);
            (json!({ "bases_found": w.count, "bases": ids(&inst, &w.bases) }), s)
        }
        BfProblem::Cover => {
            let w = bf_min_cover(&inst, &budget)?;
            let s = format!("bf cover: {} bases", w.count);
            (json!({ "count": w.count, "bases": ids(&inst, &w.bases) }), s)
        }
        BfProblem::Rainbow => {
            let u = subset(&inst, &a.subset)?;
            let m = a.m.unwrap_or(2 * a.k);
            let w = bf_rainbow_decomposition(&inst, &u, m, &budget)?;
            let s = match &w {
                Some(_) => format!("bf rainbow: {} elements split into {m} rainbow independent sets", u.len()),
                None => format!("bf rainbow: no split of {} elements into {m} sets", u.len()),
            };
            let parts = w.map(|p| ids(&inst, &p));
            (json!({ "m": m, "possible": parts.is_some(), "parts": parts }), s)
        }
    };
    let mode = format!("bf-{}", format!("{:?}", a.problem).to_lowercase());
    let v = report(&mode, &inst, &budget, started, body)?;
    Ok(Outcome::new(OK, v, summary))
}

fn batch_cmd(a: &BatchArgs, audit: bool) -> Result<Outcome> {
    let text = fs::read_to_string(&a.manifest).with_context(|| format!("reading {}", a.manifest.display()))?;
    let jobs: Vec<(usize, String)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.jobs).build()?;
    let results: Vec<Value> = pool.install(|| {
        jobs.par_iter()
            .map(|(line, cmd)| {
                let mut argv = vec!["rota".to_string()];
                if audit {
                    argv.push("--audit".into());
                }
                argv.extend(cmd.split_whitespace().map(String::from));
                let code = match <Cli as clap::Parser>::try_parse_from(&argv) {
                    Ok(cli) if matches!(cli.command, Command::Batch(_)) => FAILURE,
                    Ok(cli) => dispatch(&cli),
                    Err(e) => {
                        eprintln!("manifest line {line}: {e}");
                        PARSE_ERROR
                    }
                };
                json!({ "line": line, "command": cmd, "exit": code })
            })
            .collect()
    });
    let code = results.iter().filter_map(|r| r["exit"].as_u64()).max().unwrap_or(0) as u8;
    let summary = results.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
    Ok(Outcome { code, report: None, summary, trace: Vec::new() })
}
