//! The line-based instance text format.
//!
//! ```text
//! rota-instance v1
//! kind linear p=5 n=2
//! elem 1 colour=1 vec=1,0
//! elem 2 colour=1 vec=0,1
//! elem 3 colour=2 vec=1,1
//! elem 4 colour=2 vec=1,4
//! ```
//!
//! Graphic instances use `kind graphic v=<vertices> n=<n>` and
//! `edge=<u>,<v>` (0-based vertices). Uniform instances, `kind uniform n=<n>`
//! with `group=<g>`, are accepted as well. Blank lines and lines starting
//! with `#` are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::matroid::{AnyMatroid, GraphicMatroid, LinearMatroid, UniformMatroid};
use crate::{ColouredInstance, Error, Result};

pub const HEADER: &str = "rota-instance v1";

enum Kind {
    Linear { p: u32 },
    Graphic { v: usize },
    Uniform,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn key_value<'a>(tok: &'a str, key: &str, line: usize) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| perr(line, format!("expected `{key}=...`, found `{tok}`")))
}

fn number<T: std::str::FromStr>(s: &str, what: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| perr(line, format!("bad {what} `{s}`")))
}

pub fn parse(text: &str) -> Result<ColouredInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, head) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    if head != HEADER {
        return Err(perr(ln, format!("expected `{HEADER}`")));
    }
    let (ln, kind_line) = lines.next().ok_or_else(|| perr(ln + 1, "missing kind line"))?;
    let toks: Vec<&str> = kind_line.split_whitespace().collect();
    if toks.first() != Some(&"kind") || toks.len() < 3 {
        return Err(perr(ln, "expected `kind <linear|graphic|uniform> ...`"));
    }
    let n_tok = toks.last().unwrap();
    let n: usize = number(key_value(n_tok, "n", ln)?, "n", ln)?;
    if n == 0 {
        return Err(perr(ln, "n must be positive"));
    }
    let kind = match (toks[1], toks.len()) {
        ("linear", 4) => Kind::Linear { p: number(key_value(toks[2], "p", ln)?, "prime", ln)? },
        ("graphic", 4) => Kind::Graphic { v: number(key_value(toks[2], "v", ln)?, "vertex count", ln)? },
        ("uniform", 3) => Kind::Uniform,
        _ => return Err(perr(ln, format!("unrecognised kind line `{kind_line}`"))),
    };
    if let Kind::Linear { p } = kind {
        if !crate::matroid::is_prime(p as u64) {
            return Err(perr(ln, format!("{p} is not prime")));
        }
    }

    let mut ids = Vec::new();
    let mut colours = Vec::new();
    let mut vectors = Vec::new();
    let mut edges = Vec::new();
    let mut groups = Vec::new();
    let mut seen = HashSet::new();
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "elem" {
            return Err(perr(ln, "expected `elem <id> colour=<c> <data>`"));
        }
        let id: u64 = number(toks[1], "element id", ln)?;
        if !seen.insert(id) {
            return Err(perr(ln, format!("duplicate element id {id}")));
        }
        let c: usize = number(key_value(toks[2], "colour", ln)?, "colour", ln)?;
        if c == 0 || c > n {
            return Err(perr(ln, format!("colour {c} outside 1..={n}")));
        }
        match kind {
            Kind::Linear { p } => {
                let v = key_value(toks[3], "vec", ln)?;
                let mut entries = Vec::with_capacity(n);
                for a in v.split(',') {
                    let a: i64 = number(a.trim(), "vector entry", ln)?;
                    entries.push(a.rem_euclid(p as i64) as u32);
                }
                if entries.len() != n {
                    return Err(perr(ln, format!("vector has {} entries, expected {n}", entries.len())));
                }
                vectors.push(entries);
            }
            Kind::Graphic { v } => {
                let e = key_value(toks[3], "edge", ln)?;
                let (a, b) = e.split_once(',').ok_or_else(|| perr(ln, "edge needs `u,v`"))?;
                let a: u32 = number(a.trim(), "vertex", ln)?;
                let b: u32 = number(b.trim(), "vertex", ln)?;
                if a as usize >= v || b as usize >= v {
                    return Err(perr(ln, format!("vertex outside 0..{v}")));
                }
                edges.push((a, b));
            }
            Kind::Uniform => {
                groups.push(number(key_value(toks[3], "group", ln)?, "group", ln)?);
            }
        }
        ids.push(id);
        colours.push(c - 1);
    }
    if ids.len() != n * n {
        return Err(Error::Validation(format!("{} elements, expected n² = {}", ids.len(), n * n)));
    }
    let matroid = match kind {
        Kind::Linear { p } => AnyMatroid::Linear(LinearMatroid::new(p, n, vectors)?),
        Kind::Graphic { v } => AnyMatroid::Graphic(GraphicMatroid::new(v, edges)?),
        Kind::Uniform => AnyMatroid::Uniform(UniformMatroid::with_groups(n, groups)),
    };
    ColouredInstance::new(matroid, ids, colours)
}

/// Canonical text: elements in ascending id order.
pub fn serialize(inst: &ColouredInstance) -> String {
    let n = inst.n();
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    match inst.matroid() {
        AnyMatroid::Linear(m) => writeln!(out, "kind linear p={} n={n}", m.prime()),
        AnyMatroid::Graphic(m) => writeln!(out, "kind graphic v={} n={n}", m.vertices()),
        AnyMatroid::Uniform(_) => writeln!(out, "kind uniform n={n}"),
    }
    .unwrap();
    for e in inst.ground() {
        write!(out, "elem {} colour={} ", inst.id(e), inst.colour(e) + 1).unwrap();
        match inst.matroid() {
            AnyMatroid::Linear(m) => {
                let v: Vec<String> = m.vector(e).iter().map(|a| a.to_string()).collect();
                writeln!(out, "vec={}", v.join(","))
            }
            AnyMatroid::Graphic(m) => {
                let (a, b) = m.edge(e);
                writeln!(out, "edge={a},{b}")
            }
            AnyMatroid::Uniform(m) => writeln!(out, "group={}", m.group(e)),
        }
        .unwrap();
    }
    out
}

/// SHA-256 of the canonical serialization, hex encoded.
pub fn digest(inst: &ColouredInstance) -> String {
    hex::encode(Sha256::digest(serialize(inst).as_bytes()))
}
