use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rota(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rota")).args(args).env_remove("ROTA_SEED").output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, name: &str, n: usize, seed: u64) -> String {
    let path = dir.join(name);
    let out = rota(&["generate", "-n", &n.to_string(), "-p", "5", "--seed", &seed.to_string(), "-o", s(&path)]);
    assert!(out.status.success());
    s(&path).to_string()
}

#[test]
fn generation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "a.txt", 2, 1);
    let b = generate(dir.path(), "b.txt", 2, 1);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
    let out = rota(&["generate", "-n", "3", "-p", "6"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pack_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), "i.txt", 6, 3);
    let sol = dir.path().join("p.json");
    let out = rota(&["pack", "-i", &inst, "--json", s(&sol)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(v["mode"], "pack");
    assert!(v["bases_found"].as_u64().unwrap() >= 3);
    assert!(rota(&["verify", "-i", &inst, "-s", s(&sol)]).status.success());
}

#[test]
fn verify_names_the_shared_element() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), "i.txt", 4, 5);
    let sol = dir.path().join("p.json");
    assert!(rota(&["pack", "-i", &inst, "--json", s(&sol)]).status.success());
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    v["bases"][1] = v["bases"][0].clone();
    let first = v["bases"][0][0].as_u64().unwrap();
    fs::write(&sol, v.to_string()).unwrap();
    let out = rota(&["verify", "-i", &inst, "-s", s(&sol)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains(&format!("element {first} appears in bases")));
}

#[test]
fn json_to_stdout_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), "i.txt", 5, 2);
    let trace = dir.path().join("t.jsonl");
    let out = rota(&["cover", "-i", &inst, "--json", "-", "--trace", s(&trace)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["count"].as_u64().unwrap() <= 8);
    assert!(v["bounds"]["two_n_minus_two"].as_u64() == Some(8));
    for line in fs::read_to_string(trace).unwrap().lines() {
        let ev: Value = serde_json::from_str(line).unwrap();
        assert!(ev["event"].is_string());
    }
}

#[test]
fn parse_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "rota-instance v1\nkind linear p=5 n=1\nelem 1 colour=1 vec=x\n").unwrap();
    let out = rota(&["deadlock", "-i", s(&bad), "-k", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn deadlock_and_brute_force_agree() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), "i.txt", 3, 8);
    let a = rota(&["deadlock", "-i", &inst, "-k", "2", "--subset", "1,2,4,5,7", "--json", "-"]);
    let b = rota(&["bf", "deadlock", "-i", &inst, "-k", "2", "--subset", "1,2,4,5,7", "--json", "-"]);
    let a: Value = serde_json::from_slice(&a.stdout).unwrap();
    let b: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(a["deadlock"], b["deadlock"]);
}

#[test]
fn batch_reports_each_line() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), "i.txt", 4, 1);
    let manifest = dir.path().join("m.txt");
    fs::write(&manifest, format!("# two runs\npack -i {inst}\ncover -i {inst}\nnot-a-command\n")).unwrap();
    let out = rota(&["batch", s(&manifest), "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<Value> = stdout.lines().filter_map(|l| serde_json::from_str(l).ok()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["exit"], 0);
    assert_eq!(lines[2]["exit"], 3);
}
