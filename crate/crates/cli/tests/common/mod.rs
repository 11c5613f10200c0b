#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qradius"));
    c.env_remove("RADIUS_THREADS");
    c
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn qradius")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Writes `{"dim": n, "entries": ...}` for real row-major entries.
pub fn write_matrix(dir: &Path, name: &str, rows: &[&[f64]]) -> PathBuf {
    let entries: Vec<[f64; 2]> = rows.iter().flat_map(|r| r.iter().map(|&v| [v, 0.0])).collect();
    let json = serde_json::json!({ "dim": rows.len(), "entries": entries });
    let p = dir.join(name);
    std::fs::write(&p, json.to_string()).unwrap();
    p
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Rows of a CSV as floats, header dropped.
pub fn read_csv(p: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(p).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect();
    (header, rows)
}

/// First number after `key` on the line that starts with it.
pub fn field(out: &str, key: &str) -> f64 {
    out.lines()
        .find(|l| l.starts_with(key))
        .and_then(|l| l[key.len()..].split_whitespace().next())
        .unwrap_or_else(|| panic!("no `{key}` in\n{out}"))
        .parse()
        .unwrap()
}
