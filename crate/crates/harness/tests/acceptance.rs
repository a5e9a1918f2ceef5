//! Runs `qsba reproduce --seed 42` twice and prints one line per criterion.

use std::collections::BTreeMap;
use std::process::Command;

use qsba_harness::reproduce::{criterion_of, CRITERIA};
use qsba_harness::Report;

fn reproduce(out: &std::path::Path) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_qsba"))
        .args(["reproduce", "--seed", "42", "--format", "json", "--out"])
        .arg(out)
        .status()
        .expect("binary runs");
    status.code().expect("exited normally")
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let (first, second) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let codes = [reproduce(&first), reproduce(&second)];
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    let report: Report = serde_json::from_slice(&a).unwrap();

    let mut by_criterion: BTreeMap<u8, Vec<_>> = BTreeMap::new();
    for row in &report.rows {
        by_criterion.entry(criterion_of(row).expect("row carries a criterion")).or_default().push(row);
    }
    let mut verdicts = Vec::new();
    for c in 1..=CRITERIA {
        let rows = by_criterion.get(&c).map(Vec::as_slice).unwrap_or_default();
        let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.metric.as_str()).collect();
        let pass = !rows.is_empty() && failed.is_empty();
        let detail = if rows.is_empty() {
            "no rows".to_string()
        } else if pass {
            format!("{} rows", rows.len())
        } else {
            format!("failed: {}", failed.join(", "))
        };
        println!("criterion {c:>2}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
        verdicts.push(pass);
    }
    let deterministic = a == b && codes == [0, 0];
    println!(
        "criterion 10: {} (identical reports: {}, exit codes {codes:?})",
        if deterministic { "PASS" } else { "FAIL" },
        a == b
    );
    verdicts.push(deterministic);
    if !verdicts.iter().all(|&v| v) {
        eprintln!("some criteria failed");
        std::process::exit(1);
    }
}
