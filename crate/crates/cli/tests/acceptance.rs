//! Acceptance criteria 1 to 11, one `criterion N: pass|fail` line each.
//!
//! Runs without the libtest harness so the lines always reach the output of
//! `cargo test`. Wall-clock budgets are checked against the build profile in
//! use; the dev profile compiles dependencies with optimizations.

use std::process::Command;
use std::time::Instant;

use hkrlab::report::Check;
use hkrlab_cli::acceptance::{run, CRITERIA};

fn summarize(id: u8, title: &str, checks: &[Check], secs: f64, budget: f64) -> bool {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
    let on_time = secs <= budget;
    let ok = failed.is_empty() && on_time;
    println!(
        "criterion {id}: {} ({title}; {} checks, {:.2}s of {budget:.0}s)",
        if ok { "pass" } else { "fail" },
        checks.len(),
        secs
    );
    for c in failed {
        println!("    {} [{}] {}", c.name, c.verdict, c.diagnostics.join("; "));
    }
    if !on_time {
        println!("    over the time budget");
    }
    ok
}

fn determinism() -> bool {
    let exe = env!("CARGO_BIN_EXE_hkrlab");
    let start = Instant::now();
    let a = Command::new(exe).arg("all-acceptance").output().expect("binary runs");
    let b = Command::new(exe).arg("all-acceptance").output().expect("binary runs");
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = identical && a.status.success() && b.status.success();
    println!(
        "criterion 11: {} (all-acceptance twice: identical {identical}, exit codes {:?} and {:?}, {:.2}s)",
        if ok { "pass" } else { "fail" },
        a.status.code(),
        b.status.code(),
        start.elapsed().as_secs_f64()
    );
    ok
}

fn main() {
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let checks = run(c);
        let secs = start.elapsed().as_secs_f64();
        if !summarize(c.id, c.title, &checks, secs, c.budget.as_secs_f64()) {
            failed.push(c.id);
        }
    }
    if !determinism() {
        failed.push(11);
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
