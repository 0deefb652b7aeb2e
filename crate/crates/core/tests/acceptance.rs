//! One PASS/FAIL line per acceptance criterion. Tolerances live in the
//! invariant suite; wall-clock limits are pinned here.

use std::process::Command;
use std::time::{Duration, Instant};

use surfwave::config::ScenarioConfig;
use surfwave::verify::{criterion, Check};

/// Wall-clock limits per criterion (None: no limit stated).
const LIMITS: [Option<f64>; 12] = [
    Some(0.1),
    Some(5.0),
    Some(5.0),
    Some(10.0),
    Some(30.0),
    None,
    None,
    Some(60.0),
    None,
    None,
    None,
    Some(180.0),
];

fn line(n: u8, ok: bool, elapsed: Duration, detail: &str) -> bool {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n:>2}: {verdict} ({:.3} s) {detail}", elapsed.as_secs_f64());
    ok
}

fn summarize(checks: &[Check]) -> String {
    let bad: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}={:.3e} (bound {:.1e})", c.name, c.value, c.bound))
        .collect();
    if bad.is_empty() {
        format!("{} checks", checks.len())
    } else {
        bad.join(", ")
    }
}

fn main() {
    let cfg = ScenarioConfig::default();
    let mut all = true;
    for n in 1..=11u8 {
        let start = Instant::now();
        let checks = criterion(n, &cfg);
        let elapsed = start.elapsed();
        let in_time = LIMITS[n as usize - 1].map_or(true, |l| elapsed.as_secs_f64() < l);
        let ok = !checks.is_empty() && checks.iter().all(|c| c.passed) && in_time;
        let mut detail = summarize(&checks);
        if !in_time {
            detail.push_str(" [over time limit]");
        }
        all &= line(n, ok, elapsed, &detail);
    }

    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let status = Command::new(env!("CARGO_BIN_EXE_surfwave"))
            .args(["verify", "--seed", "7", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        (status.code(), std::fs::read(out.join("verify.json")).unwrap_or_default())
    };
    let start = Instant::now();
    let (c1, a) = run("a");
    let first = start.elapsed();
    let (c2, b) = run("b");
    let ok = c1 == Some(0) && c2 == Some(0) && !a.is_empty() && a == b && first.as_secs_f64() < LIMITS[11].unwrap();
    let detail = format!("exit codes {c1:?}/{c2:?}, identical reports: {}", !a.is_empty() && a == b);
    all &= line(12, ok, first, &detail);
    if !all {
        eprintln!("acceptance criteria failed");
        std::process::exit(1);
    }
}
