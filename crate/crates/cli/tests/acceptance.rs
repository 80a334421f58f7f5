//! One pass/fail line per acceptance item. Run with `--nocapture` to see the
//! lines; the test fails if any item fails.

use std::process::Command;
use std::time::{Duration, Instant};

use walkdens::verify::{criterion, Check, Level};

/// Wall-clock limits per item, where one applies.
fn time_limit(k: u8) -> Option<Duration> {
    match k {
        1 => Some(Duration::from_secs(30)),
        2 => Some(Duration::from_secs(120)),
        3 => Some(Duration::from_secs(60)),
        12 => Some(Duration::from_secs(600)),
        _ => None,
    }
}

fn line(k: u8, checks: &[Check], elapsed: Duration, extra: Option<(bool, String)>) -> bool {
    let within = time_limit(k).is_none_or(|t| elapsed <= t);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    let extra_ok = extra.as_ref().is_none_or(|e| e.0);
    let ok = failed.is_empty() && within && extra_ok;
    let worst = checks
        .iter()
        .filter(|c| c.tol > 0.0 && c.cmp == "<=")
        .map(|c| c.residual / c.tol)
        .fold(0.0, f64::max);
    let mut msg = format!(
        "criterion {k:>2}: {} ({} checks, worst residual/tol {worst:.2e}, {:.1} s",
        if ok { "PASS" } else { "FAIL" },
        checks.len(),
        elapsed.as_secs_f64()
    );
    if let Some(t) = time_limit(k) {
        msg += &format!(" of {} s", t.as_secs());
    }
    msg += ")";
    if !failed.is_empty() {
        msg += &format!(" failing: {}", failed.join(", "));
    }
    if let Some((_, e)) = extra {
        msg += &format!(" {e}");
    }
    println!("{msg}");
    ok
}

#[test]
fn acceptance() {
    let mut all = true;
    for k in 1..=11u8 {
        let t = Instant::now();
        let checks = criterion(k, Level::Quick);
        all &= line(k, &checks, t.elapsed(), None);
    }

    let t = Instant::now();
    let checks = criterion(12, Level::Quick);
    let mc_time = t.elapsed();
    let t = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_walkdens"))
        .args(["verify", "--suite", "all", "--level", "quick"])
        .output()
        .expect("run walkdens");
    let cli_time = t.elapsed();
    let cli_ok = status.status.code() == Some(0) && cli_time <= Duration::from_secs(600);
    let extra = format!("[verify --suite all --level quick: exit {:?}, {:.1} s]", status.status.code(), cli_time.as_secs_f64());
    all &= line(12, &checks, mc_time, Some((cli_ok, extra)));
    assert!(all, "acceptance items failed");
}
