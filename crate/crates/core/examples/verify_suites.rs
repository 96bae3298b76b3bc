//! Run every verification suite and summarize the checks.
use annealing_paths::verify::suites::run_suite;

fn main() -> annealing_paths::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let report = run_suite("all", seed, None)?;
    for c in &report.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        println!("{mark} {:<52} {:>11.3e} {:?} {:.1e}", c.name, c.measured, c.relation, c.tolerance);
    }
    println!("seed {seed}: {}", if report.passed { "all checks passed" } else { "some checks failed" });
    Ok(())
}
