//! Prints one PASS/FAIL line per acceptance criterion and fails if any
//! criterion fails. `BTQUOT_SEED` selects the sampling seed.

use std::process::ExitCode;

fn main() -> ExitCode {
    let seed = std::env::var("BTQUOT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let results = btquot::verify::run_all(seed);
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("acceptance: {} passed, {failed} failed (seed {seed})", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
