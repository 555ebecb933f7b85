//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always print. Pass
//! criterion numbers after `--` to run a subset.

use std::process::ExitCode;
use std::time::Instant;

use toadfront::acceptance::Suite;

fn main() -> ExitCode {
    let selected: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u8> = if selected.is_empty() { (1..=7).collect() } else { selected };
    let suite = Suite::new();
    let mut failed = Vec::new();
    for id in ids {
        let start = Instant::now();
        match suite.run(id) {
            Ok(report) => {
                println!("{} [{:.1}s]", report.summary_line(), start.elapsed().as_secs_f64());
                if !report.passed {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("[FAIL] criterion {id}: error: {e}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
