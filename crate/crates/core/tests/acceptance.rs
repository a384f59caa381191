//! Runs the twelve acceptance criteria at full size and prints one line per
//! criterion. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use loopquiver::verify::{run_criterion, VerifyConfig, CRITERIA};

fn main() -> ExitCode {
    let cfg = VerifyConfig::full(0);
    let mut failed = 0;
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let r = run_criterion(id, &cfg).expect("known criterion");
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict}: {} ({} checks, {:.1}s)",
            r.id,
            r.name,
            r.checks,
            start.elapsed().as_secs_f64()
        );
        for f in &r.failures {
            println!("    {f}");
        }
        failed += usize::from(!r.pass);
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
