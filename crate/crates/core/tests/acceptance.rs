//! Runs all eleven acceptance criteria and prints one PASS/FAIL line per criterion.
//! Runs without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use fracwave_core::verify::{criterion_status, run_acceptance, summary_table, VerifyConfig, CRITERIA};

fn main() -> ExitCode {
    let config = VerifyConfig::default();
    let reports = match run_acceptance(&config) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL acceptance suite aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!("{}", summary_table(&reports));
    let status = criterion_status(&reports);
    let mut all = true;
    for (n, title) in CRITERIA.iter().enumerate() {
        let n = n as u8 + 1;
        let pass = status.iter().any(|&(c, p)| c == n && p);
        all &= pass;
        println!("{} criterion {n}: {title}", if pass { "PASS" } else { "FAIL" });
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
