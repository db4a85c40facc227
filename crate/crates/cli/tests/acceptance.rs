//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Built without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use polyprog_cli::verify::{run_all, VerifyOptions, CRITERIA};

fn main() -> ExitCode {
    let results = match run_all(&VerifyOptions::default(), |r| println!("{}", r.line())) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("acceptance suite could not run: {:#}", e);
            return ExitCode::FAILURE;
        }
    };
    assert_eq!(results.len(), CRITERIA);
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{} of {} criteria passed", passed, CRITERIA);
    if passed == CRITERIA {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
