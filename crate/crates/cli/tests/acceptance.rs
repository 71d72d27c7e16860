//! Runs the nine acceptance criteria and prints one line per criterion.

use std::path::Path;
use std::process::ExitCode;

use ifunc_cli::corpus::run_all;

fn main() -> ExitCode {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let reports = run_all(Some(&dir));
    let mut failed = 0;
    for r in &reports {
        println!("{}", r.line());
        if !r.passed {
            failed += 1;
            if let Some(cfg) = &r.reproduction {
                println!("  reproduction config:\n{}", cfg);
            }
        }
    }
    println!("acceptance: {} passed, {} failed", reports.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
