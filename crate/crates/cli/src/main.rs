use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ifunc_cli::config::Overrides;
use ifunc_cli::corpus::{run_all, run_regression};
use ifunc_cli::job::{read_config, run_job, JobError, EXIT_CONFIG, EXIT_INTEGRITY};
use ifunc_cli::render::render;

/// Compute I-function coefficients of GIT quotients.
#[derive(Parser, Debug)]
#[command(name = "ifunc", version)]
struct Args {
    /// Job configuration (TOML).
    #[arg(long, value_name = "PATH", required_unless_present = "corpus")]
    config: Option<PathBuf>,
    /// toric, nonabelian or lefschetz.
    #[arg(long)]
    mode: Option<String>,
    /// θ-degree bound, an integer or a fraction like 5/2.
    #[arg(long, value_name = "Q")]
    max_degree: Option<String>,
    #[arg(long, value_name = "N")]
    denominator_bound: Option<u64>,
    /// convex-only or assume-transverse.
    #[arg(long)]
    convexity: Option<String>,
    #[arg(long)]
    equivariant: bool,
    /// e.g. "p=x0; eta=1; order=2".
    #[arg(long, value_name = "SPEC")]
    big_i: Option<String>,
    /// plain, latex or json.
    #[arg(long)]
    output: Option<String>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Run the acceptance criteria, and the regression cases in DIR if given.
    #[arg(long, value_name = "DIR", num_args = 0..=1)]
    corpus: Option<Option<PathBuf>>,
}

fn run_corpus(dir: Option<PathBuf>) -> ExitCode {
    let mut failed = 0;
    for r in run_all(dir.as_deref()) {
        println!("{}", r.line());
        if !r.passed {
            failed += 1;
            if let Some(cfg) = r.reproduction {
                println!("  reproduction config:\n{}", cfg);
            }
        }
    }
    if let Some(dir) = &dir {
        match run_regression(dir) {
            Ok((n, failures)) => {
                println!("regression: {} cases, {} failed", n, failures.len());
                for f in &failures {
                    println!("  FAIL {}: {}", f.config.display(), f.message);
                }
                failed += failures.len();
            }
            Err(m) => {
                eprintln!("error: {}", m);
                return ExitCode::from(EXIT_CONFIG as u8);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INTEGRITY as u8)
    }
}

fn run(args: Args) -> Result<(), JobError> {
    let overrides = Overrides {
        mode: args.mode,
        max_degree: args.max_degree,
        denominator_bound: args.denominator_bound,
        convexity: args.convexity,
        equivariant: args.equivariant,
        big_i: args.big_i,
        format: args.output,
        destination: args.out.map(|p| p.display().to_string()),
    };
    let path = args.config.expect("clap requires --config");
    let cfg = read_config(&path, &overrides)?;
    for w in &cfg.warnings {
        eprintln!("warning: {}", w);
    }
    let series = run_job(&cfg)?;
    let mut text = render(&series, cfg.format);
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cfg.destination {
        Some(dest) => std::fs::write(dest, text)
            .map_err(|source| JobError::Io { path: dest.display().to_string(), source })?,
        None => print!("{}", text),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(dir) = args.corpus.clone() {
        return run_corpus(dir);
    }
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
