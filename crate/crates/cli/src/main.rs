use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use fqtrace_cli::commands::{run, Command};

/// Exact and sampled experiments on character sums over F_q[T] and trace
/// statistics of random invertible matrices.
///
/// Every run prints a CSV (provenance header plus data rows) and asserts
/// the identities and inequalities the experiment is about; the exit code
/// is 0 exactly when all checks pass. Outputs are byte-reproducible from
/// the config at any worker count.
#[derive(Parser, Debug)]
#[command(name = "fqtrace", version)]
struct Cli {
    /// Worker threads (default: one per logical CPU).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the JSON check summary here.
    #[arg(long, global = true)]
    summary: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    let cli = Cli::parse();
    let workers = match cli.workers {
        Some(0) => bail!("--workers must be ≥ 1"),
        Some(w) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build_global()
                .context("sizing the worker pool")?;
            w
        }
        None => rayon::current_num_threads(),
    };

    let output = run(&cli.command, workers)?;

    match &cli.out {
        Some(path) => {
            fs::write(path, &output.csv)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            std::io::stdout().write_all(output.csv.as_bytes())?;
        }
    }
    if let Some(path) = &cli.summary {
        fs::write(path, output.summary.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    // Human-readable verdict on stderr, leaving stdout pure CSV.
    for check in &output.summary.checks {
        let verdict = if check.passed { "ok" } else { "FAILED" };
        eprintln!("check {}: {}", check.name, verdict);
    }
    let failed = output.summary.checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        eprintln!("{}: {failed} check(s) FAILED", output.summary.experiment);
    } else {
        eprintln!("{}: all checks passed", output.summary.experiment);
    }
    Ok(output.summary.passed)
}
