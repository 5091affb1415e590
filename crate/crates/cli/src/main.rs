//! `greenquad` — kernel evaluation on grids, Levi spectra, and the
//! verification suites, with CSV/JSON output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration or parse
//! error, 3 flagged rows under `--strict`.

mod grid;
mod kernel_cmd;
mod levi_cmd;
mod verify_cmd;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "greenquad",
    about = "Fundamental solutions of the Kohn Laplacian on quadric CR submanifolds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Levi spectrum μ_j^λ, rank ν(λ) and eigenbasis of a form.
    Levi(levi_cmd::LeviArgs),
    /// Evaluate a kernel family on a grid and write CSV or JSON.
    Kernel(kernel_cmd::KernelArgs),
    /// Run a named verification suite and print its JSON report.
    Verify(verify_cmd::VerifyArgs),
}

fn main() {
    init_thread_pool();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Levi(args) => levi_cmd::run(&args),
        Command::Kernel(args) => kernel_cmd::run(&args),
        Command::Verify(args) => verify_cmd::run(&args),
    };
    std::process::exit(code);
}

/// `GREENQUAD_THREADS` caps grid parallelism; unset means rayon's default.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("GREENQUAD_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

/// Shortest-roundtrip float formatting with `nan` spelled out.
pub(crate) fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

pub(crate) fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number '{p}': {e}"))
        })
        .collect()
}
