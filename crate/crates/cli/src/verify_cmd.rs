//! `greenquad verify`: run named suites, emit the JSON report.

use clap::Args;
use greenquad::verify::{run_suite, SuiteReport, SUITE_NAMES};
use serde::Serialize;
use std::io::Write;
use std::time::Instant;

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite name (mehler, hermite, commutators, annihilate, reduction,
    /// scaling, m2-constant, series) or `all`.
    pub suite: String,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Serialize)]
struct CheckJson {
    name: String,
    residual: f64,
    threshold: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SuiteJson {
    suite: String,
    checks: Vec<CheckJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
    wall_time_s: f64,
}

fn to_json(report: SuiteReport, wall: f64) -> SuiteJson {
    SuiteJson {
        suite: report.suite,
        checks: report
            .checks
            .into_iter()
            .map(|c| CheckJson {
                name: c.name,
                residual: c.residual,
                threshold: c.threshold,
                pass: c.pass,
            })
            .collect(),
        warning: report.warning,
        wall_time_s: wall,
    }
}

pub fn run(args: &VerifyArgs) -> i32 {
    let names: Vec<&str> = if args.suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let mut reports = Vec::new();
    let mut all_pass = true;
    for name in names {
        let start = Instant::now();
        match run_suite(name, args.seed) {
            Ok(report) => {
                all_pass &= report.all_pass();
                reports.push(to_json(report, start.elapsed().as_secs_f64()));
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    let text = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0]).unwrap()
    } else {
        serde_json::to_string_pretty(&reports).unwrap()
    };
    let write_result = match &args.output {
        Some(path) => std::fs::File::create(path).and_then(|mut f| writeln!(f, "{text}")),
        None => writeln!(std::io::stdout(), "{text}"),
    };
    if let Err(e) = write_result {
        eprintln!("error: {e}");
        return 2;
    }
    if all_pass {
        0
    } else {
        1
    }
}
