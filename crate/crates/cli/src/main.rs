// `!(x > 0.0)` is used on purpose throughout: unlike `x <= 0.0` it also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use cli::{Cli, Command};

/// Exit status for a failed verification check.
const EXIT_CHECK_FAILED: u8 = 1;
/// Exit status for malformed arguments or configuration.
const EXIT_CONFIG: u8 = 2;
/// Exit status for a computation the library refused.
const EXIT_COMPUTATION: u8 = 3;

fn report(error: serde_json::Value) {
    eprintln!("{error}");
}

/// Structured description of a library error: kind, offending parameter and
/// offending value where one exists.
fn describe(err: &dkgreen::Error) -> serde_json::Value {
    use dkgreen::Error as E;
    let (kind, parameter, value) = match err {
        E::Pole { .. } => ("pole", Some("energy"), None),
        E::Parameter { name, value, .. } => ("parameter", Some(*name), Some(*value)),
        E::NonConvergence { .. } => ("non_convergence", None, None),
        E::Domain { what, value, .. } => ("domain", Some(*what), Some(*value)),
        E::DegenerateMap { q, .. } => ("degenerate_map", Some("q"), Some(*q)),
        E::Threshold { epsilon } => ("threshold", Some("energy"), Some(*epsilon)),
        E::FallToCenter { alpha, .. } => ("fall_to_center", Some("alpha"), Some(*alpha)),
        E::Order { r_b, .. } => ("order", Some("rb"), Some(*r_b)),
        E::NoBoundStates { alpha } => ("no_bound_states", Some("alpha"), Some(*alpha)),
        E::Stiffness { r, .. } => ("stiffness", Some("r"), Some(*r)),
        E::Underflow { r } => ("underflow", Some("r"), Some(*r)),
        E::NearPole { .. } => ("near_pole", Some("energy"), None),
        E::Inconsistent(_) => ("inconsistent", None, None),
    };
    json!({
        "error": kind,
        "parameter": parameter,
        "value": value,
        "message": err.to_string(),
    })
}

fn run(cli: &Cli) -> anyhow::Result<commands::Emission> {
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Green(a) => commands::green(a),
        Command::Map(a) => commands::map(a),
        Command::Effpot(a) => commands::effpot(a),
        Command::OracleCompare(a) => commands::oracle_compare(a),
        Command::VerifyAll(a) => commands::verify_all(a),
    }
}

fn destination(cli: &Cli) -> Option<&std::path::Path> {
    let out = match &cli.command {
        Command::Spectrum(a) => &a.out,
        Command::Green(a) => &a.out,
        Command::Map(a) => &a.out,
        Command::Effpot(a) => &a.out,
        Command::OracleCompare(a) => &a.out,
        Command::VerifyAll(a) => &a.out,
    };
    out.output.as_deref()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report(json!({
                "error": "config",
                "parameter": e.get(clap::error::ContextKind::InvalidArg).map(|v| v.to_string()),
                "message": e.kind().to_string(),
                "detail": e.to_string().trim_end(),
            }));
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let emission = match run(&cli) {
        Ok(emission) => emission,
        Err(e) => {
            return match e.downcast_ref::<dkgreen::Error>() {
                Some(lib) => {
                    report(describe(lib));
                    ExitCode::from(EXIT_COMPUTATION)
                }
                None => {
                    report(json!({ "error": "config", "message": format!("{e:#}") }));
                    ExitCode::from(EXIT_CONFIG)
                }
            };
        }
    };

    if let Err(e) = output::write_atomic(destination(&cli), &emission.bytes) {
        report(json!({ "error": "io", "message": format!("{e:#}") }));
        return ExitCode::from(EXIT_CONFIG);
    }
    if emission.failed_checks.is_empty() {
        ExitCode::SUCCESS
    } else {
        report(json!({ "error": "check_failed", "checks": emission.failed_checks }));
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}
