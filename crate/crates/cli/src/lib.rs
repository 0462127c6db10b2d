//! Declarative front end: JSON documents in, verdict reports out.

pub mod build;
pub mod commands;
pub mod document;
pub mod emit;
pub mod error;
pub mod report;

use std::time::Instant;

use descent_core::Limits;
use serde_json::json;

pub use commands::{Options, COMMANDS};
pub use document::Document;
pub use error::{CliError, CliResult};
pub use report::{Report, Verdict};

/// Where the document comes from.
#[derive(Debug, Clone, Copy)]
pub enum Input<'a> {
    Text(&'a str),
    Fixture(&'a str),
    None,
}

/// A report together with the process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

fn load(input: Input, opts: &Options, limits: &Limits) -> CliResult<Document> {
    match input {
        Input::Text(t) => Document::parse(t),
        Input::Fixture(name) => emit::fixture(name, opts.p, limits),
        Input::None => Ok(Document::default()),
    }
}

fn error_kind(e: &CliError) -> &'static str {
    match e {
        CliError::Parse { .. } => "parse",
        CliError::Schema { .. } => "schema",
        CliError::Invalid { .. } => "invalid_input",
        CliError::Core(descent_core::Error::Invariant(_)) => "internal",
        CliError::Core(_) => "rejected_input",
        CliError::Io(_) => "io",
    }
}

/// Runs one command. A negative verdict is a successful run (exit 0); input
/// problems exit with 2 and internal invariant failures with 1.
pub fn run(command: &str, input: Input, opts: &Options) -> Outcome {
    let limits = Limits::default();
    let start = Instant::now();
    let result =
        load(input, opts, &limits).and_then(|doc| commands::dispatch(command, &doc, opts, &limits));
    let timing_ms = Some(start.elapsed().as_millis());
    match result {
        Ok((verdict, witness)) => Outcome {
            report: Report {
                command: command.to_string(),
                verdict,
                witness,
                timing_ms,
            },
            exit_code: 0,
        },
        Err(e) => Outcome {
            exit_code: e.exit_code(),
            report: Report {
                command: command.to_string(),
                verdict: Verdict::Error,
                witness: json!({"kind": error_kind(&e), "message": e.to_string()}),
                timing_ms,
            },
        },
    }
}
