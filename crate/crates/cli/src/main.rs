use std::io::{Read, Write};
use std::process::ExitCode;

use clap::Parser;
use descent_cli::{emit, run, Input, Options, COMMANDS};
use descent_core::Limits;

/// Checks descent conditions for sheaves, stacks and comodules on finite sites.
#[derive(Debug, Parser)]
#[command(name = "descent", version)]
struct Args {
    /// One of the commands listed in the README.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(COMMANDS))]
    command: String,
    /// Input document (JSON); `-` reads standard input.
    document: Option<String>,
    /// Use a bundled fixture (S2, CIRC, BG2, HOPF-EPS) instead of a file.
    #[arg(long)]
    fixture: Option<String>,
    /// Refinement depth for `is-local-we`.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Presheaf value-size bound for enumerations.
    #[arg(long, default_value_t = 3)]
    bound: usize,
    /// The prime for HOPF-EPS and `counterexample-nonabelian`.
    #[arg(long, default_value_t = 3)]
    p: i64,
    /// Print a deterministic JSON report.
    #[arg(long)]
    machine: bool,
}

fn read_document(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn fixtures(args: &Args) -> ExitCode {
    let limits = Limits::default();
    let emitted = match &args.fixture {
        Some(name) => emit::fixture(name, args.p, &limits).map(|d| d.emit()),
        None => emit::all_fixtures(args.p, &limits)
            .map(|all| serde_json::to_string_pretty(&all).expect("documents serialize")),
    };
    match emitted {
        Ok(text) => {
            emit_stdout(&format!("{text}\n"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.command == "fixtures" {
        return fixtures(&args);
    }
    let opts = Options {
        depth: args.depth,
        bound: args.bound,
        p: args.p,
    };
    let text = match &args.document {
        Some(path) => match read_document(path) {
            Ok(t) => Some(t),
            Err(e) => {
                eprintln!("error: cannot read `{path}`: {e}");
                return ExitCode::from(2);
            }
        },
        None => None,
    };
    let input = match (&text, &args.fixture) {
        (Some(t), _) => Input::Text(t),
        (None, Some(name)) => Input::Fixture(name),
        (None, None) => Input::None,
    };
    let outcome = run(&args.command, input, &opts);
    if args.machine {
        emit_stdout(&format!("{}\n", outcome.report.machine()));
    } else {
        emit_stdout(&outcome.report.human());
    }
    ExitCode::from(outcome.exit_code as u8)
}
