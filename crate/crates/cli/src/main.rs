use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use gcx_cli::jobs::{Command, RunOverrides, EXIT_INTERNAL, EXIT_VALIDATION};
use gcx_cli::run_source;

/// Compute canonical factorizations of finite ring maps and the complexity
/// of groupoids presented by finite group(-scheme) actions.
#[derive(Parser)]
#[command(name = "gcx", version, about)]
struct Args {
    /// One of: validate, canseq, effepi, stabilizer, complexity,
    /// invariants, equivariant
    command: String,
    /// Input job document
    input: PathBuf,
    /// Stage cap for canonical sequences
    #[arg(long)]
    max_stages: Option<usize>,
    /// Cap on s-pairs per basis computation
    #[arg(long)]
    budget_spairs: Option<u64>,
    /// Cap on terms held per basis computation
    #[arg(long)]
    budget_terms: Option<u64>,
    /// Also write the report as JSON to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let Some(command) = Command::parse(&args.command) else {
        eprintln!("unknown command `{}`", args.command);
        return ExitCode::from(EXIT_VALIDATION as u8);
    };
    let source = match std::fs::read_to_string(&args.input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.input.display());
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
    };
    let overrides = RunOverrides {
        max_stages: args.max_stages,
        budget_spairs: args.budget_spairs,
        budget_terms: args.budget_terms,
    };
    let outcome = std::panic::catch_unwind(|| run_source(&source, command, &overrides));
    let (report, code) = match outcome {
        Ok(pair) => pair,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            eprintln!("internal invariant violation: {msg}");
            return ExitCode::from(EXIT_INTERNAL as u8);
        }
    };
    print!("{}", report.render_text());
    if let Some(path) = &args.json {
        if let Err(e) = std::fs::write(path, report.render_json()) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
    }
    ExitCode::from(code as u8)
}
