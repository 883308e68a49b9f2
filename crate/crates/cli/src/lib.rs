//! Library surface of the command-line front end, exposed so integration
//! and acceptance tests can drive jobs in-process.

pub mod input;
pub mod jobs;
pub mod report;

use gcx_core::Error;
use jobs::{Command, RunOverrides};
use report::Report;

/// Parse a document and run one command against it. Returns the report and
/// the process exit code.
pub fn run_source(
    source: &str,
    command: Command,
    overrides: &RunOverrides,
) -> (Report, i32) {
    // a placeholder field string is replaced once the document parses
    let budget = overrides_budget(overrides);
    match input::parse_document(source, &budget) {
        Ok(doc) => {
            // `validate` runs on any document; other commands must match the
            // command declared by the job block
            if command != Command::Validate {
                if let Some(declared) = &doc.job.command {
                    if declared != command.name() {
                        let mut report =
                            Report::new(command.name(), doc.field.to_string());
                        report.status = "error".into();
                        report.error = Some(format!(
                            "job block declares command `{declared}`, invoked as `{}`",
                            command.name()
                        ));
                        return (report, jobs::EXIT_VALIDATION);
                    }
                }
            }
            jobs::run(&doc, command, overrides)
        }
        Err(e) => {
            let mut report = Report::new(command.name(), "-".into());
            report.status = "error".into();
            report.error = Some(e.to_string());
            let code = match &e {
                Error::Internal(_) => jobs::EXIT_INTERNAL,
                _ => jobs::EXIT_VALIDATION,
            };
            (report, code)
        }
    }
}

fn overrides_budget(overrides: &RunOverrides) -> gcx_core::Budget {
    let mut budget = gcx_core::Budget::default();
    if let Some(n) = overrides.budget_spairs {
        budget.max_spairs = n;
    }
    if let Some(n) = overrides.budget_terms {
        budget.max_terms = n;
    }
    budget
}
