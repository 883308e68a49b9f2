//! Golden-report tests: every example input reproduces its committed report
//! byte-for-byte (outside the timings block), across two consecutive runs.

use std::fs;
use std::path::{Path, PathBuf};

use gcx_cli::jobs::{Command, RunOverrides};
use gcx_cli::report::strip_timings;
use gcx_cli::run_source;

fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn command_of(source: &str) -> Command {
    let line = source
        .lines()
        .map(str::trim)
        .find(|l| l.starts_with("job "))
        .expect("example declares a job");
    Command::parse(line.trim_start_matches("job ").trim()).expect("known command")
}

fn no_overrides() -> RunOverrides {
    RunOverrides {
        max_stages: None,
        budget_spairs: None,
        budget_terms: None,
    }
}

#[test]
fn golden_reports_reproduce() {
    let dir = examples_dir();
    let mut inputs: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().map(|x| x == "gcx").unwrap_or(false))
        .collect();
    inputs.sort();
    assert!(!inputs.is_empty(), "example corpus is missing");
    for input in inputs {
        let source = fs::read_to_string(&input).unwrap();
        let command = command_of(&source);
        let golden_path = input.with_extension("golden");
        let golden = fs::read_to_string(&golden_path)
            .unwrap_or_else(|_| panic!("missing golden for {}", input.display()));

        let (report1, _code1) = run_source(&source, command, &no_overrides());
        let text1 = strip_timings(&report1.render_text());
        assert_eq!(
            text1,
            golden,
            "report drifted from golden for {}",
            input.display()
        );

        // determinism: a second run is byte-identical
        let (report2, _code2) = run_source(&source, command, &no_overrides());
        let text2 = strip_timings(&report2.render_text());
        assert_eq!(text1, text2, "nondeterministic report for {}", input.display());
    }
}

#[test]
fn json_reports_are_deterministic() {
    let dir = examples_dir();
    for name in ["mu2.gcx", "cuspidal.gcx", "counterexample_p2.gcx"] {
        let source = fs::read_to_string(dir.join(name)).unwrap();
        let command = command_of(&source);
        let (r1, _) = run_source(&source, command, &no_overrides());
        let (r2, _) = run_source(&source, command, &no_overrides());
        let strip = |s: String| -> String {
            let v: serde_json::Value = serde_json::from_str(&s).unwrap();
            let mut m = v.as_object().unwrap().clone();
            m.remove("timings");
            serde_json::to_string_pretty(&m).unwrap()
        };
        assert_eq!(strip(r1.render_json()), strip(r2.render_json()), "{name}");
    }
}
