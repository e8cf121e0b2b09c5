// Helpers for driving the built binary.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use massey_cli::Report;

pub struct Run {
    pub code: i32,
    pub stdout: String,
}

pub fn massey(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_massey"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
    }
}

/// Runs with `--format structured` and parses the report.
pub fn report(args: &[&str]) -> (i32, Report) {
    let mut full = vec!["--format", "structured"];
    full.extend_from_slice(args);
    let run = massey(&full);
    let report = Report::from_structured(&run.stdout).unwrap_or_else(|e| panic!("{e}: {}", run.stdout));
    assert_eq!(report.exit_code, run.code, "reported and actual exit codes differ");
    (run.code, report)
}

pub fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("massey-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("temp file");
    path
}

pub const CORRUPTED_CONFIG: &str = "\
algebra heisenberg
cap = 4
gen x : 1
gen y : 1
gen z : 1
d z = x*y
config corrupted
cap = 9
bundle c1 = 0 weight = 1
datum tautological
corrupt push 0
";
