use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hkrlab_cli::{dispatch, emit, Cli, RunConfig};

/// Exit codes: 0 every verdict passed, 1 some verdict did not pass,
/// 2 usage error, 3 the computation itself failed.
fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cfg = match RunConfig::from_cli(Cli::parse()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match dispatch(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {} failed: {e}", cfg.command.name());
            return ExitCode::from(3);
        }
    };
    let bytes = emit(&report, cfg.format);
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(3);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        for v in report.verdicts.iter().filter(|v| v.verdict != hkrlab::report::Verdict::Pass) {
            eprintln!("{}: {} [{}] {}", v.stage, v.name, v.verdict, v.diagnostics.join("; "));
        }
        ExitCode::from(1)
    }
}
