use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use asymptote_cli::{execute, Cli};

fn main() -> ExitCode {
    // Usage errors exit 1, not clap's default 2, which means inconclusive here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let run = execute(&cli.command);
    let code = run.report.exit_code();
    let written = match (&run.csv, cli.command.report_path()) {
        (Some(csv), _) => std::io::stdout().write_all(csv.as_bytes()),
        (None, Some(path)) => std::fs::write(path, run.report.to_json()),
        (None, None) => std::io::stdout().write_all(run.report.to_json().as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("asymptote: {e}");
        return ExitCode::from(1);
    }
    if let Some(msg) = run.report.result.get("error").and_then(|e| e.as_str()) {
        eprintln!("asymptote: {msg}");
    }
    ExitCode::from(code as u8)
}
