use std::io::Write;
use std::process::ExitCode;

use cjet_cli::{execute, Cli, USAGE_EXIT};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(out) => {
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{}", out.json);
            let _ = writeln!(std::io::stderr(), "{}", out.summary);
            ExitCode::from(out.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}
