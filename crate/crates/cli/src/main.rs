use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use restrained_cli::{run, usage, Cli, Outcome};

fn emit(out: &mut impl Write, v: &serde_json::Value) {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let outcome = match Cli::try_parse() {
        Ok(cli) => run(&cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => usage(e.to_string().trim()),
    };
    let Outcome { status, stdout, stderr } = outcome;
    if let Some(v) = stdout {
        emit(&mut std::io::stdout().lock(), &v);
    }
    if let Some(v) = stderr {
        emit(&mut std::io::stderr().lock(), &v);
    }
    ExitCode::from(status as u8)
}
