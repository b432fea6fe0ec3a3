use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use congrkit::cli::RunConfig;
use congrkit::commands::run;

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit.code() as u8);
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.primary).map(|_| {
            if let Some(s) = &outcome.summary {
                print!("{s}");
            }
        }),
        None => {
            if let Some(s) = &outcome.summary {
                eprint!("{s}");
            }
            std::io::stdout().write_all(outcome.primary.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: i/o error: {e}");
        return ExitCode::from(3);
    }
    if let Some(m) = &outcome.message {
        eprintln!("{m}");
    }
    ExitCode::from(outcome.exit.code() as u8)
}
