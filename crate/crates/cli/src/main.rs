use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod render;

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    // clap exits with 2 on malformed arguments and 0 on --help/--version
    let cli = args::Cli::parse();
    match commands::run(&cli.command) {
        Ok(out) => {
            if let Err(e) = render::emit(cli.format, &out.doc, &out.tables) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
