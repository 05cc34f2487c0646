use clap::Parser;
use std::process::ExitCode;

use fracwave_cli::{init_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| run(&cli.command));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            if outcome.failed {
                eprintln!("error: some checks failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
