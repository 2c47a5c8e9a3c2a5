use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use bellzoo::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("bellzoo: {e}");
            ExitCode::FAILURE
        }
    }
}
