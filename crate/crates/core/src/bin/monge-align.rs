use std::process::ExitCode;

use clap::Parser;
use monge_align::commands::{self, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            if out.ends_with('\n') {
                print!("{out}");
            } else {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", commands::error_json(&err));
            ExitCode::from(1)
        }
    }
}
