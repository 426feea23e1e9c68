use clap::Parser;
use stratawalk_cli::cli::Cli;
use stratawalk_cli::run::{run, RunError};

fn main() {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(match e {
            RunError::Usage(_) => 2,
            RunError::Io(_) => 1,
        });
    }
}
