use std::io::Write;

use clap::Parser;
use twoxor::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(&cli) {
        // A closed pipe (e.g. `| head`) is not an error worth a panic.
        Ok(out) => {
            let _ = writeln!(stdout, "{}", out.trim_end());
        }
        Err(e) => {
            let _ = writeln!(stdout, "{}", e.to_json());
            eprintln!("twoxor: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
