use clap::Parser;

use deconvolve::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = execute(cli) {
        eprintln!("error[{}]: {e}", e.category().as_str());
        std::process::exit(e.exit_code());
    }
}
