use clap::Parser;
use polarlat::cli::{main_result, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = main_result(&cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
