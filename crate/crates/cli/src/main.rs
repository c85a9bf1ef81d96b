use clap::Parser;
use ecrank_cli::config::Cli;

fn main() {
    let cli = Cli::parse();
    std::process::exit(ecrank_cli::run(cli));
}
