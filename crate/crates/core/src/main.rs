use clap::Parser;

mod cli;

fn main() {
    let parsed = cli::Cli::parse();
    std::process::exit(cli::dispatch(parsed));
}
