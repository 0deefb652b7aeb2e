use clap::Parser;
use surfwave::cli::{run, Cli};

fn main() {
    std::process::exit(run(&Cli::parse()));
}
