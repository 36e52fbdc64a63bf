use clap::Parser;

fn main() {
    let cli = nilgrowth::cli::Cli::parse();
    std::process::exit(nilgrowth::cli::run(&cli));
}
