use clap::Parser;

fn main() {
    let cli = oscnet::cli::Cli::parse();
    std::process::exit(oscnet::cli::run(&cli));
}
