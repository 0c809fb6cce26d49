use clap::Parser;

fn main() {
    let cli = sie_cli::Cli::parse();
    std::process::exit(sie_cli::run(cli));
}
