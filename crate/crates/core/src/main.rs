use clap::Parser;

fn main() {
    let cli = triadwave::cli::Cli::parse();
    std::process::exit(triadwave::cli::execute(cli));
}
