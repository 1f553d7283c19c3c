use clap::Parser;

fn main() {
    let cli = msdiff::cli::Cli::parse();
    if let Err(e) = msdiff::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
