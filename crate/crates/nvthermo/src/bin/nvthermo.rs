use clap::Parser;

fn main() {
    let cli = nvthermo::cli::Cli::parse();
    if let Err(e) = nvthermo::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
