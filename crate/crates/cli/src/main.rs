use clap::Parser;

fn main() {
    let cli = femforge_cli::Cli::parse();
    if let Err(e) = femforge_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
