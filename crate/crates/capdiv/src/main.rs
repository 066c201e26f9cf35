use clap::Parser;

use capdiv::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr();
    if let Err(e) = run(cli, &mut stdout, &mut stderr) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
