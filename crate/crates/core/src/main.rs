use clap::Parser;

use prefixk::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(written) => {
            for path in written {
                println!("{}", path.display());
            }
        }
        Err(e) => {
            eprintln!("prefixk: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
