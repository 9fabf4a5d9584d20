use clap::Parser;

use fdcov::cli::{run, Args, StreamConfig};

fn main() {
    let args = Args::parse();
    let code = match StreamConfig::try_from(args).and_then(|cfg| run(&cfg)) {
        Ok(outcome) => outcome.exit_code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}
