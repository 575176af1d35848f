use clap::Parser;
use toephank::cli;

fn main() {
    let args = cli::Cli::parse();
    let code = match cli::job_from_cli(&args).and_then(|config| cli::run_and_write(&config)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}
