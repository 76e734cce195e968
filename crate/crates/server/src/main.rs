use std::process::ExitCode;

use clap::Parser;
use histmap::cli::{run, Cli, EXIT_DOMAIN, EXIT_OK};

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not failures; bad arguments are.
            if e.use_stderr() {
                ExitCode::from(EXIT_DOMAIN)
            } else {
                ExitCode::from(EXIT_OK)
            }
        }
    }
}
