mod config;
mod run;

use std::process::ExitCode;

use clap::Parser;

use config::RunConfig;

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(run::EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run::run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sparsekfold: {e}");
            ExitCode::from(e.code())
        }
    }
}
