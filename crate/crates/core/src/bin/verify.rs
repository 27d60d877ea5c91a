use std::process::ExitCode;

use clap::Parser;
use yangian::catalog::emit_catalog;
use yangian::config::{Cli, Format, RunConfig};
use yangian::runner::run;

const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.catalog {
        print!("{}", emit_catalog());
        return ExitCode::SUCCESS;
    }
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let report = run(&cfg);
    match cfg.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
