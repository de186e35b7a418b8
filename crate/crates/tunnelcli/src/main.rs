use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tunnelcli::{error_json, exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe downstream is not an error of ours.
            let _ = stdout.write_all(out.stdout.as_bytes());
            if !out.stdout.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
