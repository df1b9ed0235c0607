use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use elgamal_map_cli::{run, Cli, CliError};

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    let result = run(&cli).and_then(|outcome| {
        for (path, contents) in &outcome.side_files {
            write_file(path, contents)?;
        }
        match &cli.out {
            Some(path) => write_file(path, &outcome.body)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(outcome.body.as_bytes())
                    .and_then(|()| stdout.flush())
                    .map_err(|source| CliError::Io {
                        path: "<stdout>".into(),
                        source,
                    })?;
            }
        }
        Ok(outcome.status)
    });

    match result {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
