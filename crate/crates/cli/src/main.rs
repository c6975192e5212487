use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ktour_cli::args::{Cli, Command};
use ktour_cli::{run, CliError, Outcome};

fn output_paths(cli: &Cli) -> (Option<PathBuf>, Option<PathBuf>) {
    let sample = match &cli.command {
        Command::Exact(a) => return (a.out.clone(), None),
        Command::Estimate(a) | Command::Histogram(a) => &a.sample,
        Command::Sweep(a) => &a.sample,
        Command::Replay(_) => return (None, None),
    };
    let manifest = sample.manifest.clone().or_else(|| {
        sample.out.as_ref().map(|o| {
            let mut name = o.clone().into_os_string();
            name.push(".manifest.json");
            PathBuf::from(name)
        })
    });
    (sample.out.clone(), manifest)
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), CliError> {
    let (out, manifest_path) = output_paths(cli);
    match out {
        Some(path) => std::fs::write(path, &outcome.stdout)?,
        None => print!("{}", outcome.stdout),
    }
    if let (Some(path), Some(m)) = (manifest_path, &outcome.manifest) {
        m.write(&path)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli, &argv).and_then(|o| emit(&cli, &o)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
