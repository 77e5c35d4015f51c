use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use foliation_kit::cli::{exit_code, load_tolerances, run, RunOptions};

#[derive(Parser)]
#[command(name = "foliation-kit", version, about = "Brieskorn modules, pull-back tangent vectors and periods of plane foliations")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the commands listed in a problem file.
    Run {
        problem: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON tolerance record overriding the problem file.
        #[arg(long)]
        tol_file: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include per-command wall-clock seconds.
        #[arg(long)]
        timing: bool,
    },
}

fn main() -> ExitCode {
    let Cmd::Run { problem, seed, tol_file, out, timing } = Cli::parse().command;
    let result = (|| {
        let text = std::fs::read_to_string(&problem)?;
        let tolerances = tol_file.map(|p| std::fs::read_to_string(p).map_err(Into::into).and_then(|t| load_tolerances(&t))).transpose()?;
        let report = run(&text, &RunOptions { seed, tolerances, timing })?;
        let json = report.to_json();
        match &out {
            Some(path) => std::fs::write(path, json + "\n")?,
            None => println!("{json}"),
        }
        Ok::<_, foliation_kit::Error>(report.exit_code)
    })();
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("foliation-kit: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
