use std::path::PathBuf;
use std::process::ExitCode;

use bgrw_cli::{dispatch, Command, RunContext};
use clap::{Args, Parser, Subcommand};

/// Growth random walk experiments.
#[derive(Parser)]
#[command(name = "bgrw", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run trajectories; write series CSVs and final trees.
    Simulate(RunArgs),
    /// Speed estimates over a list of p.
    Sweep(RunArgs),
    /// Empirical r-ball measures and their TV report.
    Measure(RunArgs),
    /// Walk/loop coupling and block minorant checks.
    Coupling(RunArgs),
    /// Convert a tree snapshot between JSON and DOT.
    Export(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config and BGRW_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (command, args) = match cli.command {
        Cmd::Simulate(a) => (Command::Simulate, a),
        Cmd::Sweep(a) => (Command::Sweep, a),
        Cmd::Measure(a) => (Command::Measure, a),
        Cmd::Coupling(a) => (Command::Coupling, a),
        Cmd::Export(a) => (Command::Export, a),
    };
    let ctx = RunContext::new(args.out.as_deref(), args.workers);
    match dispatch(command, &args.config, &ctx) {
        Ok(report) => {
            for f in report.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("bgrw: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
