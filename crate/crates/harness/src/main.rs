use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use launchpad_harness::{fuzz, load_scenario, replay_with, trace_matrix, Mutation, ReplayOptions};

/// Replay, fuzz and trace the launchpad model.
#[derive(Parser)]
#[command(name = "launchpad", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a scenario file and print or write the report.
    Replay {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-check the invariant suite after every action.
        #[arg(long)]
        check_invariants: bool,
    },
    /// Generate and check random scenarios.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        cases: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Inject a known defect to confirm the checks catch it.
        #[arg(long, value_enum, default_value_t = MutantArg::None)]
        mutant: MutantArg,
    },
    /// Run every lemma check and write the traceability matrix.
    TraceMatrix {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MutantArg {
    None,
    RefundPlusOne,
}

const OK: u8 = 0;
const VIOLATION: u8 = 1;
const USAGE: u8 = 2;

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Replay {
            scenario,
            out,
            check_invariants,
        } => {
            let bytes = fs::read(&scenario)
                .map_err(|e| format!("cannot read {}: {e}", scenario.display()))?;
            let sc = load_scenario(&bytes).map_err(|e| e.to_string())?;
            let opts = ReplayOptions {
                check_invariants,
                ..ReplayOptions::default()
            };
            let report = replay_with(&sc, opts).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &report.to_json())?;
            Ok(if report.passed() { OK } else { VIOLATION })
        }
        Command::Fuzz {
            seed,
            cases,
            out,
            mutant,
        } => {
            let mutation = match mutant {
                MutantArg::None => Mutation::None,
                MutantArg::RefundPlusOne => Mutation::RefundPlusOne,
            };
            let report = fuzz(seed, cases, mutation).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &report.to_json())?;
            Ok(if report.passed() { OK } else { VIOLATION })
        }
        Command::TraceMatrix { out, seed, samples } => {
            let matrix = trace_matrix(seed, samples);
            emit(Some(&out), &matrix.to_json())?;
            Ok(if matrix.passed() { OK } else { VIOLATION })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
