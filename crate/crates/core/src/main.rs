use std::fs;
use std::io::{self, BufReader};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use icsp::cli::{self, ProblemFile, RunOptions};
use icsp::PromptIo;

/// Solve an interactive constraint problem described in FILE.
///
/// Exit status: 0 consistent, 1 inconsistent (or no solution when labeling),
/// 2 usage or parse error.
#[derive(Parser)]
#[command(name = "icsp", version)]
struct Args {
    /// Problem file.
    file: PathBuf,
    /// Print every engine event before the result.
    #[arg(long)]
    trace: bool,
    /// Search for a solution regardless of `option labeling`.
    #[arg(long)]
    label: bool,
    /// Seed for randomized sources (the bundled sources are deterministic).
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 2 } else { 0 });
        }
    };
    let text = match fs::read_to_string(&args.file) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("icsp: {}: {err}", args.file.display());
            return ExitCode::from(2);
        }
    };
    let problem = match ProblemFile::parse(&text) {
        Ok(problem) => problem,
        Err(err) => {
            eprintln!("icsp: {}: {err}", args.file.display());
            return ExitCode::from(2);
        }
    };
    let options = RunOptions {
        trace: args.trace,
        label: args.label,
        seed: args.seed,
    };
    // Prompts go to stderr so that stdout carries only the report.
    let prompt = PromptIo::new(BufReader::new(io::stdin()), io::stderr());
    match cli::run(&problem, &options, &prompt, &mut io::stdout().lock()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("icsp: {err}");
            ExitCode::from(2)
        }
    }
}
