// `!(x > 0.0)` is the NaN-rejecting form used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod matrix_file;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Context, Failure, Outcome};

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let ctx = Context {
        format: cli.format,
        seed: cli.seed,
    };
    match &cli.command {
        Command::QubitGrid(a) => commands::qubit_grid(&ctx, a),
        Command::AmplifierGrid(a) => commands::amplifier_grid(&ctx, a),
        Command::GaussianZ(a) => commands::gaussian_z(&ctx, a),
        Command::Tsallis(a) => commands::tsallis(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn report(failure: Failure) -> ExitCode {
    match failure {
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Failure::Numeric(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
        Failure::Verification => {
            eprintln!("error: verification failed");
            ExitCode::from(EXIT_VERIFICATION)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return report(Failure::Usage(format!("thread pool: {e}"))),
    };
    let outcome = match pool.install(|| dispatch(&cli)) {
        Ok(o) => o,
        Err(f) => return report(f),
    };
    if let Err(e) = emit(&cli, &outcome.text) {
        return report(Failure::Usage(format!("cannot write output: {e}")));
    }
    match outcome.after {
        Some(f) => report(f),
        None => ExitCode::SUCCESS,
    }
}
