//! `schur`: exact angular-momentum coefficients, coupled states, Schur transform circuits and
//! their simulation from the command line.

mod commands;
mod error;
mod inputs;
mod report;

use std::cell::Cell;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use commands::{circuit, coupling, ct, gt, pqc, sim};
use error::{CliError, CliResult, EXIT_USAGE};
use report::{sha256_hex, Format, Report, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "schur", version, about = "Coupled angular momentum, PQC states and Schur transform circuits")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every random choice; drawn and printed to stderr when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a run manifest (arguments, seed, output digests) to this file.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact Clebsch-Gordan, 3j and 6j values.
    Coeff(coupling::CoeffArgs),
    /// Amplitude of one basis string in a coupled state.
    Amplitude(coupling::AmplitudeArgs),
    /// Draw basis strings from a coupled state.
    Sample(coupling::SampleArgs),
    /// Check a coupling provider against the coupling axioms.
    ValidateAxioms(coupling::ValidateArgs),
    /// PQC trees: labellings, states and commutation checks.
    #[command(subcommand)]
    Pqc(pqc::PqcCommand),
    /// Synthesize a circuit plan.
    #[command(subcommand)]
    Synth(circuit::SynthCommand),
    /// Two-level gate counts of a plan.
    Counts(circuit::CountsArgs),
    /// Peak qubit counts of the original and log-ancilla Schur transforms.
    QubitTable(circuit::QubitTableArgs),
    /// Run a plan on one basis input.
    Simulate(circuit::SimulateArgs),
    /// Invariant-subspace census of a representation in the PQC basis.
    Blocks(sim::BlocksArgs),
    /// Gelfand-Tsetlin patterns.
    #[command(subcommand)]
    Gt(gt::GtCommand),
    /// Coupled states under basis-preserving operations and one-qubit gates.
    #[command(subcommand)]
    Ct(ct::CtCommand),
}

/// Per-run state shared with the commands.
pub struct Ctx {
    seed: Cell<Option<u64>>,
}

impl Ctx {
    /// A generator seeded from `--seed`, or from a fresh seed that is reported on stderr.
    pub fn rng(&self) -> ChaCha8Rng {
        let seed = self.seed.get().unwrap_or_else(|| {
            let s = rand::rng().random();
            eprintln!("seed: {s}");
            self.seed.set(Some(s));
            s
        });
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed.get()
    }
}

fn dispatch(command: &Command, ctx: &Ctx) -> CliResult<Report> {
    match command {
        Command::Coeff(a) => coupling::coeff(a),
        Command::Amplitude(a) => coupling::amplitude(a),
        Command::Sample(a) => coupling::sample(a, ctx),
        Command::ValidateAxioms(a) => coupling::validate(a),
        Command::Pqc(c) => pqc::run(c),
        Command::Synth(c) => circuit::synth(c),
        Command::Counts(a) => circuit::counts(a),
        Command::QubitTable(a) => circuit::qubit_table(a),
        Command::Simulate(a) => circuit::simulate(a),
        Command::Blocks(a) => sim::blocks(a),
        Command::Gt(c) => gt::run(c),
        Command::Ct(c) => ct::run(c, ctx),
    }
}

fn command_name(argv: &[String]) -> String {
    argv.iter().skip(1).find(|a| !a.starts_with('-')).cloned().unwrap_or_default()
}

fn execute(cli: &Cli, argv: &[String]) -> CliResult<()> {
    let ctx = Ctx { seed: Cell::new(cli.seed) };
    let report = dispatch(&cli.command, &ctx)?;
    let rendered = report.render(cli.format)?;
    let mut outputs = BTreeMap::new();
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &rendered).map_err(|source| CliError::Write { path: path.clone(), source })?;
            outputs.insert(path.display().to_string(), sha256_hex(rendered.as_bytes()));
        }
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(rendered.as_bytes());
            outputs.insert("stdout".to_string(), sha256_hex(rendered.as_bytes()));
        }
    }
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            command: command_name(argv),
            arguments: argv.iter().skip(1).cloned().collect(),
            seed: ctx.seed(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        std::fs::write(path, text).map_err(|source| CliError::Write { path: path.clone(), source })?;
    }
    Ok(())
}

fn fail(code: &str, exit: i32, message: &str) -> ExitCode {
    let doc = serde_json::json!({ "error": code, "exit": exit, "message": message });
    eprintln!("{doc}");
    ExitCode::from(exit as u8)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = e.print();
                    ExitCode::from(EXIT_USAGE as u8)
                }
                ErrorKind::InvalidSubcommand => fail("unknown-subcommand", EXIT_USAGE, e.to_string().trim()),
                _ => fail("usage", EXIT_USAGE, e.to_string().trim()),
            };
        }
    };
    match execute(&cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.code(), e.exit_code(), &e.to_string()),
    }
}
