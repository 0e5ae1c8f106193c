use std::ffi::OsString;

use clap::{Parser, Subcommand};

use crate::commands;
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{header_lines, provenance, Sink};

#[derive(Debug, Parser)]
#[command(
    name = "subeq",
    version,
    about = "Convex cone subequations: checks, classification and Dirichlet solves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the built-in cones and those of the catalog file.
    Catalog(ExperimentConfig),
    /// Split a matrix file into the irreducible components of a group.
    Decompose(ExperimentConfig),
    /// Positivity, edge, span, support, minimality and dual checks for a cone.
    CheckCone(ExperimentConfig),
    /// Enumerate invariant basic edges and check their symmetry groups.
    Classify(ExperimentConfig),
    /// Perron sweeps for the Dirichlet problem; writes a grid file.
    Solve(ExperimentConfig),
    /// Compare the edge-quadratic envelope with the Perron solution.
    Envelope(ExperimentConfig),
    /// Look for edge quadratics refuting the sub test on a grid file.
    Witness(ExperimentConfig),
}

impl Command {
    fn split(self) -> (&'static str, ExperimentConfig) {
        match self {
            Command::Catalog(c) => ("catalog", c),
            Command::Decompose(c) => ("decompose", c),
            Command::CheckCone(c) => ("check-cone", c),
            Command::Classify(c) => ("classify", c),
            Command::Solve(c) => ("solve", c),
            Command::Envelope(c) => ("envelope", c),
            Command::Witness(c) => ("witness", c),
        }
    }
}

/// Runs the tool; returns the process exit code: 0 on success, 1 when a
/// check fails, 2 on usage errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (command, cfg) = cli.command.split();
    match execute(command, cfg) {
        Ok(failures) => i32::from(failures > 0),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &str, cfg: ExperimentConfig) -> Result<usize, CliError> {
    let cfg = cfg.resolve()?;
    commands::validate(command, &cfg)?;
    if cfg.dry_run {
        eprintln!("{command}: configuration ok");
        return Ok(0);
    }
    let mut sink = Sink::new(&cfg)?;
    sink.record(provenance(command, &cfg))?;
    match command {
        "catalog" => commands::catalog(&cfg, &mut sink)?,
        "decompose" => commands::decompose(&cfg, &mut sink)?,
        "check-cone" => commands::check_cone(&cfg, &mut sink)?,
        "classify" => commands::classify(&cfg, &mut sink)?,
        "solve" => commands::solve(&cfg, &mut sink, &header_lines(command, &cfg))?,
        "envelope" => commands::envelope(&cfg, &mut sink)?,
        "witness" => commands::witness(&cfg, &mut sink)?,
        _ => unreachable!(),
    }
    sink.flush()?;
    Ok(sink.failures())
}
