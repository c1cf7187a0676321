use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use dle_core::amplitudes::DLE_CHANNELS;
use dle_core::hilbert::hamiltonian_total;
use dle_core::oracle::{validate_closed_forms, OracleOptions, GATED_CHANNELS};
use dle_core::params::ParamsFile;
use dle_core::report::{validation_csv, validation_json, Report};
use dle_core::sweep::{sweep_grid, sweep_point, Sweep};
use dle_core::{Error, SystemParams};

/// Qubit excitation and entanglement after a sudden cavity-frequency switch.
#[derive(Parser)]
#[command(name = "dle", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Amplitudes, probabilities and entanglement at one parameter point.
    Report {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write the post-switch Hamiltonian (counter-rotating coupling)
        /// as dense CSV.
        #[arg(long, value_name = "PATH")]
        dump_matrix: Option<PathBuf>,
    },
    /// Closed-form measures on a uniform grid of post-switch frequencies.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_negative_numbers = true)]
        omega2_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega2_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare closed forms with exact diagonalization at shrinking coupling.
    Validate {
        #[command(flatten)]
        params: ParamArgs,
        /// Coupling multipliers, strictly descending.
        #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.25")]
        lambda_scales: Vec<f64>,
        /// Include the rotating-wave coupling in the dressed states.
        #[arg(long)]
        with_rwa: bool,
        /// Require every channel to pass, not only the single-excitation one.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args)]
struct ParamArgs {
    /// Cavity frequency before the switch, GHz.
    #[arg(long, allow_negative_numbers = true)]
    omega1_ghz: Option<f64>,
    /// Cavity frequency after the switch, GHz.
    #[arg(long, allow_negative_numbers = true)]
    omega2_ghz: Option<f64>,
    /// Qubit transition frequency, GHz.
    #[arg(long, allow_negative_numbers = true)]
    e0_ghz: Option<f64>,
    /// Qubit-cavity coupling, GHz.
    #[arg(long, allow_negative_numbers = true)]
    lambda_ghz: Option<f64>,
    /// Photon cutoff of the truncated basis [default: 20].
    #[arg(long)]
    nmax: Option<usize>,
    /// JSON parameter file; flags override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    /// Bad input or a solver diagnostic.
    Usage(String),
    /// A validation check failed.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(describe(&e))
    }
}

fn flag(field: &str) -> String {
    format!("--{}", field.replace('_', "-"))
}

fn describe(e: &Error) -> String {
    match e {
        Error::Param { field, reason } if reason == "is required" => {
            format!("missing {} (or \"{field}\" in --config)", flag(field))
        }
        Error::Param { field, reason } => format!("{}: {reason}", flag(field)),
        other => other.to_string(),
    }
}

impl ParamArgs {
    fn merged(&self) -> Result<ParamsFile, Failure> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("--config {}: {e}", path.display())))?;
                ParamsFile::from_json(&text)?
            }
            None => ParamsFile::default(),
        };
        Ok(base.overlay(&ParamsFile {
            omega1_ghz: self.omega1_ghz,
            omega2_ghz: self.omega2_ghz,
            e0_ghz: self.e0_ghz,
            lambda_ghz: self.lambda_ghz,
            nmax: self.nmax,
        }))
    }
}

fn report(params: &ParamArgs, format: Format, dump: Option<&PathBuf>) -> Result<(), Failure> {
    let inputs = params.merged()?;
    let p = inputs.resolve()?;
    let r = Report::build(&p, inputs)?;
    if let Some(path) = dump {
        let csv = hamiltonian_total(&p, p.omega2(), false).to_csv();
        std::fs::write(path, csv).map_err(|e| Failure::Usage(format!("--dump-matrix {}: {e}", path.display())))?;
    }
    if !r.validity.perturbative_ok {
        eprintln!(
            "warning: coupling is not small against every energy denominator (largest ratio {:.3})",
            r.validity.largest()
        );
    }
    print!(
        "{}",
        match format {
            Format::Json => r.to_json(),
            Format::Csv => r.to_csv(),
        }
    );
    Ok(())
}

fn sweep(params: &ParamArgs, min: f64, max: f64, steps: usize, format: Format) -> Result<(), Failure> {
    let mut inputs = params.merged()?;
    // the swept frequency need not be given
    inputs.omega2_ghz = inputs.omega2_ghz.or(Some(max));
    let p: SystemParams = inputs.resolve()?;
    let grid = sweep_grid(min, max, steps)?;
    let points = grid
        .par_iter()
        .map(|&w| sweep_point(&p, w))
        .collect::<Result<Vec<_>, _>>()?;
    let s = Sweep::from_points(p.e0(), points);
    print!(
        "{}",
        match format {
            Format::Json => s.to_json(),
            Format::Csv => s.to_csv(),
        }
    );
    eprintln!("skipped: {}", s.skipped);
    eprintln!(
        "tau_2 monotone on each side of e0: {}",
        if s.tau_2_monotone { "yes" } else { "no" }
    );
    Ok(())
}

fn factors(f: &[f64]) -> String {
    f.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ")
}

fn validate(params: &ParamArgs, scales: &[f64], with_rwa: bool, strict: bool, format: Format) -> Result<(), Failure> {
    let p = params.merged()?.resolve()?;
    let gated: &[(usize, usize)] = if strict { &DLE_CHANNELS } else { &GATED_CHANNELS };
    let v = validate_closed_forms(&p, p.nmax(), scales, OracleOptions { include_rwa: with_rwa })?;
    print!(
        "{}",
        match format {
            Format::Json => validation_json(&v, gated),
            Format::Csv => validation_csv(&v),
        }
    );
    for c in v.checks.iter().filter(|c| !c.passed && !gated.contains(&(c.n, c.m))) {
        eprintln!(
            "note: channel ({};{}) deviation does not shrink (factors {}); not gated without --strict",
            c.n,
            c.m,
            factors(&c.shrink_factors)
        );
    }
    match v.first_failure(gated) {
        Some(c) => Err(Failure::Check(format!(
            "channel ({};{}) deviation shrink factors {} fall short of 3 per halving",
            c.n,
            c.m,
            factors(&c.shrink_factors)
        ))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Report {
            params,
            format,
            dump_matrix,
        } => report(params, *format, dump_matrix.as_ref()),
        Command::Sweep {
            params,
            omega2_min,
            omega2_max,
            steps,
            format,
        } => sweep(params, *omega2_min, *omega2_max, *steps, *format),
        Command::Validate {
            params,
            lambda_scales,
            with_rwa,
            strict,
            format,
        } => validate(params, lambda_scales, *with_rwa, *strict, *format),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("validation failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
