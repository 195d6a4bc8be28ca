use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ladders::config::{parse_config, FamilyConfig};
use ladders::matrix_io::{format_complex, format_matrix};
use ladders::report::Tolerance;
use ladders::suite::{
    operators, principal_operator, run_suite, sorted_spectrum, write_report, SuiteOptions,
    OPERATOR_NAMES,
};
use ladders::Error;

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ladders",
    version,
    about = "Build finite ladder-operator families and verify their algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check for the family and emit a JSON report.
    Verify {
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the family's operators into this directory.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Replace every default tolerance (also settable via LADDERS_TOL).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print one operator of the family in matrix-file format.
    Dump {
        config: PathBuf,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(OPERATOR_NAMES))]
        what: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the eigenvalues of the family's lowering operator, sorted by
    /// argument and then modulus.
    Spectrum {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Convergence { .. }
        | Error::NonFinite
        | Error::DegenerateSpectrum { .. }
        | Error::DegenerateNormalizer { .. } => EXIT_NUMERIC,
        _ => EXIT_CONFIG,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("ladders: {e}");
    ExitCode::from(exit_code(&e))
}

fn load(path: &Path) -> Result<FamilyConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

fn tolerance(flag: Option<f64>) -> Result<Tolerance, Error> {
    let value = match flag {
        Some(t) => Some(t),
        None => match std::env::var("LADDERS_TOL") {
            Ok(s) => Some(
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::param("LADDERS_TOL", format!("`{s}` is not a number")))?,
            ),
            Err(_) => None,
        },
    };
    match value {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(Error::param(
            "tol",
            format!("{t} must be positive and finite"),
        )),
        Some(t) => Ok(Tolerance::with_override(t)),
        None => Ok(Tolerance::default()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            config,
            out,
            dump_dir,
            seed,
            tol,
        } => verify(&config, out, dump_dir, seed, tol),
        Command::Dump { config, what, seed } => dump(&config, &what, seed),
        Command::Spectrum { config, seed } => spectrum(&config, seed),
    };
    result.unwrap_or_else(fail)
}

fn verify(
    config: &Path,
    out: Option<PathBuf>,
    dump_dir: Option<PathBuf>,
    seed: Option<u64>,
    tol: Option<f64>,
) -> Result<ExitCode, Error> {
    let cfg = load(config)?;
    let opts = SuiteOptions {
        tol: tolerance(tol)?,
        seed,
        dump_dir,
    };
    let report = run_suite(&cfg, &opts)?;
    match &out {
        Some(path) => write_report(&report, path)?,
        None => println!("{}", report.to_json()),
    }
    let failed = report.failures().count();
    eprintln!(
        "{}: {} checks, {} failed, {} skipped",
        report.family_descriptor,
        report.checks.len(),
        failed,
        report.skipped.len()
    );
    for c in report.failures() {
        eprintln!(
            "  FAILED {} (residual {:e} > {:e})",
            c.name, c.residual, c.tolerance
        );
    }
    Ok(if report.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    })
}

fn dump(config: &Path, what: &str, seed: Option<u64>) -> Result<ExitCode, Error> {
    let cfg = load(config)?;
    let opts = SuiteOptions {
        seed,
        ..Default::default()
    };
    let ops = operators(&cfg, &opts)?;
    let Some((_, m)) = ops.iter().find(|(n, _)| *n == what) else {
        let have: Vec<&str> = ops.iter().map(|(n, _)| *n).collect();
        return Err(Error::param(
            "what",
            format!(
                "{} does not provide `{what}` (available: {})",
                cfg.family.kind(),
                have.join(", ")
            ),
        ));
    };
    print!("{}", format_matrix(m)?);
    Ok(ExitCode::SUCCESS)
}

fn spectrum(config: &Path, seed: Option<u64>) -> Result<ExitCode, Error> {
    let cfg = load(config)?;
    let opts = SuiteOptions {
        seed,
        ..Default::default()
    };
    for z in sorted_spectrum(&principal_operator(&cfg, &opts)?)? {
        println!("{}", format_complex(z));
    }
    Ok(ExitCode::SUCCESS)
}
