//! `unimod`: unimodularity analysis, density formulas and sampling experiments.
//!
//! Exit codes: 0 success, 2 usage/parse/domain error, 3 not unimodular,
//! 4 enumeration budget exceeded.

mod render;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use unimod::experiments::DEFAULT_BUDGET;
use unimod::{
    complete_to_gl, convergence_sweep, density_exact, density_limit, estimate_density, exhaustive_density,
    full_rank_minor_gcd, hnf, local_density, matrix_file, snf, verify_local_density, zeta, BoxSpec, Error,
    IntMatrix, PrimeSet,
};

use render::{Output, Rendered};

#[derive(Parser)]
#[command(name = "unimod", version, about = "Unimodular integer matrices and their density")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a matrix file ("-" reads standard input).
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Unimodular)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Matrix printed by `--format matrix`; defaults to H, S or M.
        #[arg(long, value_enum)]
        part: Option<Part>,
    },
    /// Density of unimodular k×n matrices.
    Density {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Limit density for codimension d = n - k.
    Limit {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Riemann zeta at an integer j ≥ 2.
    Zeta {
        #[arg(long)]
        j: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Exact density of matrices of full rank modulo every prime in a set.
    Local {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
    },
    /// Monte Carlo estimate over the box [-bound, bound).
    Estimate {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact density by enumerating the whole box.
    Exhaustive {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// One estimate per bound; small boxes are enumerated exactly.
    Sweep {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_delimiter = ',', required = true)]
        bounds: Vec<u64>,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Enumerate all matrices over Z/pZ and compare with the local density.
    VerifyLocal {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(clap::Args)]
struct Shape {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Unimodular,
    Hnf,
    Snf,
    Complete,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    /// Plain MatrixFile text (analyze only).
    Matrix,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Part {
    H,
    U,
    S,
    L,
    R,
    M,
}

#[derive(Serialize)]
struct UnimodularReport {
    unimodular: bool,
    #[serde(serialize_with = "render::decimal")]
    minor_gcd: BigInt,
}

#[derive(Serialize)]
struct CompletionReport {
    #[serde(rename = "M")]
    m: IntMatrix,
}

#[derive(Serialize)]
struct LocalReport {
    #[serde(serialize_with = "render::decimals")]
    primes: Vec<u64>,
    k: u32,
    n: u32,
    #[serde(serialize_with = "render::decimal")]
    value: unimod::Rational,
    approx: f64,
}

fn read_matrix(file: &PathBuf) -> Result<IntMatrix, CliError> {
    let text = if file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?
    };
    Ok(matrix_file::parse(&text)?)
}

enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn analyze(file: &PathBuf, mode: Mode, format: Format, part: Option<Part>) -> Result<Rendered, CliError> {
    let a = read_matrix(file)?;
    let pick = |default: Part, allowed: &[Part]| -> Result<Part, CliError> {
        let p = part.unwrap_or(default);
        if allowed.contains(&p) {
            Ok(p)
        } else {
            Err(CliError::Usage("--part does not name a matrix produced by this mode".into()))
        }
    };
    match (mode, format) {
        (_, Format::Csv) => Err(CliError::Usage("csv output is available for estimate and sweep".into())),
        (Mode::Unimodular, Format::Matrix) => {
            Err(CliError::Usage("--format matrix needs --mode hnf, snf or complete".into()))
        }
        (_, Format::Json) if part.is_some() => Err(CliError::Usage("--part requires --format matrix".into())),
        (Mode::Unimodular, Format::Json) => {
            let gcd = full_rank_minor_gcd(&a)?;
            Ok(Rendered::json(&UnimodularReport {
                unimodular: gcd == BigInt::from(1),
                minor_gcd: gcd,
            }))
        }
        (Mode::Hnf, Format::Json) => Ok(Rendered::json(&hnf(&a)?)),
        (Mode::Hnf, Format::Matrix) => {
            let res = hnf(&a)?;
            Ok(Rendered::matrix(match pick(Part::H, &[Part::H, Part::U])? {
                Part::H => &res.h,
                _ => &res.u,
            }))
        }
        (Mode::Snf, Format::Json) => Ok(Rendered::json(&snf(&a)?)),
        (Mode::Snf, Format::Matrix) => {
            let res = snf(&a)?;
            Ok(Rendered::matrix(match pick(Part::S, &[Part::S, Part::L, Part::R])? {
                Part::S => &res.s,
                Part::L => &res.l,
                _ => &res.r,
            }))
        }
        (Mode::Complete, format) => {
            let m = complete_to_gl(&a)?;
            if format == Format::Matrix {
                pick(Part::M, &[Part::M])?;
                Ok(Rendered::matrix(&m))
            } else {
                Ok(Rendered::json(&CompletionReport { m }))
            }
        }
    }
}

fn json_only(format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        _ => Err(CliError::Usage("this command supports only --format json".into())),
    }
}

fn run(command: Command) -> Result<Rendered, CliError> {
    match command {
        Command::Analyze {
            file,
            mode,
            format,
            part,
        } => analyze(&file, mode, format, part),
        Command::Density { k, n, tol } => Ok(Rendered::json(&density_exact(k, n, tol)?)),
        Command::Limit { d, tol } => Ok(Rendered::json(&density_limit(d, tol)?)),
        Command::Zeta { j, tol } => Ok(Rendered::json(&zeta(j, tol)?)),
        Command::Local { primes, k, n } => {
            let set = PrimeSet::new(primes.clone())?;
            let value = local_density(&set, k, n)?;
            let approx = render::rational_to_f64(&value);
            Ok(Rendered::json(&LocalReport {
                primes,
                k,
                n,
                value,
                approx,
            }))
        }
        Command::Estimate {
            shape,
            bound,
            samples,
            seed,
            shards,
            format,
        } => {
            let rep = estimate_density(BoxSpec::new(shape.k, shape.n, bound)?, samples, seed, shards)?;
            match format {
                Format::Csv => Ok(Rendered::csv(std::slice::from_ref(&rep))),
                f => json_only(f).map(|_| Rendered::json(&rep)),
            }
        }
        Command::Exhaustive { shape, bound, budget } => Ok(Rendered::json(&exhaustive_density(
            BoxSpec::new(shape.k, shape.n, bound)?,
            budget,
        )?)),
        Command::Sweep {
            shape,
            bounds,
            samples,
            seed,
            shards,
            format,
        } => {
            let reps = convergence_sweep(shape.k, shape.n, &bounds, samples, seed, shards)?;
            match format {
                Format::Csv => Ok(Rendered::csv(&reps)),
                f => json_only(f).map(|_| Rendered::json(&reps)),
            }
        }
        Command::VerifyLocal { p, shape, budget } => {
            Ok(Rendered::json(&verify_local_density(p, shape.k, shape.n, budget)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => out.emit(),
        Err(e) => Output::failure(e).emit(),
    }
}
