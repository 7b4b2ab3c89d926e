use std::fmt::Display;
use std::io::Write;
use std::process::ExitCode;

use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use unimod::{EstimateReport, Error, IntMatrix, Rational};

use crate::CliError;

pub fn decimal<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn decimals<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Successful command output, fully rendered before anything is written.
pub struct Rendered(String);

impl Rendered {
    pub fn json<T: Serialize>(value: &T) -> Self {
        let mut s = serde_json::to_string(value).expect("reports serialize");
        s.push('\n');
        Rendered(s)
    }

    pub fn csv(reports: &[EstimateReport]) -> Self {
        let mut s = String::from(EstimateReport::CSV_HEADER);
        s.push('\n');
        for r in reports {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        Rendered(s)
    }

    /// MatrixFile text, which `matrix_file::parse` reads back unchanged.
    pub fn matrix(m: &IntMatrix) -> Self {
        Rendered(m.to_string())
    }

    pub fn emit(self) -> ExitCode {
        let mut out = std::io::stdout().lock();
        if out.write_all(self.0.as_bytes()).and_then(|_| out.flush()).is_err() {
            return ExitCode::from(2);
        }
        ExitCode::SUCCESS
    }
}

/// Structured error object; absent fields are omitted.
#[derive(Serialize, Default)]
struct ErrorBody {
    error: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gcd: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    required: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<String>,
    message: String,
}

/// A failed command: a JSON error object on stdout, a one-line message on stderr.
pub struct Output {
    code: u8,
    body: ErrorBody,
}

impl Output {
    pub fn failure(e: CliError) -> Self {
        let message = match &e {
            CliError::Core(err) => err.to_string(),
            CliError::Io(m) | CliError::Usage(m) => m.clone(),
        };
        let (code, body) = match e {
            CliError::Core(Error::Domain(_)) => (2, ErrorBody { error: "Domain", ..Default::default() }),
            CliError::Core(Error::Parse { line, column, .. }) => (
                2,
                ErrorBody {
                    error: "Parse",
                    line: Some(line),
                    column: Some(column),
                    ..Default::default()
                },
            ),
            CliError::Core(Error::NotUnimodular { gcd }) => (
                3,
                ErrorBody {
                    error: "NotUnimodular",
                    gcd: Some(gcd.to_string()),
                    ..Default::default()
                },
            ),
            CliError::Core(Error::BudgetExceeded { required, budget }) => (
                4,
                ErrorBody {
                    error: "BudgetExceeded",
                    required: Some(required),
                    budget: Some(budget.to_string()),
                    ..Default::default()
                },
            ),
            CliError::Io(_) => (2, ErrorBody { error: "Io", ..Default::default() }),
            CliError::Usage(_) => (2, ErrorBody { error: "Usage", ..Default::default() }),
        };
        Output {
            code,
            body: ErrorBody { message, ..body },
        }
    }

    pub fn emit(self) -> ExitCode {
        let _ = Rendered::json(&self.body).emit();
        eprintln!("error: {}", self.body.message);
        ExitCode::from(self.code)
    }
}
