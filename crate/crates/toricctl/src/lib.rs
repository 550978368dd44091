//! Command-line front end: problem files in, deterministic reports out.

pub mod commands;
pub mod problem;
pub mod render;

use std::fmt;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use serde_json::{Map, Value};

use toric_core::exactnum::{parse_rational, Rational};
use toric_core::polytope::DEFAULT_MAX_FACETS;

pub use commands::Command;
use problem::InputError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PROPERTY: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A comma-separated list of rationals, e.g. `1/2,3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalList(pub Vec<Rational>);

impl FromStr for RationalList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|x| parse_rational(x.trim()).map_err(|e| format!("{x:?}: {e}")))
            .collect::<Result<_, _>>()
            .map(RationalList)
    }
}

#[derive(Debug, Parser)]
#[command(name = "toricctl", version, about = "Exact analyses of toric contact problem files")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    pub file: std::path::PathBuf,
    /// New lambda for `reslice`, as p/q values separated by commas.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<RationalList>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Sample points for `fat` when ell >= 3.
    #[arg(long)]
    pub samples: Option<usize>,
}

/// Settings that do not come from the problem file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    pub lambda: Option<Vec<Rational>>,
    pub samples: Option<usize>,
    pub max_facets: usize,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            lambda: None,
            samples: None,
            max_facets: DEFAULT_MAX_FACETS,
        }
    }
}

/// Reads `TORICCTL_MAX_FACETS`, clamped to what the library can enumerate.
pub fn max_facets_from_env(value: Option<&str>) -> Result<usize, String> {
    match value {
        None => Ok(DEFAULT_MAX_FACETS),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if (1..=DEFAULT_MAX_FACETS).contains(&n) => Ok(n),
            _ => Err(format!(
                "TORICCTL_MAX_FACETS must be an integer in 1..={DEFAULT_MAX_FACETS}, got {v:?}"
            )),
        },
    }
}

/// What a command produced: the exit code, the report and a message for
/// stderr.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub message: Option<String>,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Outcome {
            code: EXIT_OK,
            report,
            message: None,
        }
    }

    pub fn failed(report: Value, message: impl Into<String>) -> Self {
        Outcome {
            code: EXIT_PROPERTY,
            report,
            message: Some(message.into()),
        }
    }

    pub fn input_error(err: &CliError) -> Self {
        let mut e = Map::new();
        e.insert("kind".into(), Value::String(err.kind.clone()));
        e.insert("message".into(), Value::String(err.message.clone()));
        for (k, v) in &err.fields {
            e.insert(k.clone(), v.clone());
        }
        let mut top = Map::new();
        top.insert("error".into(), Value::Object(e));
        Outcome {
            code: EXIT_INPUT,
            report: Value::Object(top),
            message: Some(err.to_string()),
        }
    }
}

/// An input or validation error with a machine-readable kind.
#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub fields: Vec<(String, Value)>,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.into(),
            message: message.into(),
            fields: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.fields.push((key.into(), value));
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        match &e {
            InputError::Parse { line, column, .. } => CliError::new("ParseError", e.to_string())
                .with("line", Value::from(*line))
                .with("column", Value::from(*column)),
            InputError::Schema { path, .. } => {
                CliError::new("SchemaError", e.to_string()).with("path", Value::String(path.clone()))
            }
        }
    }
}

/// Runs one command on the text of a problem file.
pub fn run_text(command: Command, text: &str, flags: &Flags) -> Outcome {
    let file = match problem::parse(text) {
        Ok(f) => f,
        Err(e) => return Outcome::input_error(&e.into()),
    };
    match commands::dispatch(command, &file, flags) {
        Ok(out) => out,
        Err(e) => Outcome::input_error(&e),
    }
}

/// Bytes for stdout in the requested format.
pub fn render(outcome: &Outcome, command: Command, format: Format) -> String {
    let mut report = outcome.report.clone();
    if let Value::Object(m) = &mut report {
        m.insert("command".into(), Value::String(command.name().into()));
        m.insert("exit_code".into(), Value::from(outcome.code));
    }
    match format {
        Format::Json => problem::emit(&report),
        Format::Text => render::text(&report),
    }
}

/// The whole program minus process exit: returns the exit code and the
/// stdout and stderr text.
pub fn main_with(args: impl IntoIterator<Item = String>, max_facets_env: Option<&str>) -> (i32, String, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            return (code, String::new(), e.render().to_string());
        }
    };
    let max_facets = match max_facets_from_env(max_facets_env) {
        Ok(n) => n,
        Err(msg) => return finish(cli.command, cli.format, &Outcome::input_error(&CliError::new("Config", msg))),
    };
    let text = match std::fs::read_to_string(&cli.file) {
        Ok(t) => t,
        Err(e) => {
            let err = CliError::new("Io", format!("{}: {e}", cli.file.display()));
            return finish(cli.command, cli.format, &Outcome::input_error(&err));
        }
    };
    let flags = Flags {
        lambda: cli.lambda.map(|l| l.0),
        samples: cli.samples,
        max_facets,
    };
    let outcome = run_text(cli.command, &text, &flags);
    finish(cli.command, cli.format, &outcome)
}

fn finish(command: Command, format: Format, outcome: &Outcome) -> (i32, String, String) {
    let stderr = outcome.message.as_ref().map(|m| format!("toricctl: {m}\n")).unwrap_or_default();
    (outcome.code, render(outcome, command, format), stderr)
}
