//! Command-line front end. [`run`] is what the `polaris` binary calls; it is
//! public so tests can drive the CLI in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use polaris_core::series::{decide_automorphism, free_algebra_verdict, word_evaluations, AutomorphismDecision};
use polaris_core::{polarize, PolyMap};
use serde_json::json;
use thiserror::Error;

use crate::catalog::{self, CATALOG};
use crate::parse::{parse_map, ParseError};
use crate::print::{default_names, format_components, format_map, format_polynomial};
use crate::report::{analyze, aut_witness_doc, default_word_len, outcome_name, witness_doc, Bounds, PreconditionError, Subject, SCHEMA_VERSION};
use crate::tensor_json::{tensor_from_json, tensor_to_json, TensorError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "polaris", version, about = "Polarization algebras of homogeneous polynomial maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in example (see `polaris examples`)
    #[arg(long)]
    example: Option<String>,
    /// Map document: a `vars` line followed by one component per line
    #[arg(long)]
    map: Option<PathBuf>,
    /// Structure constants as tensor JSON
    #[arg(long)]
    tensor: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the result to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every test and print a JSON report
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Degree bound for the automorphism decision (default m^(n-1))
        #[arg(long)]
        max_degree: Option<u32>,
        /// Longest word evaluated in the free algebra (default: length of T_6)
        #[arg(long)]
        max_word_len: Option<usize>,
        /// Compositions tried by the map-iteration test
        #[arg(long)]
        max_iter: Option<usize>,
        /// Print verdict lines only
        #[arg(long)]
        quiet: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Print the structure constants of the polarization algebra
    Polarize {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Print the map <X, ..., X> of an algebra given as tensor JSON
    Restitute {
        #[arg(long)]
        tensor: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether X - H is an automorphism and print its inverse
    Invert {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        max_degree: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the words of the one-generated free algebra
    Freealg {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        max_word_len: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// List the built-in examples
    Examples {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Tensor { path: String, source: TensorError },
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("unknown example `{0}`; run `polaris examples` for the list")]
    UnknownExample(String),
    #[error("{0}")]
    Precondition(#[from] PreconditionError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Tensor { .. } | CliError::Read { .. } | CliError::UnknownExample(_) => {
                EXIT_PARSE
            }
            CliError::Write(_) => EXIT_IO,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl From<polaris_core::Error> for CliError {
    fn from(e: polaris_core::Error) -> Self {
        CliError::Precondition(e.into())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn load(source: &Source) -> Result<Subject, CliError> {
    if let Some(name) = &source.example {
        let entry = catalog::catalog(name).ok_or_else(|| CliError::UnknownExample(name.clone()))?;
        return Ok(Subject {
            source: format!("example:{}", entry.name),
            vars: entry.var_names(),
            map: entry.increment(),
            printed_as: Some(entry.orientation),
        });
    }
    if let Some(path) = &source.map {
        let text = read(path)?;
        let (vars, map) =
            parse_map(&text).map_err(|e| CliError::Parse { path: path.display().to_string(), source: e })?;
        return Ok(Subject { source: format!("map:{}", path.display()), vars, map, printed_as: None });
    }
    let path = source.tensor.as_ref().expect("clap requires one source");
    let a = load_tensor(path)?;
    let map = a.restitute();
    Ok(Subject { source: format!("tensor:{}", path.display()), vars: default_names(map.dim()), map, printed_as: None })
}

fn load_tensor(path: &Path) -> Result<polaris_core::SymAlgebra, CliError> {
    let text = read(path)?;
    tensor_from_json(&text).map_err(|e| CliError::Tensor { path: path.display().to_string(), source: e })
}

fn emit(output: &Output, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn homogeneous(map: &PolyMap) -> Result<usize, CliError> {
    Ok(map.require_homogeneous().map_err(PreconditionError::from)?.map_or(2, |d| d as usize))
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { source, max_degree, max_word_len, max_iter, quiet, output } => {
            let subject = load(&source)?;
            let report = analyze(&subject, &Bounds { max_degree, max_word_len, max_iter })?;
            let text = if quiet { report.verdict_lines() } else { report.to_json() };
            emit(&output, &text, stdout)
        }
        Command::Polarize { source, output } => {
            let subject = load(&source)?;
            homogeneous(&subject.map)?;
            emit(&output, &tensor_to_json(&polarize(&subject.map)?), stdout)
        }
        Command::Restitute { tensor, output } => {
            let map = load_tensor(&tensor)?.restitute();
            emit(&output, &format_map(&map, &default_names(map.dim())), stdout)
        }
        Command::Invert { source, max_degree, output } => {
            let subject = load(&source)?;
            homogeneous(&subject.map)?;
            let vars = &subject.vars;
            let doc = match decide_automorphism(&subject.map, max_degree)? {
                AutomorphismDecision::Automorphism { inverse } => json!({
                    "schema": SCHEMA_VERSION,
                    "verdict": "Automorphism",
                    "inverse": format_components(&inverse, vars),
                }),
                AutomorphismDecision::NotAutomorphism(w) => json!({
                    "schema": SCHEMA_VERSION,
                    "verdict": "NotAutomorphism",
                    "witness": aut_witness_doc(&w, vars),
                }),
                AutomorphismDecision::UnknownAtBound { bound, lowest } => json!({
                    "schema": SCHEMA_VERSION,
                    "verdict": "UnknownAtBound",
                    "bound": bound,
                    "witness": lowest.as_ref().map(|w| aut_witness_doc(w, vars)),
                }),
            };
            emit(&output, &serde_json::to_string_pretty(&doc).expect("json"), stdout)
        }
        Command::Freealg { source, max_word_len, output } => {
            let subject = load(&source)?;
            let arity = homogeneous(&subject.map)?;
            let len = max_word_len.unwrap_or_else(|| default_word_len(arity));
            let table = word_evaluations(&subject.map, len)?;
            let verdict = free_algebra_verdict(&table);
            let vars = &subject.vars;
            let levels: Vec<_> = table
                .levels
                .iter()
                .map(|l| {
                    let words: Vec<_> = l
                        .words
                        .iter()
                        .map(|w| {
                            let value: Vec<String> = w.value.iter().map(|p| format_polynomial(p, vars)).collect();
                            json!({ "word": w.word.to_string(), "value": value })
                        })
                        .collect();
                    json!({ "length": l.length, "span_dim": l.span_dim, "words": words })
                })
                .collect();
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "outcome": outcome_name(&verdict.outcome),
                "bound": verdict.bound,
                "at": verdict.at,
                "evidence": verdict.evidence.iter().map(|w| witness_doc(w, vars)).collect::<Vec<_>>(),
                "levels": levels,
            });
            emit(&output, &serde_json::to_string_pretty(&doc).expect("json"), stdout)
        }
        Command::Examples { output } => {
            let mut text = String::new();
            for e in &CATALOG {
                let orientation = match e.orientation {
                    catalog::Orientation::IdentityMinus => "X - H",
                    catalog::Orientation::IdentityPlus => "X + H",
                };
                text.push_str(&format!(
                    "{:<16} n={} m={} printed as {}  {}\n",
                    e.name,
                    e.vars.len(),
                    e.degree,
                    orientation,
                    e.title
                ));
            }
            emit(&output, &text, stdout)
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code. Errors go to standard error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return EXIT_PARSE;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("polaris: {e}");
            e.exit_code()
        }
    }
}
