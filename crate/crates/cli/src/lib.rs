//! Command-line driver: reads presentations, checks the 4-free hypothesis,
//! builds embeddings, colours elements, runs sweeps, demos and searches,
//! and writes JSON reports.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, no violations |
//! | 1 | violations found |
//! | 2 | bad command line |
//! | 3 | the group has an element of order 4 |
//! | 4 | sample cap or search budget exceeded |
//! | 5 | unreadable or malformed input |

pub mod args;
pub mod commands;
pub mod presentation_file;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::Value;
use sumcol::{
    ColouringError, EmbeddingError, GroupError, PresentationError, SearchError, VerifyError,
};
use thiserror::Error;

use crate::args::{Cli, Command};
use crate::presentation_file::FileError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Violations = 1,
    Usage = 2,
    OrderFour = 3,
    Exceeded = 4,
    BadInput = 5,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: FileError },
    #[error(transparent)]
    Element(#[from] sumcol::group::ElementParseError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Usage(_) => Status::Usage,
            CliError::Embedding(EmbeddingError::HasOrderFour(_)) => Status::OrderFour,
            CliError::Search(SearchError::TooLarge { .. })
            | CliError::Verify(VerifyError::CapExceeded { .. }) => Status::Exceeded,
            _ => Status::BadInput,
        }
    }
}

/// What a command produces: a JSON report, lines for the terminal and the
/// exit status.
pub struct Outcome {
    pub report: Value,
    pub notes: Vec<String>,
    pub status: Status,
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn write_report(report: &Value, output: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

pub fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Embed(a) => commands::embed(a),
        Command::Colour(a) => commands::colour(a),
        Command::Verify(a) => commands::verify(a),
        Command::Demo(a) => commands::demo(a),
        Command::Search(a) => commands::search(a),
    }
}

pub fn run(cli: Cli) -> ExitCode {
    let result = dispatch(&cli.command).and_then(|outcome| {
        write_report(&outcome.report, cli.output.as_deref())?;
        for line in &outcome.notes {
            eprintln!("{line}");
        }
        Ok(outcome.status)
    });
    match result {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.status().into()
        }
    }
}
