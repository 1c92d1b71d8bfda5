//! Output plumbing: exit-code-bearing errors, atomic file writes, CSV.

use std::fmt;
use std::io::Write;
use std::path::Path;

use qcap_core::Error as CoreError;

/// Command error carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// A named check failed (exit 1).
    Check(String),
    /// Invalid input (exit 2).
    Input(String),
    /// Resource budget exceeded (exit 3).
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Check(msg) => write!(f, "check failed: {msg}"),
            CliError::Input(msg) => write!(f, "invalid input: {msg}"),
            CliError::Budget(msg) => write!(f, "resource budget exceeded: {msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::BudgetExceeded { .. } => CliError::Budget(err.to_string()),
            CoreError::EigNoConvergence => CliError::Check(err.to_string()),
            _ => CliError::Input(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Writes the artifact to `path` atomically (tmp file + rename), or to
/// stdout when no path is given. Content always ends with one LF.
pub fn emit(path: Option<&Path>, content: &str) -> CliResult<()> {
    let mut body = content.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match path {
        Some(path) => {
            let tmp = path.with_extension("tmp");
            {
                let mut file = std::fs::File::create(&tmp)?;
                file.write_all(body.as_bytes())?;
                file.sync_all()?;
            }
            std::fs::rename(&tmp, path)?;
        }
        None => {
            print!("{body}");
        }
    }
    Ok(())
}

/// CSV with a header row, UTF-8, LF line endings. Floats use Rust's
/// shortest round-trip rendering so identical runs are byte-identical.
pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            lines: vec![header.join(",")],
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    pub fn finish(self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

/// Shortest round-trip float rendering.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Parses a comma-separated list of floats.
pub fn parse_f64_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("not a number: {tok:?}")))
        })
        .collect()
}

/// Parses a comma-separated list of positive integers.
pub fn parse_usize_list(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("not a count: {tok:?}")))
        })
        .collect()
}
