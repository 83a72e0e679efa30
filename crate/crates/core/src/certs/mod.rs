//! A small line-based certificate language.
//!
//! ```text
//! cert "name"
//! let w = 11/4                      # exact rational binding
//! assert w * 4 == 11 "optional note"
//! check vertex_ab(A=2, B=3/2, M=0, N=0) expect (1, 1/2)
//! ```
//!
//! Every statement is one step of the report. `check` dispatches to a named
//! checker; argument names are validated when the file is parsed.

mod ast;
mod parser;
mod poly_file;
mod run;

use std::path::Path;

use thiserror::Error;

pub use ast::{ArgValue, BinOp, Certificate, Expect, Expr, Keyword, Step, StepKind};
pub use parser::{is_reserved, parse_certificate, CHECKERS};
pub use poly_file::{check_poly_file, IdentityOutcome};
pub use run::{run_certificate, Outcome, RunContext, RunReport, StepReport, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unbound identifier `{name}`")]
    Unbound { line: usize, col: usize, name: String },
    #[error("{line}:{col}: unknown checker `{name}`")]
    UnknownChecker { line: usize, col: usize, name: String },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

impl CertError {
    /// `(line, col)` for errors tied to a source position.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            CertError::Syntax { line, col, .. }
            | CertError::Unbound { line, col, .. }
            | CertError::UnknownChecker { line, col, .. } => Some((*line, *col)),
            CertError::Io { .. } => None,
        }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, CertError> {
    std::fs::read_to_string(path)
        .map_err(|e| CertError::Io { path: path.display().to_string(), msg: e.to_string() })
}

/// Parses and runs a certificate file; `file=` arguments resolve relative to
/// the certificate's directory.
pub fn verify_file(path: &Path) -> Result<RunReport, CertError> {
    let text = read_file(path)?;
    let cert = parse_certificate(&text)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(run_certificate(&cert, &RunContext { base_dir: base }))
}
