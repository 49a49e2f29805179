use std::fmt;
use std::path::PathBuf;

use crate::model::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown state {0:?}")]
    UnknownState(String),

    #[error("unknown {kind} symbol {name:?}")]
    UnknownSymbol { kind: SymbolKind, name: String },

    #[error("secret set must be strict subset of the state set")]
    SecretNotStrict,

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("{which} specification is not prefix-closed")]
    NotPrefixClosed { which: &'static str },

    #[error("unsupported language specification: {0}")]
    UnsupportedSpec(String),

    #[error("non-secret initial set is empty while the secret initial set is not")]
    EmptyNonsecretInitial,

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("invalid model: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),

    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Input,
    Output,
    Event,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Input => "input",
            SymbolKind::Output => "output",
            SymbolKind::Event => "event",
        })
    }
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
