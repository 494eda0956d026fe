//! Textual formats: `.schema` source, `.path` token lists, `.criterion`
//! sidecars and simplified DIMACS. `#` starts a line comment in the first three.

mod path_text;
mod schema_text;

use std::fmt;

use thiserror::Error;

pub use path_text::{parse_path, print_path, CriterionSpec};
pub use schema_text::{parse_schema, print_schema, schema_from_str, ParsedSchema};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub const START: Span = Span { line: 1, col: 1 };
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct SyntaxError {
    pub span: Span,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn at(span: Span, message: impl Into<String>) -> Self {
        SyntaxError {
            span,
            message: message.into(),
        }
    }
}
