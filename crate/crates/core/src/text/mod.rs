//! Concrete syntax for sources, contexts, queries and chase instances.
//!
//! Source files start with `@source <id> @confidence <degree>` followed by
//! facts `pred(c1, ..., cn).`; every identifier in a fact is a constant.
//! Context and query files use rule syntax, where identifiers starting with
//! an uppercase letter or `_` are variables and `#Name` forces a constant.
//! `%` starts a comment.

mod lexer;
mod parser;
mod render;

use std::fmt;

use thiserror::Error;

use crate::model::ModelError;

pub use parser::{
    parse_context_file, parse_instance, parse_query, parse_query_file, parse_source_file,
};
pub use render::{
    render_constant, render_context, render_fact_constant, render_instance, render_queries,
    render_query, render_source,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("confidence {0} is outside [0, 1]")]
    ConfidenceOutOfRange(String),
    #[error(transparent)]
    Model(ModelError),
}

/// A diagnostic with its 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: usize, col: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, col, kind }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.kind)
    }
}

impl std::error::Error for ParseError {}
