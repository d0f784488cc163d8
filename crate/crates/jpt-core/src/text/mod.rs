//! The line-oriented patch text format, N-Quads input, and SPARQL Update
//! output.
//!
//! A patch text document is a sequence of rows, one per line. Each row is an
//! opcode (`H`, `TX`, `TC`, `TA`, `A`, `D`, `PA`, `PD`), its arguments, and a
//! closing `.`. Blank lines are ignored and `#` starts a comment outside
//! terms. The writer is canonical: single spaces between tokens, ` .` row
//! terminator, `\n` line ending, so equal patches always serialize to
//! identical bytes.

mod scan;

pub mod parse;
pub mod sparql;
pub mod write;

pub use parse::{
    parse_nquads, parse_patch_text, parse_patch_text_lenient, parse_row,
};
pub use sparql::{write_sparql_update, SparqlError, SparqlErrorKind, SparqlUpdateWriter};
pub use write::{
    write_nquads, write_op, write_patch_text, write_statement_nquads, TextWriteError,
    WriteErrorKind,
};

use alloc::string::String;

/// A syntax error, located by 1-based line and character column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: u32,
    pub column: u32,
    pub kind: ParseErrorKind,
}

impl ParseError {
    /// Whether a lenient parse may skip the offending row and continue. Every
    /// syntax error is scoped to its row and therefore recoverable; the fatal
    /// class (I/O failures, for instance) never reaches this type.
    pub fn is_recoverable(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unknown opcode `{0}`")]
    UnknownOpcode(String),
    #[error("expected a term")]
    ExpectedTerm,
    #[error("expected `.` at end of row")]
    MissingDot,
    #[error("content after closing `.`")]
    TrailingContent,
    #[error("statement rows take 3 or 4 terms, found {got}")]
    WrongTermCount { got: usize },
    #[error("IRI not closed with `>`")]
    UnterminatedIri,
    #[error("character {0:?} not allowed in IRI")]
    ForbiddenIriChar(char),
    #[error("string literal not closed")]
    UnterminatedString,
    #[error("quoted triple not closed with `>>`")]
    UnterminatedQuotedTriple,
    #[error("unknown escape sequence")]
    BadEscape,
    #[error("invalid unicode escape")]
    BadUnicodeEscape,
    #[error("malformed language tag")]
    InvalidLangTag,
    #[error("malformed blank node label")]
    BadBlankNodeLabel,
    #[error("expected a string literal")]
    ExpectedString,
    #[error("expected an IRI")]
    ExpectedIri,
    #[error("expected a header key")]
    ExpectedKey,
    #[error("expected a datatype IRI after `^^`")]
    ExpectedDatatype,
    #[error("quoted triples nested too deeply")]
    NestingTooDeep,
}
