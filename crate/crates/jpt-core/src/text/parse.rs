//! Parsers for patch text rows and N-Quads documents.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::patch::{Patch, PatchOp};
use crate::term::{Statement, Term};
use crate::text::scan::Scanner;
use crate::text::{ParseError, ParseErrorKind};

/// Parses one line of patch text. Returns `Ok(None)` for blank and
/// comment-only lines. `line` must not contain line breaks; `line_no` is
/// 1-based and only used in errors.
pub fn parse_row(line: &str, line_no: u32) -> Result<Option<PatchOp>, ParseError> {
    let mut s = Scanner::new(line, line_no);
    s.skip_ws();
    if s.at_logical_end() {
        return Ok(None);
    }
    let opcode_start = s.pos;
    let opcode = s.scan_bare_token();
    let op = match opcode {
        "H" => {
            let key = s.scan_header_key()?;
            let value = s.scan_term(0)?;
            s.expect_dot()?;
            PatchOp::Header { key, value }
        }
        "TX" => {
            s.expect_dot()?;
            PatchOp::TxBegin
        }
        "TC" => {
            s.expect_dot()?;
            PatchOp::TxCommit
        }
        "TA" => {
            s.expect_dot()?;
            PatchOp::TxAbort
        }
        "A" => PatchOp::Add(scan_statement(&mut s)?),
        "D" => PatchOp::Delete(scan_statement(&mut s)?),
        "PA" => {
            let label = s.scan_plain_string()?;
            let iri = s.scan_iri_term()?;
            s.expect_dot()?;
            PatchOp::PrefixAdd { label, iri, graph: None }
        }
        "PD" => {
            let label = s.scan_plain_string()?;
            s.expect_dot()?;
            PatchOp::PrefixDelete { label, iri: String::new(), graph: None }
        }
        other => {
            return Err(s.err_at(opcode_start, ParseErrorKind::UnknownOpcode(other.to_string())));
        }
    };
    s.expect_row_end()?;
    Ok(Some(op))
}

/// Scans the three or four terms of a statement row plus the closing dot.
/// Shared by `A`/`D` rows and N-Quads lines; three terms place the statement
/// in the default graph.
fn scan_statement(s: &mut Scanner<'_>) -> Result<Statement, ParseError> {
    let mut terms: Vec<Term> = Vec::with_capacity(4);
    loop {
        s.skip_ws();
        if s.peek() == Some('.') {
            break;
        }
        if s.at_logical_end() {
            return Err(s.err_here(ParseErrorKind::MissingDot));
        }
        if terms.len() == 4 {
            return Err(s.err_here(ParseErrorKind::WrongTermCount { got: 5 }));
        }
        terms.push(s.scan_term(0)?);
    }
    s.expect_dot()?;
    let graph = match terms.len() {
        3 => Term::DefaultGraph,
        4 => terms.pop().unwrap(),
        got => return Err(s.err_here(ParseErrorKind::WrongTermCount { got })),
    };
    let mut it = terms.into_iter();
    Ok(Statement {
        subject: it.next().unwrap(),
        predicate: it.next().unwrap(),
        object: it.next().unwrap(),
        graph,
    })
}

/// Parses a whole patch text document, stopping at the first syntax error.
pub fn parse_patch_text(input: &str) -> Result<Patch, ParseError> {
    let mut ops = Vec::new();
    for (i, line) in input.lines().enumerate() {
        if let Some(op) = parse_row(line, i as u32 + 1)? {
            ops.push(op);
        }
    }
    Ok(Patch::from(ops))
}

/// Parses a patch text document, skipping rows with recoverable syntax
/// errors. Returns the operations that did parse along with every error in
/// line order.
pub fn parse_patch_text_lenient(input: &str) -> (Patch, Vec<ParseError>) {
    let mut ops = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in input.lines().enumerate() {
        match parse_row(line, i as u32 + 1) {
            Ok(Some(op)) => ops.push(op),
            Ok(None) => {}
            Err(e) => errors.push(e),
        }
    }
    (Patch::from(ops), errors)
}

/// Parses an N-Quads document into a dataset. Lines hold three or four terms
/// and a closing dot; duplicates collapse into the set.
pub fn parse_nquads(input: &str) -> Result<Dataset, ParseError> {
    let mut dataset = Dataset::new();
    for (i, line) in input.lines().enumerate() {
        let mut s = Scanner::new(line, i as u32 + 1);
        s.skip_ws();
        if s.at_logical_end() {
            continue;
        }
        let statement = scan_statement(&mut s)?;
        s.expect_row_end()?;
        dataset.insert(statement);
    }
    Ok(dataset)
}
