//! Canonical writers for patch text and N-Quads.

use core::fmt::Write as _;

use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::diff::sort_statements;
use crate::patch::{Patch, PatchOp};
use crate::term::{IriStr, Position, QuotedStr, Statement, Term};

/// A value that cannot be represented in the text format.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WriteErrorKind {
    /// The default-graph marker sits anywhere but the graph position. The
    /// position is absent when the marker is a header value.
    #[error("default-graph marker outside the graph position")]
    MisplacedDefaultGraph { position: Option<Position> },
    /// Header keys must be non-empty single tokens without whitespace,
    /// comment characters, or a leading quote or angle bracket.
    #[error("header key is not a plain token")]
    InvalidHeaderKey,
    /// The label uses characters outside the text syntax for labels.
    #[error("blank node label does not fit the text syntax")]
    InvalidBlankNodeLabel,
    /// The language tag is not `[A-Za-z]+` with `-`-joined alphanumeric
    /// subtags.
    #[error("malformed language tag")]
    InvalidLanguageTag,
}

/// A [`WriteErrorKind`] located by operation index.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("op {op_index}: {kind}")]
pub struct TextWriteError {
    pub op_index: usize,
    pub kind: WriteErrorKind,
}

fn push_term(out: &mut String, term: &Term) {
    let _ = write!(out, "{term}");
}

/// Recursive writability check for one term outside the graph position:
/// no default-graph marker, and labels and language tags that the parser
/// could read back.
pub(crate) fn check_term(term: &Term) -> Result<(), WriteErrorKind> {
    match term {
        Term::DefaultGraph => Err(WriteErrorKind::MisplacedDefaultGraph { position: None }),
        Term::BlankNode(label) if !crate::patch::bnode_label_is_valid(label) => {
            Err(WriteErrorKind::InvalidBlankNodeLabel)
        }
        Term::LiteralLang { lang, .. } if !crate::patch::language_tag_is_valid(lang) => {
            Err(WriteErrorKind::InvalidLanguageTag)
        }
        Term::QuotedTriple(t) => {
            check_term(&t.subject)?;
            check_term(&t.predicate)?;
            check_term(&t.object)
        }
        _ => Ok(()),
    }
}

fn check_statement(st: &Statement) -> Result<(), WriteErrorKind> {
    for position in [Position::Subject, Position::Predicate, Position::Object] {
        check_term(st.term_at(position)).map_err(|kind| match kind {
            WriteErrorKind::MisplacedDefaultGraph { .. } => {
                WriteErrorKind::MisplacedDefaultGraph { position: Some(position) }
            }
            other => other,
        })?;
    }
    if !st.graph.is_default_graph() {
        check_term(&st.graph).map_err(|kind| match kind {
            WriteErrorKind::MisplacedDefaultGraph { .. } => {
                WriteErrorKind::MisplacedDefaultGraph { position: Some(Position::Graph) }
            }
            other => other,
        })?;
    }
    Ok(())
}

fn push_statement_row(out: &mut String, opcode: &str, st: &Statement) {
    out.push_str(opcode);
    out.push(' ');
    push_term(out, &st.subject);
    out.push(' ');
    push_term(out, &st.predicate);
    out.push(' ');
    push_term(out, &st.object);
    if !st.graph.is_default_graph() {
        out.push(' ');
        push_term(out, &st.graph);
    }
    out.push_str(" .\n");
}

/// Appends one canonical text row for the operation. Prefix-operation graph
/// qualifiers are not part of this dialect and are dropped silently, as is
/// the IRI of a `PD` row.
pub fn write_op(op: &PatchOp, out: &mut String) -> Result<(), WriteErrorKind> {
    match op {
        PatchOp::Header { key, value } => {
            if !crate::patch::header_key_is_valid(key) {
                return Err(WriteErrorKind::InvalidHeaderKey);
            }
            check_term(value)?;
            out.push_str("H ");
            out.push_str(key);
            out.push(' ');
            push_term(out, value);
            out.push_str(" .\n");
        }
        PatchOp::TxBegin => out.push_str("TX .\n"),
        PatchOp::TxCommit => out.push_str("TC .\n"),
        PatchOp::TxAbort => out.push_str("TA .\n"),
        PatchOp::Add(st) => {
            check_statement(st)?;
            push_statement_row(out, "A", st);
        }
        PatchOp::Delete(st) => {
            check_statement(st)?;
            push_statement_row(out, "D", st);
        }
        PatchOp::PrefixAdd { label, iri, graph: _ } => {
            let _ = writeln!(out, "PA {} {} .", QuotedStr(label), IriStr(iri));
        }
        PatchOp::PrefixDelete { label, .. } => {
            let _ = writeln!(out, "PD {} .", QuotedStr(label));
        }
    }
    Ok(())
}

/// Renders a whole patch in canonical text form. The output is a pure
/// function of the operation sequence, so equal patches produce identical
/// bytes.
pub fn write_patch_text(patch: &Patch) -> Result<String, TextWriteError> {
    let mut out = String::new();
    for (op_index, op) in patch.ops.iter().enumerate() {
        write_op(op, &mut out).map_err(|kind| TextWriteError { op_index, kind })?;
    }
    Ok(out)
}

/// Appends one N-Quads line for the statement.
pub fn write_statement_nquads(st: &Statement, out: &mut String) -> Result<(), WriteErrorKind> {
    check_statement(st)?;
    push_term(out, &st.subject);
    out.push(' ');
    push_term(out, &st.predicate);
    out.push(' ');
    push_term(out, &st.object);
    if !st.graph.is_default_graph() {
        out.push(' ');
        push_term(out, &st.graph);
    }
    out.push_str(" .\n");
    Ok(())
}

/// Renders a dataset as N-Quads in canonical statement order (lexicographic
/// by rendered subject, predicate, object, then graph).
pub fn write_nquads(dataset: &Dataset) -> Result<String, TextWriteError> {
    let mut statements: Vec<Statement> = dataset.iter().cloned().collect();
    sort_statements(&mut statements);
    let mut out = String::new();
    for (op_index, st) in statements.iter().enumerate() {
        write_statement_nquads(st, &mut out)
            .map_err(|kind| TextWriteError { op_index, kind })?;
    }
    Ok(out)
}
