//! Rendering patches as SPARQL Update requests.
//!
//! Runs of adds become `INSERT DATA` blocks and runs of deletes become
//! `DELETE DATA` blocks; consecutive statements in the same named graph share
//! one `GRAPH` group. Blocks are separated by `;`. Transaction markers close
//! the open block, and header and prefix operations are carried across as
//! `#` comments between requests.

use core::fmt::Write as _;

use alloc::string::String;

use crate::patch::{Patch, PatchOp};
use crate::term::{Position, Statement, Term};
use crate::text::write::{self, WriteErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SparqlErrorKind {
    #[error("subject is neither an IRI nor a blank node")]
    SubjectNotResource,
    #[error("predicate is not an IRI")]
    PredicateNotIri,
    #[error("named graph is not an IRI")]
    GraphNotIri,
    #[error("quoted triples have no ground form here ({position} position)")]
    QuotedTripleUnsupported { position: Position },
    #[error("default-graph marker outside the graph position")]
    MisplacedDefaultGraph,
    #[error("header key is not a plain token")]
    InvalidHeaderKey,
    #[error("blank node label does not fit the text syntax")]
    InvalidBlankNodeLabel,
    #[error("malformed language tag")]
    InvalidLanguageTag,
}

fn map_write_kind(kind: WriteErrorKind) -> SparqlErrorKind {
    match kind {
        WriteErrorKind::MisplacedDefaultGraph { .. } => SparqlErrorKind::MisplacedDefaultGraph,
        WriteErrorKind::InvalidHeaderKey => SparqlErrorKind::InvalidHeaderKey,
        WriteErrorKind::InvalidBlankNodeLabel => SparqlErrorKind::InvalidBlankNodeLabel,
        WriteErrorKind::InvalidLanguageTag => SparqlErrorKind::InvalidLanguageTag,
    }
}

/// A patch operation that cannot be rendered as SPARQL Update.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("op {op_index}: {kind}")]
pub struct SparqlError {
    pub op_index: usize,
    pub kind: SparqlErrorKind,
}

fn check_statement(st: &Statement) -> Result<(), SparqlErrorKind> {
    match &st.subject {
        Term::Iri(_) | Term::BlankNode(_) => {}
        Term::QuotedTriple(_) => {
            return Err(SparqlErrorKind::QuotedTripleUnsupported { position: Position::Subject })
        }
        Term::DefaultGraph => return Err(SparqlErrorKind::MisplacedDefaultGraph),
        _ => return Err(SparqlErrorKind::SubjectNotResource),
    }
    match &st.predicate {
        Term::Iri(_) => {}
        Term::QuotedTriple(_) => {
            return Err(SparqlErrorKind::QuotedTripleUnsupported { position: Position::Predicate })
        }
        Term::DefaultGraph => return Err(SparqlErrorKind::MisplacedDefaultGraph),
        _ => return Err(SparqlErrorKind::PredicateNotIri),
    }
    match &st.object {
        Term::QuotedTriple(_) => {
            return Err(SparqlErrorKind::QuotedTripleUnsupported { position: Position::Object })
        }
        Term::DefaultGraph => return Err(SparqlErrorKind::MisplacedDefaultGraph),
        _ => {}
    }
    match &st.graph {
        Term::DefaultGraph | Term::Iri(_) => {}
        Term::QuotedTriple(_) => {
            return Err(SparqlErrorKind::QuotedTripleUnsupported { position: Position::Graph })
        }
        _ => return Err(SparqlErrorKind::GraphNotIri),
    }
    // Labels and language tags must also survive the trip through text.
    for position in [Position::Subject, Position::Predicate, Position::Object] {
        write::check_term(st.term_at(position)).map_err(map_write_kind)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BlockKind {
    Insert,
    Delete,
}

/// Incremental SPARQL Update renderer. Feed operations in order, then call
/// [`finish`](SparqlUpdateWriter::finish) to close the last block.
#[derive(Debug, Default)]
pub struct SparqlUpdateWriter {
    op_index: usize,
    emitted_block: bool,
    block: Option<BlockKind>,
    graph: Option<Term>,
}

impl SparqlUpdateWriter {
    pub fn new() -> Self {
        Self::default()
    }

    fn close_graph(&mut self, out: &mut String) {
        if self.graph.take().is_some() {
            out.push_str("  }\n");
        }
    }

    fn close_block(&mut self, out: &mut String) {
        if self.block.take().is_some() {
            self.close_graph(out);
            out.push_str("}\n");
        }
    }

    fn statement(
        &mut self,
        kind: BlockKind,
        st: &Statement,
        out: &mut String,
    ) -> Result<(), SparqlErrorKind> {
        check_statement(st)?;
        if self.block != Some(kind) {
            self.close_block(out);
            if self.emitted_block {
                out.push_str(";\n");
            }
            out.push_str(match kind {
                BlockKind::Insert => "INSERT DATA {\n",
                BlockKind::Delete => "DELETE DATA {\n",
            });
            self.block = Some(kind);
            self.emitted_block = true;
        }
        let target = (!st.graph.is_default_graph()).then(|| st.graph.clone());
        if self.graph != target {
            self.close_graph(out);
            if let Some(g) = &target {
                let _ = writeln!(out, "  GRAPH {g} {{");
            }
            self.graph = target;
        }
        let indent = if self.graph.is_some() { "    " } else { "  " };
        let _ = writeln!(out, "{indent}{} {} {} .", st.subject, st.predicate, st.object);
        Ok(())
    }

    fn comment(&mut self, op: &PatchOp, out: &mut String) -> Result<(), SparqlErrorKind> {
        self.close_block(out);
        let mut row = String::new();
        write::write_op(op, &mut row).map_err(map_write_kind)?;
        out.push_str("# ");
        out.push_str(&row);
        Ok(())
    }

    /// Appends the rendering of one operation. Indexes for error reports are
    /// counted internally, in feed order.
    pub fn push_op(&mut self, op: &PatchOp, out: &mut String) -> Result<(), SparqlError> {
        let op_index = self.op_index;
        self.op_index += 1;
        let result = match op {
            PatchOp::Add(st) => self.statement(BlockKind::Insert, st, out),
            PatchOp::Delete(st) => self.statement(BlockKind::Delete, st, out),
            PatchOp::TxBegin | PatchOp::TxCommit | PatchOp::TxAbort => {
                self.close_block(out);
                Ok(())
            }
            PatchOp::Header { .. } | PatchOp::PrefixAdd { .. } | PatchOp::PrefixDelete { .. } => {
                self.comment(op, out)
            }
        };
        result.map_err(|kind| SparqlError { op_index, kind })
    }

    /// Closes the open block. The writer can keep accepting operations
    /// afterwards, so this doubles as a flush.
    pub fn finish(&mut self, out: &mut String) {
        self.close_block(out);
    }
}

/// Renders a whole patch as one SPARQL Update document. An empty patch (or
/// one holding only transaction markers) renders to the empty string.
pub fn write_sparql_update(patch: &Patch) -> Result<String, SparqlError> {
    let mut out = String::new();
    let mut w = SparqlUpdateWriter::new();
    for op in &patch.ops {
        w.push_op(op, &mut out)?;
    }
    w.finish(&mut out);
    Ok(out)
}
