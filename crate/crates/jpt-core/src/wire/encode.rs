//! Streaming encoder.
//!
//! Operations are validated up front, then staged as complete rows and packed
//! into frames. Output is appended to a caller-owned buffer on every call, so
//! the caller controls how often bytes are drained to their sink; the encoder
//! itself never holds more than the frame being filled.

use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::patch::{header_key_is_valid, Patch, PatchOp};
use crate::term::{Position, Statement, Term, MAX_NESTING_DEPTH};
use crate::wire::lookup::{Acquired, EncoderTable, EntryTooLong, TableKind, MAX_ENTRY_LEN};
use crate::wire::options::{OptionsError, StreamOptions};
use crate::wire::varint::write_varint;
use crate::wire::{kind, tag, MAGIC, MAX_STRING_LEN};

/// Cut a frame early once it holds this many row bytes, regardless of the
/// row limit. Keeps decoder buffering small without changing stream
/// semantics (the row limit is an upper bound, not a target).
const SOFT_FRAME_BYTES: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error(transparent)]
    Options(#[from] OptionsError),
    #[error("named graphs are disabled for this stream")]
    QuadsNotAllowed,
    #[error("quoted triples are disabled for this stream")]
    RdfStarNotAllowed,
    #[error("generalized term in {position} position but generalized terms are disabled")]
    GeneralizedNotAllowed { position: Position },
    /// The position is absent when the marker was a header value.
    #[error("default-graph marker outside the graph position")]
    MisplacedDefaultGraph { position: Option<Position> },
    #[error("datatyped literal but the datatype table has zero capacity")]
    DatatypeTableDisabled,
    /// A single row may not reference more distinct values than a table can
    /// hold at once: the decoder applies entry rows before the row itself,
    /// so reusing a slot within one row would clobber an id the row still
    /// needs.
    #[error("one row needs {needed} distinct {table} entries but the table holds {capacity}")]
    RowNeedsMoreSlots { table: TableKind, needed: usize, capacity: u32 },
    #[error(transparent)]
    EntryTooLong(#[from] EntryTooLong),
    #[error("inline string of {len} bytes exceeds the cap of {MAX_STRING_LEN} bytes")]
    StringTooLong { len: usize },
    #[error("quoted triples nested deeper than {MAX_NESTING_DEPTH}")]
    NestingTooDeep,
    #[error("header key is not a plain token")]
    InvalidHeaderKey,
    #[error("stream already finished")]
    Finished,
}

#[derive(Debug, Clone, Copy)]
enum Table {
    Name,
    Prefix,
    Datatype,
}

/// Distinct table-bound strings referenced by the row being validated.
#[derive(Default)]
struct RowDemand<'a> {
    iris: HashSet<&'a str>,
    datatypes: HashSet<&'a str>,
}

fn collect_term_demand<'a>(term: &'a Term, demand: &mut RowDemand<'a>) {
    match term {
        Term::Iri(iri) => {
            demand.iris.insert(iri);
        }
        Term::LiteralDt { datatype, .. } => {
            demand.datatypes.insert(datatype.as_str());
        }
        Term::QuotedTriple(t) => {
            collect_term_demand(&t.subject, demand);
            collect_term_demand(&t.predicate, demand);
            collect_term_demand(&t.object, demand);
        }
        _ => {}
    }
}

/// Incremental encoder for one stream. Create it, push operations, then call
/// [`finish`](StreamEncoder::finish) to flush the trailing frame. Bytes are
/// appended to the `out` buffer passed to each call.
#[derive(Debug)]
pub struct StreamEncoder {
    options: StreamOptions,
    names: EncoderTable,
    prefixes: EncoderTable,
    datatypes: EncoderTable,
    registers: [Option<Term>; 4],
    /// Complete rows waiting to be packed, with their end offsets.
    staged: Vec<u8>,
    staged_ends: Vec<usize>,
    /// Body of the op row being built (entry rows go straight to `staged`).
    row: Vec<u8>,
    /// Whether the current row's IRIs go through the prefix table. Decided
    /// per row: a row referencing more distinct prefixes than the table
    /// holds sends its IRIs whole through the name table instead.
    split_iris: bool,
    frame: Vec<u8>,
    frame_rows: u32,
    started: bool,
    finished: bool,
    ops: u64,
    bytes_emitted: u64,
}

impl StreamEncoder {
    pub fn new(options: StreamOptions) -> Result<Self, OptionsError> {
        options.validate()?;
        Ok(StreamEncoder {
            names: EncoderTable::new(options.name_table_capacity),
            prefixes: EncoderTable::new(options.prefix_table_capacity),
            datatypes: EncoderTable::new(options.datatype_table_capacity),
            options,
            registers: [None, None, None, None],
            staged: Vec::new(),
            staged_ends: Vec::new(),
            row: Vec::new(),
            split_iris: true,
            frame: Vec::new(),
            frame_rows: 0,
            started: false,
            finished: false,
            ops: 0,
            bytes_emitted: 0,
        })
    }

    pub fn options(&self) -> &StreamOptions {
        &self.options
    }

    /// Operations accepted so far.
    pub fn ops_pushed(&self) -> u64 {
        self.ops
    }

    /// Bytes appended to output buffers so far (magic and flushed frames;
    /// the frame currently being filled is not counted yet).
    pub fn bytes_emitted(&self) -> u64 {
        self.bytes_emitted
    }

    /// Entry rows emitted across the three tables.
    pub fn table_entries(&self) -> u64 {
        self.names.entries() + self.prefixes.entries() + self.datatypes.entries()
    }

    /// Evicting assignments across the three tables.
    pub fn table_evictions(&self) -> u64 {
        self.names.evictions() + self.prefixes.evictions() + self.datatypes.evictions()
    }

    /// Encodes one operation. On error nothing was emitted and no state
    /// changed: validation happens before any table or register is touched.
    pub fn push_op(&mut self, op: &PatchOp, out: &mut Vec<u8>) -> Result<(), EncodeError> {
        if self.finished {
            return Err(EncodeError::Finished);
        }
        self.split_iris = self.validate_op(op)?;
        self.ensure_started(out);
        match op {
            PatchOp::Header { key, value } => {
                self.row.clear();
                put_str(&mut self.row, key);
                self.put_term(value, None);
                self.end_op_row(tag::HEADER);
            }
            PatchOp::TxBegin => self.put_bare_row(tag::TX_BEGIN),
            PatchOp::TxCommit => self.put_bare_row(tag::TX_COMMIT),
            PatchOp::TxAbort => self.put_bare_row(tag::TX_ABORT),
            PatchOp::Add(st) => self.put_statement_row(tag::ADD, st),
            PatchOp::Delete(st) => self.put_statement_row(tag::DELETE, st),
            PatchOp::PrefixAdd { label, iri, graph: _ } => {
                self.row.clear();
                put_str(&mut self.row, label);
                self.put_iri(iri);
                self.end_op_row(tag::PREFIX_ADD);
            }
            PatchOp::PrefixDelete { label, .. } => {
                self.row.clear();
                put_str(&mut self.row, label);
                self.end_op_row(tag::PREFIX_DELETE);
            }
        }
        self.names.end_row();
        self.prefixes.end_row();
        self.datatypes.end_row();
        if let PatchOp::Add(st) | PatchOp::Delete(st) = op {
            self.registers = [
                Some(st.subject.clone()),
                Some(st.predicate.clone()),
                Some(st.object.clone()),
                Some(st.graph.clone()),
            ];
        }
        self.pack_staged(out);
        self.ops += 1;
        Ok(())
    }

    /// Flushes the trailing frame and seals the stream. An empty stream still
    /// gets its magic and options row.
    pub fn finish(&mut self, out: &mut Vec<u8>) -> Result<(), EncodeError> {
        if self.finished {
            return Err(EncodeError::Finished);
        }
        self.ensure_started(out);
        self.pack_staged(out);
        self.flush_frame(out);
        self.finished = true;
        Ok(())
    }

    fn ensure_started(&mut self, out: &mut Vec<u8>) {
        if self.started {
            return;
        }
        self.started = true;
        out.extend_from_slice(&MAGIC);
        self.bytes_emitted += MAGIC.len() as u64;
        write_varint(tag::OPTIONS, &mut self.staged);
        self.options.write_payload(&mut self.staged);
        self.staged_ends.push(self.staged.len());
    }

    // ---- validation (runs before any state change) ----

    /// Checks the operation and returns whether its IRIs should go through
    /// the prefix table (see [`Self::fit_row_demand`]).
    fn validate_op(&self, op: &PatchOp) -> Result<bool, EncodeError> {
        let mut demand = RowDemand::default();
        match op {
            PatchOp::Header { key, value } => {
                if !header_key_is_valid(key) {
                    return Err(EncodeError::InvalidHeaderKey);
                }
                if key.len() > MAX_STRING_LEN {
                    return Err(EncodeError::StringTooLong { len: key.len() });
                }
                if value.nesting_depth() > 0 && !self.options.allows_rdf_star {
                    return Err(EncodeError::RdfStarNotAllowed);
                }
                self.validate_term(value, None)?;
                collect_term_demand(value, &mut demand);
            }
            PatchOp::TxBegin | PatchOp::TxCommit | PatchOp::TxAbort => {}
            PatchOp::Add(st) | PatchOp::Delete(st) => {
                self.validate_statement(st, &mut demand)?;
            }
            PatchOp::PrefixAdd { label, iri, .. } => {
                if label.len() > MAX_STRING_LEN {
                    return Err(EncodeError::StringTooLong { len: label.len() });
                }
                demand.iris.insert(iri);
            }
            PatchOp::PrefixDelete { label, .. } => {
                if label.len() > MAX_STRING_LEN {
                    return Err(EncodeError::StringTooLong { len: label.len() });
                }
            }
        }
        self.fit_row_demand(&demand)
    }

    fn validate_statement<'a>(
        &self,
        st: &'a Statement,
        demand: &mut RowDemand<'a>,
    ) -> Result<(), EncodeError> {
        if let Some(position) = st.misplaced_default_graph() {
            return Err(EncodeError::MisplacedDefaultGraph { position: Some(position) });
        }
        if !st.graph.is_default_graph() && !self.options.allows_quads {
            return Err(EncodeError::QuadsNotAllowed);
        }
        if !self.options.allows_rdf_star {
            let starred = [&st.subject, &st.predicate, &st.object, &st.graph]
                .into_iter()
                .any(|t| t.nesting_depth() > 0);
            if starred {
                return Err(EncodeError::RdfStarNotAllowed);
            }
        }
        if !self.options.allows_generalized {
            if let Some(position) = st.strict_rdf_violation() {
                return Err(EncodeError::GeneralizedNotAllowed { position });
            }
        }
        for position in [Position::Subject, Position::Predicate, Position::Object, Position::Graph]
        {
            let term = st.term_at(position);
            self.validate_term(term, Some(position))?;
            // Fields that collapse to repeat markers touch no table.
            if self.registers[position as usize].as_ref() != Some(term) {
                collect_term_demand(term, demand);
            }
        }
        Ok(())
    }

    /// Decides the row's IRI handling and checks that its distinct-value
    /// demand fits every table. The decoder applies entry rows before the op
    /// row itself, so a row must never need more live ids in one table than
    /// the table has slots; rejecting the row here keeps row construction
    /// free of mid-row slot reuse. A row with too many distinct prefixes has
    /// an escape hatch (IRIs carried whole); names and datatypes do not.
    fn fit_row_demand(&self, demand: &RowDemand<'_>) -> Result<bool, EncodeError> {
        let mut prefixes: HashSet<&str> = HashSet::new();
        let mut names: HashSet<&str> = HashSet::new();
        for iri in &demand.iris {
            let (prefix, name) = crate::wire::split_iri(iri);
            if !prefix.is_empty() {
                prefixes.insert(prefix);
            }
            names.insert(name);
        }
        let split = self.options.prefix_table_capacity > 0
            && prefixes.len() <= self.options.prefix_table_capacity as usize;
        let needed = if split { names.len() } else { demand.iris.len() };
        if needed > self.options.name_table_capacity as usize {
            return Err(EncodeError::RowNeedsMoreSlots {
                table: TableKind::Name,
                needed,
                capacity: self.options.name_table_capacity,
            });
        }
        for iri in &demand.iris {
            let stored = if split {
                let (prefix, name) = crate::wire::split_iri(iri);
                prefix.len().max(name.len())
            } else {
                iri.len()
            };
            if stored > MAX_ENTRY_LEN {
                return Err(EncodeError::EntryTooLong(EntryTooLong { len: stored }));
            }
        }
        if !demand.datatypes.is_empty() {
            let capacity = self.options.datatype_table_capacity;
            if capacity == 0 {
                return Err(EncodeError::DatatypeTableDisabled);
            }
            if demand.datatypes.len() > capacity as usize {
                return Err(EncodeError::RowNeedsMoreSlots {
                    table: TableKind::Datatype,
                    needed: demand.datatypes.len(),
                    capacity,
                });
            }
            for dt in &demand.datatypes {
                if dt.len() > MAX_ENTRY_LEN {
                    return Err(EncodeError::EntryTooLong(EntryTooLong { len: dt.len() }));
                }
            }
        }
        Ok(split)
    }

    fn validate_term(&self, term: &Term, position: Option<Position>) -> Result<(), EncodeError> {
        if term.nesting_depth() > MAX_NESTING_DEPTH {
            return Err(EncodeError::NestingTooDeep);
        }
        self.validate_term_inner(term, position)
    }

    fn validate_term_inner(
        &self,
        term: &Term,
        position: Option<Position>,
    ) -> Result<(), EncodeError> {
        match term {
            // Table-bound lengths (IRI parts, datatypes) are checked against
            // the row demand in fit_row_demand.
            Term::Iri(_) => Ok(()),
            Term::BlankNode(s) | Term::LiteralSimple(s) => check_inline(s),
            Term::LiteralLang { lexical, lang } => {
                check_inline(lexical)?;
                check_inline(lang)
            }
            Term::LiteralDt { lexical, .. } => check_inline(lexical),
            Term::QuotedTriple(t) => {
                self.validate_term_inner(&t.subject, None)?;
                self.validate_term_inner(&t.predicate, None)?;
                self.validate_term_inner(&t.object, None)
            }
            Term::DefaultGraph => {
                if position == Some(Position::Graph) {
                    Ok(())
                } else {
                    Err(EncodeError::MisplacedDefaultGraph { position })
                }
            }
        }
    }

    // ---- row construction (infallible after validation) ----

    fn effective_split<'a>(&self, iri: &'a str) -> (&'a str, &'a str) {
        if self.split_iris {
            crate::wire::split_iri(iri)
        } else {
            ("", iri)
        }
    }

    fn acquire(&mut self, which: Table, value: &str) -> u32 {
        let table = match which {
            Table::Name => &mut self.names,
            Table::Prefix => &mut self.prefixes,
            Table::Datatype => &mut self.datatypes,
        };
        match table.row_acquire(value).expect("entry length prevalidated") {
            Acquired::Hit { id } => id,
            Acquired::Assigned { id, id_field, .. } => {
                let row_tag = match which {
                    Table::Name => tag::NAME_ENTRY,
                    Table::Prefix => tag::PREFIX_ENTRY,
                    Table::Datatype => tag::DT_ENTRY,
                };
                write_varint(row_tag, &mut self.staged);
                write_varint(id_field, &mut self.staged);
                put_str(&mut self.staged, value);
                self.staged_ends.push(self.staged.len());
                id
            }
        }
    }

    fn put_iri(&mut self, iri: &str) {
        let (prefix, name) = self.effective_split(iri);
        let prefix_id = if prefix.is_empty() { 0 } else { self.acquire(Table::Prefix, prefix) };
        let name_id = self.acquire(Table::Name, name);
        self.row.push(kind::IRI);
        write_varint(prefix_id, &mut self.row);
        write_varint(name_id, &mut self.row);
    }

    fn put_term(&mut self, term: &Term, position: Option<Position>) {
        if let Some(p) = position {
            if self.registers[p as usize].as_ref() == Some(term) {
                self.row.push(kind::REPEAT);
                return;
            }
        }
        match term {
            Term::Iri(iri) => self.put_iri(iri),
            Term::BlankNode(label) => {
                self.row.push(kind::BNODE);
                put_str(&mut self.row, label);
            }
            Term::LiteralSimple(lexical) => {
                self.row.push(kind::LITERAL);
                put_str(&mut self.row, lexical);
            }
            Term::LiteralLang { lexical, lang } => {
                self.row.push(kind::LITERAL_LANG);
                put_str(&mut self.row, lexical);
                put_str(&mut self.row, lang);
            }
            Term::LiteralDt { lexical, datatype } => {
                let dt_id = self.acquire(Table::Datatype, datatype);
                self.row.push(kind::LITERAL_DT);
                put_str(&mut self.row, lexical);
                write_varint(dt_id, &mut self.row);
            }
            Term::QuotedTriple(t) => {
                self.row.push(kind::QUOTED);
                self.put_term(&t.subject, None);
                self.put_term(&t.predicate, None);
                self.put_term(&t.object, None);
            }
            Term::DefaultGraph => self.row.push(kind::DEFAULT_GRAPH),
        }
    }

    fn put_statement_row(&mut self, row_tag: u32, st: &Statement) {
        self.row.clear();
        self.put_term(&st.subject, Some(Position::Subject));
        self.put_term(&st.predicate, Some(Position::Predicate));
        self.put_term(&st.object, Some(Position::Object));
        self.put_term(&st.graph, Some(Position::Graph));
        self.end_op_row(row_tag);
    }

    fn put_bare_row(&mut self, row_tag: u32) {
        self.row.clear();
        self.end_op_row(row_tag);
    }

    /// Moves the accumulated op row body into the staging area as one row.
    fn end_op_row(&mut self, row_tag: u32) {
        write_varint(row_tag, &mut self.staged);
        self.staged.extend_from_slice(&self.row);
        self.staged_ends.push(self.staged.len());
    }

    // ---- frame packing ----

    fn pack_staged(&mut self, out: &mut Vec<u8>) {
        if self.staged_ends.is_empty() {
            return;
        }
        let staged = core::mem::take(&mut self.staged);
        let ends = core::mem::take(&mut self.staged_ends);
        let mut start = 0usize;
        for &end in &ends {
            let row = &staged[start..end];
            let over_rows = self.frame_rows >= self.options.frame_row_limit;
            let over_bytes =
                self.frame_rows > 0 && self.frame.len() + row.len() > SOFT_FRAME_BYTES;
            if over_rows || over_bytes {
                self.flush_frame(out);
            }
            self.frame.extend_from_slice(row);
            self.frame_rows += 1;
            start = end;
        }
        self.staged = staged;
        self.staged.clear();
        self.staged_ends = ends;
        self.staged_ends.clear();
    }

    fn flush_frame(&mut self, out: &mut Vec<u8>) {
        if self.frame_rows == 0 {
            return;
        }
        let before = out.len();
        write_varint(self.frame.len() as u32, out);
        out.extend_from_slice(&self.frame);
        self.bytes_emitted += (out.len() - before) as u64;
        self.frame.clear();
        self.frame_rows = 0;
    }
}

fn put_str(buf: &mut Vec<u8>, s: &str) {
    write_varint(s.len() as u32, buf);
    buf.extend_from_slice(s.as_bytes());
}

fn check_inline(s: &str) -> Result<(), EncodeError> {
    if s.len() > MAX_STRING_LEN {
        Err(EncodeError::StringTooLong { len: s.len() })
    } else {
        Ok(())
    }
}

/// Encodes a whole patch as one stream.
pub fn encode_patch(patch: &Patch, options: StreamOptions) -> Result<Vec<u8>, EncodeError> {
    let mut enc = StreamEncoder::new(options)?;
    let mut out = Vec::new();
    for op in &patch.ops {
        enc.push_op(op, &mut out)?;
    }
    enc.finish(&mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn empty_stream_is_magic_plus_options_frame() {
        let bytes = encode_patch(&Patch::new(), StreamOptions::default()).unwrap();
        assert_eq!(
            bytes,
            vec![
                0x4A, 0x50, 0x54, 0x31, // magic
                0x0A, // frame length 10
                0x01, // options row tag
                0x01, // version
                0xA0, 0x1F, // name capacity 4000
                0x80, 0x08, // prefix capacity 1024
                0x20, // datatype capacity 32
                0x80, 0x04, // frame row limit 512
                0x07, // flags: quads | star | generalized
            ]
        );
    }

    #[test]
    fn default_graph_field_is_one_byte() {
        let st = Statement::triple(
            Term::iri("http://example.org/s"),
            Term::iri("http://example.org/p"),
            Term::literal("23"),
        );
        let patch = Patch::from(vec![PatchOp::Add(st)]);
        let bytes = encode_patch(&patch, StreamOptions::default()).unwrap();
        // Entry rows: prefix "http://example.org/" (id 1), names "s" and "p"
        // (ids 1 and 2), then the add row referencing them.
        let add_row: &[u8] = &[
            0x08, // add tag
            0x01, 0x01, 0x01, // subject: IRI prefix 1 name 1
            0x01, 0x01, 0x02, // predicate: IRI prefix 1 name 2
            0x03, 0x02, b'2', b'3', // object: plain literal "23"
            0x07, // graph: default graph, a single byte
        ];
        assert!(
            bytes.windows(add_row.len()).any(|w| w == add_row),
            "add row not found in {bytes:02X?}"
        );
    }

    #[test]
    fn repeated_terms_collapse_to_repeat_markers() {
        let st1 = Statement::triple(
            Term::iri("http://example.org/a"),
            Term::iri("http://example.org/p"),
            Term::literal("1"),
        );
        let mut st2 = st1.clone();
        st2.object = Term::literal("2");
        let patch = Patch::from(vec![PatchOp::Add(st1), PatchOp::Add(st2)]);
        let bytes = encode_patch(&patch, StreamOptions::default()).unwrap();
        // Second add repeats subject, predicate, and graph: tag, then
        // repeat, repeat, literal "2", repeat.
        let second_row: &[u8] = &[0x08, 0x00, 0x00, 0x03, 0x01, b'2', 0x00];
        assert!(
            bytes.windows(second_row.len()).any(|w| w == second_row),
            "collapsed row not found in {bytes:02X?}"
        );
    }

    #[test]
    fn flag_gates_reject_disallowed_shapes() {
        let quad = PatchOp::Add(Statement::new(
            Term::iri("urn:s"),
            Term::iri("urn:p"),
            Term::literal("o"),
            Term::iri("urn:g"),
        ));
        let no_quads = StreamOptions { allows_quads: false, ..Default::default() };
        assert_eq!(
            encode_patch(&Patch::from(vec![quad]), no_quads),
            Err(EncodeError::QuadsNotAllowed)
        );

        let starred = PatchOp::Add(Statement::triple(
            Term::quoted(Term::iri("s"), Term::iri("p"), Term::literal("o")),
            Term::iri("urn:p"),
            Term::literal("x"),
        ));
        let no_star = StreamOptions { allows_rdf_star: false, ..Default::default() };
        assert_eq!(
            encode_patch(&Patch::from(vec![starred]), no_star),
            Err(EncodeError::RdfStarNotAllowed)
        );

        let generalized = PatchOp::Add(Statement::triple(
            Term::literal("s"),
            Term::iri("urn:p"),
            Term::literal("x"),
        ));
        let no_general = StreamOptions { allows_generalized: false, ..Default::default() };
        assert_eq!(
            encode_patch(&Patch::from(vec![generalized]), no_general),
            Err(EncodeError::GeneralizedNotAllowed { position: Position::Subject })
        );
    }

    #[test]
    fn datatype_literal_needs_a_table() {
        let op = PatchOp::Add(Statement::triple(
            Term::iri("urn:s"),
            Term::iri("urn:p"),
            Term::literal_dt("5", "http://www.w3.org/2001/XMLSchema#integer"),
        ));
        let no_dt = StreamOptions { datatype_table_capacity: 0, ..Default::default() };
        assert_eq!(
            encode_patch(&Patch::from(vec![op]), no_dt),
            Err(EncodeError::DatatypeTableDisabled)
        );
    }

    #[test]
    fn rows_with_more_prefixes_than_slots_carry_iris_whole() {
        // Four distinct prefixes against a one-slot prefix table: the row
        // falls back to prefix id 0 with whole IRIs as names. The next row
        // fits the table again and goes back to split form.
        let wide = PatchOp::Add(Statement::new(
            Term::iri("http://a.example/x/s"),
            Term::iri("http://b.example/y/p"),
            Term::iri("http://c.example/z/o"),
            Term::iri("http://d.example/w/g"),
        ));
        let narrow = PatchOp::Add(Statement::triple(
            Term::iri("http://e.example/v/s"),
            Term::iri("http://e.example/v/p"),
            Term::literal("x"),
        ));
        let patch = Patch::from(vec![wide, narrow]);
        let options = StreamOptions { prefix_table_capacity: 1, ..Default::default() };
        let bytes = encode_patch(&patch, options).unwrap();

        let mut dec = crate::wire::decode::StreamDecoder::new();
        dec.feed(&bytes);
        let mut ops = alloc::vec::Vec::new();
        while let Some(op) = dec.poll_op().unwrap() {
            ops.push(op);
        }
        dec.finish().unwrap();
        assert_eq!(ops, patch.ops);
        // Whole-IRI fallback for the first row: four name slots, none of the
        // prefix table; the second row adds its shared prefix plus two names.
        assert_eq!(dec.table_lens(), [6, 1, 0]);
    }

    #[test]
    fn rows_needing_more_names_than_the_table_holds_are_rejected() {
        let quoted = |a: u32, b: u32, c: u32| {
            Term::quoted(
                Term::iri(alloc::format!("urn:v{a}")),
                Term::iri(alloc::format!("urn:v{b}")),
                Term::iri(alloc::format!("urn:v{c}")),
            )
        };
        let op = PatchOp::Add(Statement::triple(
            quoted(0, 1, 2),
            quoted(3, 4, 5),
            quoted(6, 7, 8),
        ));
        let options = StreamOptions {
            prefix_table_capacity: 0,
            name_table_capacity: 8,
            ..Default::default()
        };
        assert_eq!(
            encode_patch(&Patch::from(vec![op]), options),
            Err(EncodeError::RowNeedsMoreSlots {
                table: TableKind::Name,
                needed: 9,
                capacity: 8
            })
        );
    }

    #[test]
    fn rows_needing_more_datatypes_than_the_table_holds_are_rejected() {
        let op = PatchOp::Add(Statement::triple(
            Term::literal_dt("1", "urn:dt:one"),
            Term::iri("urn:p"),
            Term::literal_dt("2", "urn:dt:two"),
        ));
        let options = StreamOptions { datatype_table_capacity: 1, ..Default::default() };
        assert_eq!(
            encode_patch(&Patch::from(vec![op]), options),
            Err(EncodeError::RowNeedsMoreSlots {
                table: TableKind::Datatype,
                needed: 2,
                capacity: 1
            })
        );
    }

    #[test]
    fn repeat_collapsed_fields_do_not_count_against_table_demand() {
        // Second row: subject, predicate, and graph collapse to repeat
        // markers, so only the object's seven fresh IRIs count against the
        // eight-slot name table; counting the collapsed fields too would
        // push the demand to nine and wrongly reject the row.
        let first = PatchOp::Add(Statement::triple(
            Term::iri("urn:s"),
            Term::iri("urn:p"),
            Term::literal("x"),
        ));
        let fresh = |a: u32, b: u32, c: u32| {
            Term::quoted(
                Term::iri(alloc::format!("urn:n{a}")),
                Term::iri(alloc::format!("urn:n{b}")),
                Term::iri(alloc::format!("urn:n{c}")),
            )
        };
        let second = PatchOp::Add(Statement::triple(
            Term::iri("urn:s"),
            Term::iri("urn:p"),
            Term::quoted(fresh(0, 1, 2), fresh(3, 4, 5), Term::iri("urn:n6")),
        ));
        let options = StreamOptions {
            prefix_table_capacity: 0,
            name_table_capacity: 8,
            ..Default::default()
        };
        let patch = Patch::from(vec![first, second]);
        let bytes = encode_patch(&patch, options).unwrap();
        let decoded = crate::wire::decode::decode_patch(&bytes).unwrap();
        assert_eq!(decoded.ops, patch.ops);
    }

    #[test]
    fn misplaced_default_graph_is_rejected() {
        let op = PatchOp::Add(Statement::triple(
            Term::DefaultGraph,
            Term::iri("urn:p"),
            Term::literal("x"),
        ));
        assert_eq!(
            encode_patch(&Patch::from(vec![op]), StreamOptions::default()),
            Err(EncodeError::MisplacedDefaultGraph { position: Some(Position::Subject) })
        );
        let header = PatchOp::Header { key: "k".into(), value: Term::DefaultGraph };
        assert_eq!(
            encode_patch(&Patch::from(vec![header]), StreamOptions::default()),
            Err(EncodeError::MisplacedDefaultGraph { position: None })
        );
    }

    #[test]
    fn failed_push_leaves_encoder_usable() {
        let mut enc = StreamEncoder::new(StreamOptions::default()).unwrap();
        let mut out = Vec::new();
        let bad = PatchOp::Add(Statement::triple(
            Term::DefaultGraph,
            Term::iri("urn:p"),
            Term::literal("x"),
        ));
        assert!(enc.push_op(&bad, &mut out).is_err());
        assert_eq!(enc.table_entries(), 0, "failed push must not touch tables");
        let good = PatchOp::Add(Statement::triple(
            Term::iri("urn:s"),
            Term::iri("urn:p"),
            Term::literal("x"),
        ));
        enc.push_op(&good, &mut out).unwrap();
        enc.finish(&mut out).unwrap();
        assert!(enc.push_op(&good, &mut out).is_err());
    }

    #[test]
    fn frame_row_limit_packs_rows_into_many_frames() {
        let mut ops = vec![];
        for i in 0..10 {
            ops.push(PatchOp::Add(Statement::triple(
                Term::iri(alloc::format!("urn:s{i}")),
                Term::iri("urn:p"),
                Term::literal("x"),
            )));
        }
        let options = StreamOptions { frame_row_limit: 1, ..Default::default() };
        let bytes = encode_patch(&Patch::from(ops), options).unwrap();
        // Walk the frames and check each holds exactly one row by decoding
        // the row tag and comparing against the frame length later in the
        // decoder tests; here just confirm the stream splits into many
        // frames: options + 10 ops + entry rows all alone.
        let mut frames = 0;
        let mut pos = 4;
        while pos < bytes.len() {
            let (len, used) = crate::wire::varint::read_varint(&bytes[pos..]).unwrap();
            pos += used + len as usize;
            frames += 1;
        }
        assert!(frames >= 11, "expected one row per frame, got {frames} frames");
    }
}
