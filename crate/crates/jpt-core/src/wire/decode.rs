//! Streaming decoder.
//!
//! Input arrives in arbitrary chunks through [`StreamDecoder::feed`];
//! [`StreamDecoder::poll_op`] yields operations as soon as they are complete.
//! The decoder buffers at most one frame plus the chunk that completed it, so
//! memory stays bounded by the encoder's frame size no matter how long the
//! stream runs. All errors are fatal: a stream that misbehaves once cannot be
//! trusted afterwards, because the lookup tables may have diverged.

use alloc::string::String;
use alloc::vec::Vec;

use crate::patch::{Patch, PatchOp};
use crate::term::{Position, Statement, Term, MAX_NESTING_DEPTH};
use crate::wire::lookup::{DecoderTable, TableError, TableKind, MAX_ENTRY_LEN};
use crate::wire::options::{OptionsError, StreamOptions, FORMAT_VERSION, KNOWN_FLAGS};
use crate::wire::varint::{read_varint, VarintError};
use crate::wire::{kind, tag, MAGIC, MAX_FRAME_LEN, MAX_STRING_LEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DecodeErrorKind {
    #[error("input does not start with the JPT1 magic")]
    BadMagic,
    #[error("input ended before the magic bytes")]
    UnexpectedEof,
    #[error("the stream's first row must declare its options")]
    MissingOptions,
    #[error("options declared twice")]
    DuplicateOptions,
    #[error("unsupported format version {version}")]
    UnsupportedVersion { version: u32 },
    #[error("invalid options: {0}")]
    BadOptions(OptionsError),
    #[error("unknown option flag bits {flags:#x}")]
    UnknownFlags { flags: u32 },
    #[error("unknown row tag {tag}")]
    UnknownRowTag { tag: u32 },
    #[error("unknown term kind {kind}")]
    UnknownTermKind { kind: u8 },
    #[error("varint is longer than its value needs")]
    VarintOverlong,
    #[error("varint exceeds 32 bits")]
    VarintOverflow,
    #[error("row payload runs past the end of its frame")]
    TruncatedRow,
    #[error("input ends inside a frame")]
    TruncatedFrame,
    #[error("frame of {len} bytes exceeds the {MAX_FRAME_LEN}-byte cap")]
    OversizedFrame { len: u32 },
    #[error("frame holds more rows than the declared limit of {limit}")]
    FrameRowLimitExceeded { limit: u32 },
    #[error("string of {len} bytes exceeds the cap of {max} bytes")]
    StringTooLong { len: usize, max: usize },
    #[error("string is not valid UTF-8")]
    InvalidUtf8,
    #[error("{table} id {id} was never assigned")]
    LookupUnset { table: TableKind, id: u32 },
    #[error("{table} id {id} is beyond the declared capacity of {capacity}")]
    LookupOutOfRange { table: TableKind, id: u32, capacity: u32 },
    #[error("{table} id 0 where a concrete id is required")]
    ZeroLookupId { table: TableKind },
    #[error("repeat marker in the {position} field before any statement")]
    EmptyRegisterRepeat { position: Position },
    #[error("repeat marker outside a statement field")]
    RepeatNotAllowed,
    #[error("default-graph marker outside the graph position")]
    MisplacedDefaultGraph,
    #[error("prefix target is not an IRI")]
    ExpectedIriTerm,
    #[error("quoted triples nested deeper than {MAX_NESTING_DEPTH}")]
    NestingTooDeep,
}

/// A decode failure, located by frame, row within the frame, and absolute
/// byte offset of the point the decoder had consumed up to.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("frame {frame}, row {row}, byte {offset}: {kind}")]
pub struct DecodeError {
    pub frame: u64,
    pub row: u32,
    pub offset: u64,
    pub kind: DecodeErrorKind,
}

fn table_error(table: TableKind, e: TableError) -> DecodeErrorKind {
    match e {
        TableError::ZeroId => DecodeErrorKind::ZeroLookupId { table },
        TableError::IdOutOfRange { id, capacity } => {
            DecodeErrorKind::LookupOutOfRange { table, id, capacity }
        }
        TableError::IdUnset { id } => DecodeErrorKind::LookupUnset { table, id },
    }
}

/// Cursor over one frame's remaining bytes. Hitting the end mid-payload is a
/// row truncation: rows never straddle frames.
struct RowReader<'a> {
    slice: &'a [u8],
    pos: usize,
}

impl<'a> RowReader<'a> {
    fn new(slice: &'a [u8]) -> Self {
        RowReader { slice, pos: 0 }
    }

    fn used(&self) -> usize {
        self.pos
    }

    fn varint(&mut self) -> Result<u32, DecodeErrorKind> {
        let (value, used) = read_varint(&self.slice[self.pos..]).map_err(|e| match e {
            VarintError::Truncated => DecodeErrorKind::TruncatedRow,
            VarintError::Overlong => DecodeErrorKind::VarintOverlong,
            VarintError::Overflow => DecodeErrorKind::VarintOverflow,
        })?;
        self.pos += used;
        Ok(value)
    }

    fn byte(&mut self) -> Result<u8, DecodeErrorKind> {
        let b = *self.slice.get(self.pos).ok_or(DecodeErrorKind::TruncatedRow)?;
        self.pos += 1;
        Ok(b)
    }

    fn string(&mut self, max: usize) -> Result<String, DecodeErrorKind> {
        let len = self.varint()? as usize;
        if len > max {
            return Err(DecodeErrorKind::StringTooLong { len, max });
        }
        let end = self.pos + len;
        if end > self.slice.len() {
            return Err(DecodeErrorKind::TruncatedRow);
        }
        let s = core::str::from_utf8(&self.slice[self.pos..end])
            .map_err(|_| DecodeErrorKind::InvalidUtf8)?;
        self.pos = end;
        Ok(s.into())
    }
}

// One of these per row on the hot path; boxing the op to shrink the enum
// would cost an allocation per operation.
#[allow(clippy::large_enum_variant)]
enum RowOutcome {
    Op(PatchOp),
    Entry,
    Options,
}

/// Table and register state, split from the buffering machinery so a row can
/// be decoded out of the input buffer without aliasing it.
#[derive(Debug)]
struct Core {
    options: Option<StreamOptions>,
    names: DecoderTable,
    prefixes: DecoderTable,
    datatypes: DecoderTable,
    registers: [Option<Term>; 4],
}

impl Core {
    fn new() -> Self {
        Core {
            options: None,
            names: DecoderTable::new(0),
            prefixes: DecoderTable::new(0),
            datatypes: DecoderTable::new(0),
            registers: [None, None, None, None],
        }
    }

    fn decode_row(
        &mut self,
        first_row: bool,
        slice: &[u8],
    ) -> Result<(RowOutcome, usize), DecodeErrorKind> {
        let mut r = RowReader::new(slice);
        let row_tag = r.varint()?;
        if first_row != (row_tag == tag::OPTIONS) {
            return Err(if first_row {
                DecodeErrorKind::MissingOptions
            } else {
                DecodeErrorKind::DuplicateOptions
            });
        }
        let outcome = match row_tag {
            tag::OPTIONS => {
                self.read_options(&mut r)?;
                RowOutcome::Options
            }
            tag::NAME_ENTRY => {
                self.read_entry(TableKind::Name, &mut r)?;
                RowOutcome::Entry
            }
            tag::PREFIX_ENTRY => {
                self.read_entry(TableKind::Prefix, &mut r)?;
                RowOutcome::Entry
            }
            tag::DT_ENTRY => {
                self.read_entry(TableKind::Datatype, &mut r)?;
                RowOutcome::Entry
            }
            tag::TX_BEGIN => RowOutcome::Op(PatchOp::TxBegin),
            tag::TX_COMMIT => RowOutcome::Op(PatchOp::TxCommit),
            tag::TX_ABORT => RowOutcome::Op(PatchOp::TxAbort),
            tag::ADD | tag::DELETE => {
                let st = self.read_statement(&mut r)?;
                self.registers = [
                    Some(st.subject.clone()),
                    Some(st.predicate.clone()),
                    Some(st.object.clone()),
                    Some(st.graph.clone()),
                ];
                RowOutcome::Op(if row_tag == tag::ADD {
                    PatchOp::Add(st)
                } else {
                    PatchOp::Delete(st)
                })
            }
            tag::PREFIX_ADD => {
                let label = r.string(MAX_STRING_LEN)?;
                let iri = self.read_iri_field(&mut r)?;
                RowOutcome::Op(PatchOp::PrefixAdd { label, iri, graph: None })
            }
            tag::PREFIX_DELETE => {
                let label = r.string(MAX_STRING_LEN)?;
                RowOutcome::Op(PatchOp::PrefixDelete {
                    label,
                    iri: String::new(),
                    graph: None,
                })
            }
            tag::HEADER => {
                let key = r.string(MAX_STRING_LEN)?;
                let value = self.read_term(&mut r, None, 0)?;
                RowOutcome::Op(PatchOp::Header { key, value })
            }
            other => return Err(DecodeErrorKind::UnknownRowTag { tag: other }),
        };
        Ok((outcome, r.used()))
    }

    fn read_options(&mut self, r: &mut RowReader<'_>) -> Result<(), DecodeErrorKind> {
        let version = r.varint()?;
        if version != FORMAT_VERSION {
            return Err(DecodeErrorKind::UnsupportedVersion { version });
        }
        let name = r.varint()?;
        let prefix = r.varint()?;
        let datatype = r.varint()?;
        let frame = r.varint()?;
        let flags = r.varint()?;
        if flags & !KNOWN_FLAGS != 0 {
            return Err(DecodeErrorKind::UnknownFlags { flags });
        }
        let options = StreamOptions::from_fields(name, prefix, datatype, frame, flags);
        options.validate().map_err(DecodeErrorKind::BadOptions)?;
        self.names = DecoderTable::new(options.name_table_capacity);
        self.prefixes = DecoderTable::new(options.prefix_table_capacity);
        self.datatypes = DecoderTable::new(options.datatype_table_capacity);
        self.options = Some(options);
        Ok(())
    }

    fn read_entry(&mut self, which: TableKind, r: &mut RowReader<'_>) -> Result<(), DecodeErrorKind> {
        let id_field = r.varint()?;
        let value = r.string(MAX_ENTRY_LEN)?;
        let table = match which {
            TableKind::Name => &mut self.names,
            TableKind::Prefix => &mut self.prefixes,
            TableKind::Datatype => &mut self.datatypes,
        };
        table.apply_entry(id_field, value).map_err(|e| table_error(which, e))?;
        Ok(())
    }

    fn read_statement(&self, r: &mut RowReader<'_>) -> Result<Statement, DecodeErrorKind> {
        let subject = self.read_term(r, Some(Position::Subject), 0)?;
        let predicate = self.read_term(r, Some(Position::Predicate), 0)?;
        let object = self.read_term(r, Some(Position::Object), 0)?;
        let graph = self.read_term(r, Some(Position::Graph), 0)?;
        Ok(Statement::new(subject, predicate, object, graph))
    }

    fn read_term(
        &self,
        r: &mut RowReader<'_>,
        position: Option<Position>,
        depth: usize,
    ) -> Result<Term, DecodeErrorKind> {
        let k = r.byte()?;
        match k {
            kind::REPEAT => {
                let Some(position) = position else {
                    return Err(DecodeErrorKind::RepeatNotAllowed);
                };
                self.registers[position as usize]
                    .clone()
                    .ok_or(DecodeErrorKind::EmptyRegisterRepeat { position })
            }
            kind::IRI => Ok(Term::Iri(self.read_iri_body(r)?)),
            kind::BNODE => Ok(Term::BlankNode(r.string(MAX_STRING_LEN)?)),
            kind::LITERAL => Ok(Term::LiteralSimple(r.string(MAX_STRING_LEN)?)),
            kind::LITERAL_LANG => {
                let lexical = r.string(MAX_STRING_LEN)?;
                let lang = r.string(MAX_STRING_LEN)?;
                Ok(Term::LiteralLang { lexical, lang })
            }
            kind::LITERAL_DT => {
                let lexical = r.string(MAX_STRING_LEN)?;
                let id = r.varint()?;
                if id == 0 {
                    return Err(DecodeErrorKind::ZeroLookupId { table: TableKind::Datatype });
                }
                let datatype = self
                    .datatypes
                    .resolve(id)
                    .map_err(|e| table_error(TableKind::Datatype, e))?
                    .into();
                Ok(Term::LiteralDt { lexical, datatype })
            }
            kind::QUOTED => {
                if depth >= MAX_NESTING_DEPTH {
                    return Err(DecodeErrorKind::NestingTooDeep);
                }
                let subject = self.read_term(r, None, depth + 1)?;
                let predicate = self.read_term(r, None, depth + 1)?;
                let object = self.read_term(r, None, depth + 1)?;
                Ok(Term::quoted(subject, predicate, object))
            }
            kind::DEFAULT_GRAPH => {
                if position == Some(Position::Graph) {
                    Ok(Term::DefaultGraph)
                } else {
                    Err(DecodeErrorKind::MisplacedDefaultGraph)
                }
            }
            other => Err(DecodeErrorKind::UnknownTermKind { kind: other }),
        }
    }

    fn read_iri_body(&self, r: &mut RowReader<'_>) -> Result<String, DecodeErrorKind> {
        let prefix_id = r.varint()?;
        let name_id = r.varint()?;
        if name_id == 0 {
            return Err(DecodeErrorKind::ZeroLookupId { table: TableKind::Name });
        }
        let name = self.names.resolve(name_id).map_err(|e| table_error(TableKind::Name, e))?;
        if prefix_id == 0 {
            return Ok(name.into());
        }
        let prefix =
            self.prefixes.resolve(prefix_id).map_err(|e| table_error(TableKind::Prefix, e))?;
        let mut iri = String::with_capacity(prefix.len() + name.len());
        iri.push_str(prefix);
        iri.push_str(name);
        Ok(iri)
    }

    fn read_iri_field(&self, r: &mut RowReader<'_>) -> Result<String, DecodeErrorKind> {
        let k = r.byte()?;
        if k != kind::IRI {
            return Err(DecodeErrorKind::ExpectedIriTerm);
        }
        self.read_iri_body(r)
    }
}

#[derive(Debug, Clone, Copy)]
enum Stage {
    Magic,
    FrameLen,
    FrameBody { left: usize },
}

/// Incremental decoder for one stream. Feed chunks, poll for operations until
/// `Ok(None)`, then call [`finish`](StreamDecoder::finish) once the input is
/// exhausted to distinguish a clean end from a mid-frame cut.
#[derive(Debug)]
pub struct StreamDecoder {
    buf: Vec<u8>,
    pos: usize,
    fed: u64,
    stage: Stage,
    frame_index: u64,
    row_in_frame: u32,
    rows_total: u64,
    ops_total: u64,
    last_error: Option<DecodeError>,
    core: Core,
}

impl Default for StreamDecoder {
    fn default() -> Self {
        Self::new()
    }
}

impl StreamDecoder {
    pub fn new() -> Self {
        StreamDecoder {
            buf: Vec::new(),
            pos: 0,
            fed: 0,
            stage: Stage::Magic,
            frame_index: 0,
            row_in_frame: 0,
            rows_total: 0,
            ops_total: 0,
            last_error: None,
            core: Core::new(),
        }
    }

    /// Appends a chunk of input. Consumed bytes are dropped first, so the
    /// buffer never grows beyond one frame plus the newest chunk.
    pub fn feed(&mut self, chunk: &[u8]) {
        if self.pos > 0 {
            self.buf.copy_within(self.pos.., 0);
            self.buf.truncate(self.buf.len() - self.pos);
            self.pos = 0;
        }
        self.buf.extend_from_slice(chunk);
        self.fed += chunk.len() as u64;
    }

    /// Options from the stream's first row, once decoded.
    pub fn options(&self) -> Option<&StreamOptions> {
        self.core.options.as_ref()
    }

    /// Bytes fed but not yet consumed.
    pub fn buffered_len(&self) -> usize {
        self.available()
    }

    /// Absolute offset of the next byte the decoder will consume.
    pub fn stream_offset(&self) -> u64 {
        self.fed - self.available() as u64
    }

    pub fn rows_decoded(&self) -> u64 {
        self.rows_total
    }

    pub fn ops_decoded(&self) -> u64 {
        self.ops_total
    }

    /// Entry rows applied across the three tables.
    pub fn table_entries(&self) -> u64 {
        self.core.names.entries() + self.core.prefixes.entries() + self.core.datatypes.entries()
    }

    /// Entry rows that overwrote an occupied slot.
    pub fn table_evictions(&self) -> u64 {
        self.core.names.evictions()
            + self.core.prefixes.evictions()
            + self.core.datatypes.evictions()
    }

    /// Occupied slot counts: name, prefix, datatype.
    pub fn table_lens(&self) -> [usize; 3] {
        [self.core.names.len(), self.core.prefixes.len(), self.core.datatypes.len()]
    }

    fn available(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn fail(&mut self, kind: DecodeErrorKind) -> Result<Option<PatchOp>, DecodeError> {
        let err = DecodeError {
            frame: self.frame_index,
            row: self.row_in_frame,
            offset: self.stream_offset(),
            kind,
        };
        self.last_error = Some(err.clone());
        Err(err)
    }

    /// Yields the next complete operation, `Ok(None)` when more input is
    /// needed. Errors are sticky: once a poll fails, every later poll returns
    /// the same error.
    pub fn poll_op(&mut self) -> Result<Option<PatchOp>, DecodeError> {
        if let Some(e) = &self.last_error {
            return Err(e.clone());
        }
        loop {
            match self.stage {
                Stage::Magic => {
                    if self.available() < MAGIC.len() {
                        return Ok(None);
                    }
                    if self.buf[self.pos..self.pos + MAGIC.len()] != MAGIC {
                        return self.fail(DecodeErrorKind::BadMagic);
                    }
                    self.pos += MAGIC.len();
                    self.stage = Stage::FrameLen;
                }
                Stage::FrameLen => {
                    if self.available() == 0 {
                        return Ok(None);
                    }
                    match read_varint(&self.buf[self.pos..]) {
                        Err(VarintError::Truncated) => return Ok(None),
                        Err(VarintError::Overlong) => {
                            return self.fail(DecodeErrorKind::VarintOverlong)
                        }
                        Err(VarintError::Overflow) => {
                            return self.fail(DecodeErrorKind::VarintOverflow)
                        }
                        Ok((len, used)) => {
                            if len > MAX_FRAME_LEN {
                                return self.fail(DecodeErrorKind::OversizedFrame { len });
                            }
                            self.pos += used;
                            self.row_in_frame = 0;
                            self.stage = Stage::FrameBody { left: len as usize };
                        }
                    }
                }
                Stage::FrameBody { left } => {
                    if left == 0 {
                        if self.core.options.is_none() {
                            // The first frame ended without declaring options.
                            return self.fail(DecodeErrorKind::MissingOptions);
                        }
                        self.frame_index += 1;
                        self.stage = Stage::FrameLen;
                        continue;
                    }
                    // Wait for the whole frame: rows never straddle frames,
                    // and decoding out of a complete frame keeps every row
                    // read a plain slice operation.
                    if self.available() < left {
                        return Ok(None);
                    }
                    if let Some(options) = &self.core.options {
                        if self.row_in_frame >= options.frame_row_limit {
                            return self.fail(DecodeErrorKind::FrameRowLimitExceeded {
                                limit: options.frame_row_limit,
                            });
                        }
                    }
                    let first_row = self.rows_total == 0;
                    let row_slice = &self.buf[self.pos..self.pos + left];
                    match self.core.decode_row(first_row, row_slice) {
                        Err(kind) => return self.fail(kind),
                        Ok((outcome, used)) => {
                            self.pos += used;
                            self.rows_total += 1;
                            self.row_in_frame += 1;
                            self.stage = Stage::FrameBody { left: left - used };
                            if let RowOutcome::Op(op) = outcome {
                                self.ops_total += 1;
                                return Ok(Some(op));
                            }
                        }
                    }
                }
            }
        }
    }

    /// Verifies the stream ended cleanly. Call only after [`poll_op`] has
    /// returned `Ok(None)` with all input fed; a pending error is returned
    /// again here.
    pub fn finish(&self) -> Result<(), DecodeError> {
        if let Some(e) = &self.last_error {
            return Err(e.clone());
        }
        let kind = match self.stage {
            Stage::Magic => Some(DecodeErrorKind::UnexpectedEof),
            Stage::FrameLen => {
                if self.available() > 0 {
                    Some(DecodeErrorKind::TruncatedFrame)
                } else if self.core.options.is_none() {
                    Some(DecodeErrorKind::MissingOptions)
                } else {
                    None
                }
            }
            Stage::FrameBody { .. } => Some(DecodeErrorKind::TruncatedFrame),
        };
        match kind {
            None => Ok(()),
            Some(kind) => Err(DecodeError {
                frame: self.frame_index,
                row: self.row_in_frame,
                offset: self.stream_offset(),
                kind,
            }),
        }
    }
}

/// Decodes a complete in-memory stream.
pub fn decode_patch(bytes: &[u8]) -> Result<Patch, DecodeError> {
    let mut dec = StreamDecoder::new();
    dec.feed(bytes);
    let mut patch = Patch::new();
    while let Some(op) = dec.poll_op()? {
        patch.push(op);
    }
    dec.finish()?;
    Ok(patch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wire::encode::encode_patch;
    use alloc::string::ToString;
    use alloc::vec;

    fn sample_patch() -> Patch {
        Patch::from(vec![
            PatchOp::Header { key: "id".to_string(), value: Term::iri("urn:uuid:0001") },
            PatchOp::TxBegin,
            PatchOp::PrefixAdd {
                label: "ex".to_string(),
                iri: "http://example.org/".to_string(),
                graph: None,
            },
            PatchOp::Add(Statement::triple(
                Term::bnode("sensor001"),
                Term::iri("http://example.org/hasTemperature"),
                Term::literal_dt("23", "http://www.w3.org/2001/XMLSchema#integer"),
            )),
            PatchOp::Delete(Statement::triple(
                Term::bnode("sensor001"),
                Term::iri("http://example.org/hasTemperature"),
                Term::literal_dt("22", "http://www.w3.org/2001/XMLSchema#integer"),
            )),
            PatchOp::Add(Statement::new(
                Term::iri("http://example.org/a"),
                Term::iri("http://example.org/p"),
                Term::literal_lang("hi", "en-GB"),
                Term::iri("http://example.org/g"),
            )),
            PatchOp::PrefixDelete { label: "ex".to_string(), iri: String::new(), graph: None },
            PatchOp::TxCommit,
        ])
    }

    #[test]
    fn round_trip_preserves_every_op() {
        let patch = sample_patch();
        let bytes = encode_patch(&patch, StreamOptions::default()).unwrap();
        assert_eq!(decode_patch(&bytes).unwrap(), patch);
    }

    #[test]
    fn round_trip_with_one_row_frames() {
        // Registers and tables are stream-scoped, not frame-scoped, so the
        // degenerate one-row-per-frame stream decodes identically.
        let patch = sample_patch();
        let options = StreamOptions { frame_row_limit: 1, ..Default::default() };
        let bytes = encode_patch(&patch, options).unwrap();
        assert_eq!(decode_patch(&bytes).unwrap(), patch);
    }

    #[test]
    fn byte_at_a_time_feeding_matches_one_shot() {
        let patch = sample_patch();
        let bytes = encode_patch(&patch, StreamOptions::default()).unwrap();
        let mut dec = StreamDecoder::new();
        let mut got = Patch::new();
        for b in &bytes {
            dec.feed(core::slice::from_ref(b));
            while let Some(op) = dec.poll_op().unwrap() {
                got.push(op);
            }
        }
        dec.finish().unwrap();
        assert_eq!(got, patch);
    }

    #[test]
    fn quoted_triples_round_trip() {
        let patch = Patch::from(vec![PatchOp::Add(Statement::triple(
            Term::quoted(
                Term::bnode("b"),
                Term::iri("http://example.org/says"),
                Term::literal("x"),
            ),
            Term::iri("http://example.org/assertedBy"),
            Term::iri("http://example.org/alice"),
        ))]);
        let bytes = encode_patch(&patch, StreamOptions::default()).unwrap();
        assert_eq!(decode_patch(&bytes).unwrap(), patch);
    }

    #[test]
    fn empty_input_reports_eof() {
        let mut dec = StreamDecoder::new();
        assert_eq!(dec.poll_op(), Ok(None));
        assert_eq!(dec.finish().unwrap_err().kind, DecodeErrorKind::UnexpectedEof);
    }

    #[test]
    fn bad_magic_is_rejected() {
        let err = decode_patch(b"NOPE....").unwrap_err();
        assert_eq!(err.kind, DecodeErrorKind::BadMagic);
        assert_eq!(err.offset, 0);
    }

    #[test]
    fn errors_are_sticky() {
        let mut dec = StreamDecoder::new();
        dec.feed(b"NOPE");
        let first = dec.poll_op().unwrap_err();
        let second = dec.poll_op().unwrap_err();
        assert_eq!(first, second);
        assert_eq!(dec.finish().unwrap_err(), first);
    }

    #[test]
    fn truncated_stream_reports_truncated_frame() {
        let bytes = encode_patch(&sample_patch(), StreamOptions::default()).unwrap();
        let mut dec = StreamDecoder::new();
        dec.feed(&bytes[..bytes.len() - 3]);
        while dec.poll_op().unwrap().is_some() {}
        assert_eq!(dec.finish().unwrap_err().kind, DecodeErrorKind::TruncatedFrame);
    }

    #[test]
    fn magic_alone_is_missing_options() {
        let mut dec = StreamDecoder::new();
        dec.feed(&MAGIC);
        assert_eq!(dec.poll_op(), Ok(None));
        assert_eq!(dec.finish().unwrap_err().kind, DecodeErrorKind::MissingOptions);
    }

    #[test]
    fn error_location_names_the_failing_frame_and_row() {
        let patch = Patch::from(vec![PatchOp::TxBegin, PatchOp::TxCommit]);
        let mut bytes = encode_patch(&patch, StreamOptions::default()).unwrap();
        // Corrupt the final row (the TC tag) into an unknown tag.
        let last = bytes.len() - 1;
        bytes[last] = 99;
        let err = decode_patch(&bytes).unwrap_err();
        assert_eq!(err.kind, DecodeErrorKind::UnknownRowTag { tag: 99 });
        assert_eq!(err.frame, 0);
        // Zero-based within the frame: options, TX, then the corrupted row.
        assert_eq!(err.row, 2);
    }
}
