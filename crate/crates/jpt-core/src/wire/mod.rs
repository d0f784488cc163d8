//! The framed binary stream format.
//!
//! A stream is the 4-byte magic `JPT1` followed by frames; a frame is a
//! varint byte length and that many bytes of rows; a row is a varint tag and
//! a payload. The first row of the first frame declares the stream options
//! exactly once. Data rows reference IRIs through streaming lookup tables
//! (fed by entry rows in the same stream) and elide terms repeated from the
//! previous data row, which is where the compression comes from.
//!
//! Row tags: 1 options, 2 name entry, 3 prefix entry, 4 datatype entry,
//! 5 `TxBegin`, 6 `TxCommit`, 7 `TxAbort`, 8 add, 9 delete, 10 prefix add,
//! 11 prefix delete, 12 header.
//!
//! Term kinds inside add/delete/header/prefix rows: 0 repeat previous, 1 IRI
//! (prefix id, name id; prefix id 0 is the empty prefix), 2 blank node,
//! 3 plain literal, 4 language literal, 5 datatyped literal (lexical, then
//! datatype id), 6 quoted triple (three nested terms), 7 default graph.
//! Strings are a varint byte length and UTF-8 bytes.

pub mod decode;
pub mod encode;
pub mod iri;
pub mod lookup;
pub mod options;
pub mod stats;
pub mod varint;

pub use decode::{decode_patch, DecodeError, DecodeErrorKind, StreamDecoder};
pub use encode::{encode_patch, EncodeError, StreamEncoder};
pub use iri::split_iri;
pub use lookup::{DecoderTable, EncoderTable, TableKind, MAX_ENTRY_LEN};
pub use options::{OptionsError, StreamOptions, FORMAT_VERSION, MAX_TABLE_CAPACITY};
pub use stats::{collect_stats, OpCounter, StatsCollector, StatsReport};

/// Leading stream identification bytes.
pub const MAGIC: [u8; 4] = [0x4A, 0x50, 0x54, 0x31];

/// Byte cap for strings carried inline in rows (literals, labels, keys).
pub const MAX_STRING_LEN: usize = 1 << 28;

/// Byte cap the decoder accepts for one frame. The encoder keeps frames far
/// smaller (it cuts a frame early past a few megabytes of rows), so the cap
/// only matters for hostile input.
pub const MAX_FRAME_LEN: u32 = 1 << 29;

/// Row tag constants, one per row shape.
pub mod tag {
    pub const OPTIONS: u32 = 1;
    pub const NAME_ENTRY: u32 = 2;
    pub const PREFIX_ENTRY: u32 = 3;
    pub const DT_ENTRY: u32 = 4;
    pub const TX_BEGIN: u32 = 5;
    pub const TX_COMMIT: u32 = 6;
    pub const TX_ABORT: u32 = 7;
    pub const ADD: u32 = 8;
    pub const DELETE: u32 = 9;
    pub const PREFIX_ADD: u32 = 10;
    pub const PREFIX_DELETE: u32 = 11;
    pub const HEADER: u32 = 12;
}

/// Term kind bytes used inside data rows.
pub mod kind {
    pub const REPEAT: u8 = 0;
    pub const IRI: u8 = 1;
    pub const BNODE: u8 = 2;
    pub const LITERAL: u8 = 3;
    pub const LITERAL_LANG: u8 = 4;
    pub const LITERAL_DT: u8 = 5;
    pub const QUOTED: u8 = 6;
    pub const DEFAULT_GRAPH: u8 = 7;
}
