//! One module per subcommand, plus the format plumbing they share.

pub mod apply;
pub mod bench;
pub mod convert;
pub mod diff;
pub mod stats;

use jpt_core::text::parse_patch_text;
use jpt_core::wire::{StreamOptions, MAGIC};
use jpt_core::Patch;

use crate::errors::CmdError;
use crate::ioutil;
use crate::multistream::MultiDecoder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    Text,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Binary,
    SparqlUpdate,
}

/// Input format detection for commands that accept either: encoded streams
/// start with the magic, which is not valid UTF-8 text.
pub fn looks_binary(bytes: &[u8]) -> bool {
    bytes.starts_with(&MAGIC)
}

/// Decodes a whole in-memory byte buffer, accepting concatenated streams.
pub fn decode_patch_bytes(path: &str, bytes: &[u8]) -> Result<Patch, CmdError> {
    let mut decoder = MultiDecoder::new();
    decoder.feed(bytes);
    let mut ops = Vec::new();
    loop {
        match decoder.poll_op() {
            Ok(Some(op)) => ops.push(op),
            Ok(None) => break,
            Err(err) => return Err(CmdError::format_at(path, err)),
        }
    }
    decoder.finish().map_err(|err| CmdError::format_at(path, err))?;
    Ok(Patch { ops })
}

/// Loads a whole patch file of either format, sniffing by the magic.
pub fn load_patch_auto(path: &str, bytes: Vec<u8>) -> Result<Patch, CmdError> {
    if looks_binary(&bytes) {
        decode_patch_bytes(path, &bytes)
    } else {
        let text = String::from_utf8(bytes)
            .map_err(|_| CmdError::format_at(path, "input is not valid UTF-8"))?;
        parse_patch_text(&text).map_err(|err| CmdError::format_at(path, err))
    }
}

/// Writes an in-memory patch to a path in the requested format, using
/// default stream options for binary output.
pub fn write_patch_to(patch: &Patch, to: OutputFormat, path: &str) -> Result<(), CmdError> {
    let out = ioutil::open_output(path)?;
    let mut sink = convert::OpSink::new(to, StreamOptions::default(), out, path)?;
    for op in &patch.ops {
        sink.push(op)?;
    }
    sink.finish()
}
