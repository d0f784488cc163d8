//! Streaming conversion between the three serializations.

use std::io::{BufRead, Write};

use jpt_core::text::{parse_row, write_op, SparqlUpdateWriter};
use jpt_core::wire::{StreamEncoder, StreamOptions};
use jpt_core::PatchOp;

use crate::errors::CmdError;
use crate::ioutil;
use crate::multistream::MultiDecoder;

use super::{InputFormat, OutputFormat};

#[derive(Debug, clap::Args)]
pub struct ConvertArgs {
    /// Input path, `-` for stdin.
    #[arg(default_value = "-")]
    pub input: String,
    /// Output path, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    pub output: String,
    /// Format of the input.
    #[arg(long, value_enum)]
    pub from: InputFormat,
    /// Format to produce.
    #[arg(long, value_enum)]
    pub to: OutputFormat,
    /// Name table slots for binary output.
    #[arg(long, value_name = "N")]
    pub name_table: Option<u32>,
    /// Prefix table slots for binary output; 0 stores IRIs unsplit.
    #[arg(long, value_name = "N")]
    pub prefix_table: Option<u32>,
    /// Datatype table slots for binary output.
    #[arg(long, value_name = "N")]
    pub dt_table: Option<u32>,
    /// Row limit per frame for binary output.
    #[arg(long, value_name = "N")]
    pub frame: Option<u32>,
    /// Stop at the first malformed text row instead of skipping it with a
    /// warning.
    #[arg(long)]
    pub strict: bool,
}

impl ConvertArgs {
    /// Encoder options: `base` with any explicitly given knobs applied.
    fn encoder_options(&self, base: StreamOptions) -> Result<StreamOptions, CmdError> {
        let mut opts = base;
        if let Some(n) = self.name_table {
            opts.name_table_capacity = n;
        }
        if let Some(n) = self.prefix_table {
            opts.prefix_table_capacity = n;
        }
        if let Some(n) = self.dt_table {
            opts.datatype_table_capacity = n;
        }
        if let Some(n) = self.frame {
            opts.frame_row_limit = n;
        }
        opts.validate().map_err(|e| CmdError::Format(e.to_string()))?;
        Ok(opts)
    }
}

pub fn run(args: &ConvertArgs) -> Result<(), CmdError> {
    let reader = ioutil::open_input(&args.input)?;
    let out = ioutil::open_output(&args.output)?;
    let count = match args.from {
        InputFormat::Text => from_text(args, reader, out)?,
        InputFormat::Binary => from_binary(args, reader, out)?,
    };
    eprintln!("{count} operations");
    Ok(())
}

fn from_text(
    args: &ConvertArgs,
    mut reader: Box<dyn BufRead>,
    out: Box<dyn Write>,
) -> Result<u64, CmdError> {
    let options = args.encoder_options(StreamOptions::default())?;
    let mut sink = OpSink::new(args.to, options, out, &args.output)?;
    let mut count = 0u64;
    let mut line = String::new();
    let mut line_no = 0u32;
    loop {
        line.clear();
        let n = reader.read_line(&mut line).map_err(|e| CmdError::io_at(&args.input, e))?;
        if n == 0 {
            break;
        }
        line_no = line_no.saturating_add(1);
        match parse_row(line.trim_end_matches(['\n', '\r']), line_no) {
            Ok(Some(op)) => {
                count += 1;
                sink.push(&op)?;
            }
            Ok(None) => {}
            Err(err) => {
                if args.strict || !err.is_recoverable() {
                    return Err(CmdError::format_at(&args.input, err));
                }
                eprintln!("warning: {}: {} (row skipped)", args.input, err);
            }
        }
    }
    sink.finish()?;
    Ok(count)
}

fn from_binary(
    args: &ConvertArgs,
    mut reader: Box<dyn BufRead>,
    out: Box<dyn Write>,
) -> Result<u64, CmdError> {
    let mut decoder = MultiDecoder::new();
    // Built on the first operation, once the input's own options are known:
    // binary-to-binary keeps them (modulo explicit overrides).
    let mut sink: Option<OpSink> = None;
    let mut out_slot = Some(out);
    let mut count = 0u64;
    let mut chunk = [0u8; 1 << 16];
    loop {
        let n = reader.read(&mut chunk).map_err(|e| CmdError::io_at(&args.input, e))?;
        if n == 0 {
            break;
        }
        decoder.feed(&chunk[..n]);
        loop {
            match decoder.poll_op() {
                Ok(Some(op)) => {
                    let sink = ensure_sink(args, &decoder, &mut sink, &mut out_slot)?;
                    sink.push(&op)?;
                    count += 1;
                }
                Ok(None) => break,
                Err(err) => return Err(CmdError::format_at(&args.input, err)),
            }
        }
    }
    decoder.finish().map_err(|err| CmdError::format_at(&args.input, err))?;
    // An op-free input still converts to a well-formed empty output.
    ensure_sink(args, &decoder, &mut sink, &mut out_slot)?;
    sink.expect("sink built above").finish()?;
    Ok(count)
}

fn ensure_sink<'a>(
    args: &ConvertArgs,
    decoder: &MultiDecoder,
    sink: &'a mut Option<OpSink>,
    out_slot: &mut Option<Box<dyn Write>>,
) -> Result<&'a mut OpSink, CmdError> {
    if sink.is_none() {
        let base = match args.to {
            OutputFormat::Binary => decoder.options().cloned().unwrap_or_default(),
            _ => StreamOptions::default(),
        };
        let options = args.encoder_options(base)?;
        let out = out_slot.take().expect("output writer consumed once");
        *sink = Some(OpSink::new(args.to, options, out, &args.output)?);
    }
    Ok(sink.as_mut().expect("just built"))
}

// One sink exists per conversion, so the encoder-sized variant costs nothing.
#[allow(clippy::large_enum_variant)]
enum SinkKind {
    Text { line: String },
    Binary { encoder: StreamEncoder, buf: Vec<u8> },
    Sparql { writer: SparqlUpdateWriter, buf: String },
}

/// Incremental writer for one output format; rows go out as they are pushed,
/// so conversion memory stays bounded by a frame, not the input.
pub struct OpSink {
    kind: SinkKind,
    out: Box<dyn Write>,
    path: String,
}

impl OpSink {
    pub fn new(
        to: OutputFormat,
        options: StreamOptions,
        out: Box<dyn Write>,
        path: &str,
    ) -> Result<Self, CmdError> {
        let kind = match to {
            OutputFormat::Text => SinkKind::Text { line: String::new() },
            OutputFormat::Binary => SinkKind::Binary {
                encoder: StreamEncoder::new(options)
                    .map_err(|e| CmdError::Format(e.to_string()))?,
                buf: Vec::new(),
            },
            OutputFormat::SparqlUpdate => {
                SinkKind::Sparql { writer: SparqlUpdateWriter::new(), buf: String::new() }
            }
        };
        Ok(OpSink { kind, out, path: path.to_string() })
    }

    pub fn push(&mut self, op: &PatchOp) -> Result<(), CmdError> {
        match &mut self.kind {
            SinkKind::Text { line } => {
                line.clear();
                write_op(op, line).map_err(|e| CmdError::format_at(&self.path, e))?;
                self.out.write_all(line.as_bytes()).map_err(|e| ioutil::write_err(&self.path, e))?;
            }
            SinkKind::Binary { encoder, buf } => {
                encoder.push_op(op, buf).map_err(|e| CmdError::format_at(&self.path, e))?;
                if !buf.is_empty() {
                    self.out.write_all(buf).map_err(|e| ioutil::write_err(&self.path, e))?;
                    buf.clear();
                }
            }
            SinkKind::Sparql { writer, buf } => {
                buf.clear();
                writer.push_op(op, buf).map_err(|e| CmdError::format_at(&self.path, e))?;
                self.out.write_all(buf.as_bytes()).map_err(|e| ioutil::write_err(&self.path, e))?;
            }
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CmdError> {
        match &mut self.kind {
            SinkKind::Text { .. } => {}
            SinkKind::Binary { encoder, buf } => {
                buf.clear();
                encoder.finish(buf).map_err(|e| CmdError::format_at(&self.path, e))?;
                self.out.write_all(buf).map_err(|e| ioutil::write_err(&self.path, e))?;
            }
            SinkKind::Sparql { writer, buf } => {
                buf.clear();
                writer.finish(buf);
                self.out.write_all(buf.as_bytes()).map_err(|e| ioutil::write_err(&self.path, e))?;
            }
        }
        self.out.flush().map_err(|e| ioutil::write_err(&self.path, e))
    }
}
