//! Operation and table-activity counts for a patch in either format.

use jpt_core::text::parse_patch_text;
use jpt_core::wire::{OpCounter, StatsReport};
use jpt_core::PatchOp;

use crate::errors::CmdError;
use crate::ioutil;
use crate::multistream::MultiDecoder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StatsFormat {
    /// Decide by the leading bytes.
    Auto,
    Text,
    Binary,
}

#[derive(Debug, clap::Args)]
pub struct StatsArgs {
    /// Patch file, `-` for stdin.
    #[arg(default_value = "-")]
    pub patch: String,
    /// Input format.
    #[arg(long, value_enum, default_value_t = StatsFormat::Auto)]
    pub format: StatsFormat,
    /// Print key=value lines instead of the aligned table.
    #[arg(long)]
    pub machine: bool,
}

pub fn run(args: &StatsArgs) -> Result<(), CmdError> {
    let bytes = ioutil::read_bytes(&args.patch)?;
    let binary = match args.format {
        StatsFormat::Auto => super::looks_binary(&bytes),
        StatsFormat::Text => false,
        StatsFormat::Binary => true,
    };
    let (report, streams) = if binary {
        binary_report(&args.patch, &bytes)?
    } else {
        (text_report(&args.patch, bytes)?, None)
    };
    ioutil::print_stdout(&render_report(&report, streams, args.machine))
}

fn binary_report(path: &str, bytes: &[u8]) -> Result<(StatsReport, Option<u32>), CmdError> {
    let mut decoder = MultiDecoder::new();
    decoder.feed(bytes);
    let mut counter = OpCounter::new();
    let mut tx_begins = 0u64;
    loop {
        match decoder.poll_op() {
            Ok(Some(op)) => {
                if matches!(op, PatchOp::TxBegin) {
                    tx_begins += 1;
                }
                counter.push(&op);
            }
            Ok(None) => break,
            Err(err) => return Err(CmdError::format_at(path, err)),
        }
    }
    decoder.finish().map_err(|err| CmdError::format_at(path, err))?;
    let streams = decoder.streams();
    let mut report = counter.into_report(decoder.bytes_consumed());
    report.entry_rows = decoder.table_entries();
    report.evictions = decoder.table_evictions();
    if tx_begins == 0 && report.operations > 0 {
        // No transaction markers anywhere: each stream holding operations
        // counts as one patch.
        report.patches = u64::from(streams.max(1));
    }
    Ok((report, Some(streams)))
}

fn text_report(path: &str, bytes: Vec<u8>) -> Result<StatsReport, CmdError> {
    let text = String::from_utf8(bytes)
        .map_err(|_| CmdError::format_at(path, "input is not valid UTF-8"))?;
    let size = text.len() as u64;
    let patch = parse_patch_text(&text).map_err(|err| CmdError::format_at(path, err))?;
    let mut counter = OpCounter::new();
    for op in &patch.ops {
        counter.push(op);
    }
    Ok(counter.into_report(size))
}

fn render_report(report: &StatsReport, streams: Option<u32>, machine: bool) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    if machine {
        let _ = writeln!(out, "patches={}", report.patches);
        let _ = writeln!(out, "operations={}", report.operations);
        let _ = writeln!(out, "adds={}", report.adds);
        let _ = writeln!(out, "deletes={}", report.deletes);
        let _ = writeln!(out, "prefix_ops={}", report.prefix_ops);
        let _ = writeln!(out, "headers={}", report.headers);
        let _ = writeln!(out, "bytes={}", report.bytes);
        let _ = writeln!(out, "bytes_per_op={:.2}", report.bytes_per_op());
        if let Some(streams) = streams {
            let _ = writeln!(out, "streams={streams}");
            let _ = writeln!(out, "entry_rows={}", report.entry_rows);
            let _ = writeln!(out, "evictions={}", report.evictions);
        }
    } else {
        let _ = writeln!(out, "{:<12}{}", "patches", report.patches);
        let _ = writeln!(out, "{:<12}{}", "operations", report.operations);
        let _ = writeln!(out, "{:<12}{}", "adds", report.adds);
        let _ = writeln!(out, "{:<12}{}", "deletes", report.deletes);
        let _ = writeln!(out, "{:<12}{}", "prefix ops", report.prefix_ops);
        let _ = writeln!(out, "{:<12}{}", "headers", report.headers);
        let _ = writeln!(out, "{:<12}{}", "bytes", report.bytes);
        let _ = writeln!(out, "{:<12}{:.2}", "bytes/op", report.bytes_per_op());
        if let Some(streams) = streams {
            let _ = writeln!(out, "{:<12}{streams}", "streams");
            let _ = writeln!(out, "{:<12}{}", "entry rows", report.entry_rows);
            let _ = writeln!(out, "{:<12}{}", "evictions", report.evictions);
        }
    }
    out
}
