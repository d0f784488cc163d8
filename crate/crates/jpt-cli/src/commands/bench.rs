//! Single-threaded serialization benchmarks over a preloaded patch.
//!
//! The patch is fully decoded into memory first; measurement then times
//! whole single-shot passes on a monotonic clock. Serialization writes to a
//! byte-counting discard sink, deserialization reads from an in-memory
//! buffer into a checksum the optimizer cannot remove. Rates count patch
//! rows (transaction markers and headers included); lookup entry rows are
//! an encoding detail and not counted. Sizes are reported as a percentage
//! of the text rendering of the same patch.

use std::hint::black_box;
use std::time::Instant;

use jpt_core::text::{parse_row, write_op, SparqlUpdateWriter};
use jpt_core::wire::{encode_patch, StreamDecoder, StreamEncoder, StreamOptions};
use jpt_core::{Patch, PatchOp};

use crate::errors::CmdError;
use crate::gen;
use crate::ioutil;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Workload {
    /// Change feed: fresh subjects every batch, long prose literals.
    Cdc,
    /// Telemetry: small recurring vocabulary, short numeric literals.
    Iot,
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    /// Patch file to preload (text or binary), `-` for stdin.
    #[arg(long, value_name = "PATCH", required_unless_present = "gen")]
    pub input: Option<String>,
    /// Generate the workload instead of reading a file.
    #[arg(long, value_enum, value_name = "PROFILE", conflicts_with = "input")]
    pub gen: Option<Workload>,
    /// Rows to generate.
    #[arg(long, default_value_t = 100_000)]
    pub ops: u64,
    /// Generator seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Comma-separated formats to measure: text, binary, sparql-update.
    #[arg(long, default_value = "text,binary,sparql-update")]
    pub formats: String,
    /// Measured repetitions per format.
    #[arg(long, default_value_t = 7)]
    pub reps: u32,
    /// Discarded repetitions before measuring.
    #[arg(long, default_value_t = 3)]
    pub warmups: u32,
    /// Print key=value lines instead of the table.
    #[arg(long)]
    pub machine: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fmt {
    Text,
    Binary,
    Sparql,
}

impl Fmt {
    fn label(self) -> &'static str {
        match self {
            Fmt::Text => "text",
            Fmt::Binary => "binary",
            Fmt::Sparql => "sparql-update",
        }
    }
}

fn parse_formats(list: &str) -> Result<Vec<Fmt>, CmdError> {
    let mut out = Vec::new();
    for part in list.split(',') {
        let fmt = match part.trim() {
            "text" => Fmt::Text,
            "binary" => Fmt::Binary,
            "sparql-update" => Fmt::Sparql,
            other => return Err(CmdError::Format(format!("unknown format `{other}`"))),
        };
        if !out.contains(&fmt) {
            out.push(fmt);
        }
    }
    if out.is_empty() {
        return Err(CmdError::Format("no formats requested".into()));
    }
    Ok(out)
}

/// Sample mean and 95% confidence half-width (Student's t on n-1 degrees of
/// freedom; the large-sample constant beyond the tabulated range).
#[derive(Debug, Clone, Copy)]
struct Measured {
    mean: f64,
    half_width: f64,
}

const T95: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160,
    2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056,
    2.052, 2.048, 2.045, 2.042,
];

fn summarize(samples: &[f64]) -> Measured {
    let n = samples.len();
    if n == 0 {
        return Measured { mean: 0.0, half_width: 0.0 };
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return Measured { mean, half_width: 0.0 };
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    let df = n - 1;
    let t = if df <= T95.len() { T95[df - 1] } else { 1.96 };
    Measured { mean, half_width: t * var.sqrt() / (n as f64).sqrt() }
}

struct FormatReport {
    fmt: Fmt,
    size: u64,
    ser: Measured,
    deser: Option<Measured>,
}

pub fn run(args: &BenchArgs) -> Result<(), CmdError> {
    let formats = parse_formats(&args.formats)?;
    let (patch, source) = load_workload(args)?;
    let rows = patch.ops.len() as u64;

    // The text rendering is the size baseline whether or not text is among
    // the measured formats.
    let text_doc = render_text(&patch)?;
    let baseline = text_doc.len() as u64;

    let mut reports = Vec::new();
    for &fmt in &formats {
        reports.push(measure_format(args, fmt, &patch, &text_doc)?);
    }

    ioutil::print_stdout(&render_report(args, &source, rows, baseline, &reports))
}

fn load_workload(args: &BenchArgs) -> Result<(Patch, String), CmdError> {
    if let Some(path) = &args.input {
        let bytes = ioutil::read_bytes(path)?;
        Ok((super::load_patch_auto(path, bytes)?, format!("input={path}")))
    } else {
        let profile = args.gen.expect("clap requires --gen without --input");
        let patch = match profile {
            Workload::Iot => gen::iot(args.ops, args.seed),
            Workload::Cdc => gen::cdc(args.ops, args.seed),
        };
        let label = match profile {
            Workload::Iot => "iot",
            Workload::Cdc => "cdc",
        };
        Ok((patch, format!("workload={label}")))
    }
}

fn measure_format(
    args: &BenchArgs,
    fmt: Fmt,
    patch: &Patch,
    text_doc: &str,
) -> Result<FormatReport, CmdError> {
    let rows = patch.ops.len() as f64;
    let total = args.warmups + args.reps;

    let mut ser_rates = Vec::with_capacity(args.reps as usize);
    let mut size = 0u64;
    for i in 0..total {
        let (bytes, secs) = match fmt {
            Fmt::Text => ser_text(&patch.ops)?,
            Fmt::Binary => ser_binary(&patch.ops)?,
            Fmt::Sparql => ser_sparql(&patch.ops)?,
        };
        if i >= args.warmups {
            ser_rates.push(rows / secs.max(1e-9));
            size = bytes;
        }
    }

    let deser = match fmt {
        Fmt::Text => {
            let mut rates = Vec::with_capacity(args.reps as usize);
            for i in 0..total {
                let secs = deser_text(text_doc)?;
                if i >= args.warmups {
                    rates.push(rows / secs.max(1e-9));
                }
            }
            Some(summarize(&rates))
        }
        Fmt::Binary => {
            let encoded = encode_patch(patch, StreamOptions::default())
                .map_err(|e| CmdError::Format(e.to_string()))?;
            let mut rates = Vec::with_capacity(args.reps as usize);
            for i in 0..total {
                let secs = deser_binary(&encoded)?;
                if i >= args.warmups {
                    rates.push(rows / secs.max(1e-9));
                }
            }
            Some(summarize(&rates))
        }
        // No parser exists for this output-only format.
        Fmt::Sparql => None,
    };

    Ok(FormatReport { fmt, size, ser: summarize(&ser_rates), deser })
}

fn render_text(patch: &Patch) -> Result<String, CmdError> {
    jpt_core::text::write_patch_text(patch).map_err(|e| CmdError::Format(e.to_string()))
}

/// Folds a decoded operation into the throwaway checksum. Touching only the
/// opcode is deliberate: the handler must stay close to a no-op while still
/// depending on every operation.
fn fold(checksum: u64, op: &PatchOp) -> u64 {
    checksum.wrapping_mul(31).wrapping_add(u64::from(op.opcode().as_bytes()[0]))
}

fn ser_text(ops: &[PatchOp]) -> Result<(u64, f64), CmdError> {
    let start = Instant::now();
    let mut line = String::new();
    let mut bytes = 0u64;
    for op in ops {
        line.clear();
        write_op(op, &mut line).map_err(|e| CmdError::Format(e.to_string()))?;
        bytes += line.len() as u64;
        black_box(line.as_bytes());
    }
    Ok((bytes, start.elapsed().as_secs_f64()))
}

fn ser_binary(ops: &[PatchOp]) -> Result<(u64, f64), CmdError> {
    let start = Instant::now();
    let mut encoder =
        StreamEncoder::new(StreamOptions::default()).map_err(|e| CmdError::Format(e.to_string()))?;
    let mut buf = Vec::new();
    let mut bytes = 0u64;
    for op in ops {
        encoder.push_op(op, &mut buf).map_err(|e| CmdError::Format(e.to_string()))?;
        if !buf.is_empty() {
            bytes += buf.len() as u64;
            black_box(buf.as_slice());
            buf.clear();
        }
    }
    encoder.finish(&mut buf).map_err(|e| CmdError::Format(e.to_string()))?;
    bytes += buf.len() as u64;
    black_box(buf.as_slice());
    Ok((bytes, start.elapsed().as_secs_f64()))
}

fn ser_sparql(ops: &[PatchOp]) -> Result<(u64, f64), CmdError> {
    let start = Instant::now();
    let mut writer = SparqlUpdateWriter::new();
    let mut buf = String::new();
    let mut bytes = 0u64;
    for op in ops {
        buf.clear();
        writer.push_op(op, &mut buf).map_err(|e| CmdError::Format(e.to_string()))?;
        bytes += buf.len() as u64;
        black_box(buf.as_bytes());
    }
    buf.clear();
    writer.finish(&mut buf);
    bytes += buf.len() as u64;
    black_box(buf.as_bytes());
    Ok((bytes, start.elapsed().as_secs_f64()))
}

fn deser_text(doc: &str) -> Result<f64, CmdError> {
    let start = Instant::now();
    let mut checksum = 0u64;
    for (i, line) in doc.lines().enumerate() {
        match parse_row(line, (i + 1) as u32) {
            Ok(Some(op)) => checksum = fold(checksum, &op),
            Ok(None) => {}
            Err(e) => return Err(CmdError::Format(e.to_string())),
        }
    }
    black_box(checksum);
    Ok(start.elapsed().as_secs_f64())
}

fn deser_binary(encoded: &[u8]) -> Result<f64, CmdError> {
    let start = Instant::now();
    let mut decoder = StreamDecoder::new();
    decoder.feed(encoded);
    let mut checksum = 0u64;
    loop {
        match decoder.poll_op() {
            Ok(Some(op)) => checksum = fold(checksum, &op),
            Ok(None) => break,
            Err(e) => return Err(CmdError::Format(e.to_string())),
        }
    }
    decoder.finish().map_err(|e| CmdError::Format(e.to_string()))?;
    black_box(checksum);
    Ok(start.elapsed().as_secs_f64())
}

fn render_report(
    args: &BenchArgs,
    source: &str,
    rows: u64,
    baseline: u64,
    reports: &[FormatReport],
) -> String {
    use std::fmt::Write;

    let pct = |size: u64| {
        if baseline == 0 {
            0.0
        } else {
            size as f64 * 100.0 / baseline as f64
        }
    };
    let mut out = String::new();
    if args.machine {
        let _ = writeln!(out, "{source}");
        if args.gen.is_some() {
            let _ = writeln!(out, "ops={}", args.ops);
            let _ = writeln!(out, "seed={}", args.seed);
        }
        let _ = writeln!(out, "rows={rows}");
        let _ = writeln!(out, "reps={}", args.reps);
        let _ = writeln!(out, "warmups={}", args.warmups);
        let _ = writeln!(out, "baseline_bytes={baseline}");
        let _ = writeln!(out, "os={}", std::env::consts::OS);
        let _ = writeln!(out, "arch={}", std::env::consts::ARCH);
        let _ = writeln!(out, "version={}", env!("CARGO_PKG_VERSION"));
        for r in reports {
            let name = r.fmt.label();
            let _ = writeln!(out, "{name}.size_bytes={}", r.size);
            let _ = writeln!(out, "{name}.pct_of_text={:.2}", pct(r.size));
            let _ = writeln!(out, "{name}.ser_ops_per_s={:.2}", r.ser.mean);
            let _ = writeln!(out, "{name}.ser_ci95={:.2}", r.ser.half_width);
            if let Some(d) = r.deser {
                let _ = writeln!(out, "{name}.deser_ops_per_s={:.2}", d.mean);
                let _ = writeln!(out, "{name}.deser_ci95={:.2}", d.half_width);
            }
        }
    } else {
        let _ = writeln!(out, "{source}  rows={rows}  reps={} warmups={}", args.reps, args.warmups);
        let _ = writeln!(
            out,
            "machine: {} {}  version {}",
            std::env::consts::OS,
            std::env::consts::ARCH,
            env!("CARGO_PKG_VERSION")
        );
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<15}{:>12}  {:>9}  {:>22}  {:>22}",
            "format", "bytes", "% text", "ser ops/s (±95%)", "deser ops/s (±95%)"
        );
        for r in reports {
            let ser = format!("{:.0} ±{:.0}", r.ser.mean, r.ser.half_width);
            let deser = match r.deser {
                Some(d) => format!("{:.0} ±{:.0}", d.mean, d.half_width),
                None => "-".to_string(),
            };
            let _ = writeln!(
                out,
                "{:<15}{:>12}  {:>8.1}%  {:>22}  {:>22}",
                r.fmt.label(),
                r.size,
                pct(r.size),
                ser,
                deser
            );
        }
    }
    out
}
