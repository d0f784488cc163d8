//! `jpt`: tooling for RDF Patch streams in text, framed binary, and SPARQL
//! Update form.

use clap::{Parser, Subcommand};

mod commands;
mod errors;
mod gen;
mod ioutil;
mod multistream;

#[derive(Debug, Parser)]
#[command(
    name = "jpt",
    version,
    about = "RDF Patch tooling: text/binary conversion, diff, apply, stats, benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert a patch between text, binary, and SPARQL Update.
    Convert(commands::convert::ConvertArgs),
    /// Compute the patch that turns one N-Quads dataset into another.
    Diff(commands::diff::DiffArgs),
    /// Apply a patch to an N-Quads dataset.
    Apply(commands::apply::ApplyArgs),
    /// Count operations, patches, and table activity in a patch.
    Stats(commands::stats::StatsArgs),
    /// Measure serialized sizes and codec throughput.
    Bench(commands::bench::BenchArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Convert(args) => commands::convert::run(args),
        Command::Diff(args) => commands::diff::run(args),
        Command::Apply(args) => commands::apply::run(args),
        Command::Stats(args) => commands::stats::run(args),
        Command::Bench(args) => commands::bench::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
