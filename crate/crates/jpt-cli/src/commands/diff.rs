//! Difference of two N-Quads datasets, written as a patch.

use jpt_core::diff::{diff, DiffOptions};
use jpt_core::text::parse_nquads;
use jpt_core::Dataset;

use crate::errors::CmdError;
use crate::ioutil::{self, STDIO};

use super::OutputFormat;

#[derive(Debug, clap::Args)]
pub struct DiffArgs {
    /// N-Quads file with the starting dataset, `-` for stdin.
    pub before: String,
    /// N-Quads file with the target dataset, `-` for stdin.
    pub after: String,
    /// Output path, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    pub output: String,
    /// Patch format to produce.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub to: OutputFormat,
}

pub fn run(args: &DiffArgs) -> Result<(), CmdError> {
    if args.before == STDIO && args.after == STDIO {
        return Err(CmdError::Io("only one input can come from stdin".into()));
    }
    let before = load_dataset(&args.before)?;
    let after = load_dataset(&args.after)?;
    let patch = diff(&before, &after, &DiffOptions::default());
    super::write_patch_to(&patch, args.to, &args.output)?;
    eprintln!("{} operations", patch.ops.len());
    Ok(())
}

pub fn load_dataset(path: &str) -> Result<Dataset, CmdError> {
    let text = ioutil::read_text(path)?;
    parse_nquads(&text).map_err(|err| CmdError::format_at(path, err))
}
