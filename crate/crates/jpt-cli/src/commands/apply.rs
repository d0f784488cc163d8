//! Patch application over an N-Quads dataset.

use jpt_core::diff::{apply, apply_strict};
use jpt_core::text::write_nquads;

use crate::errors::CmdError;
use crate::ioutil::{self, STDIO};

#[derive(Debug, clap::Args)]
pub struct ApplyArgs {
    /// N-Quads file with the dataset, `-` for stdin.
    pub dataset: String,
    /// Patch to apply; text or binary, told apart by the leading bytes.
    pub patch: String,
    /// Output path for the resulting N-Quads, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    pub output: String,
    /// Fail when an add is already present or a delete is absent, instead
    /// of ignoring the no-op.
    #[arg(long)]
    pub strict: bool,
}

pub fn run(args: &ApplyArgs) -> Result<(), CmdError> {
    if args.dataset == STDIO && args.patch == STDIO {
        return Err(CmdError::Io("only one input can come from stdin".into()));
    }
    let dataset = super::diff::load_dataset(&args.dataset)?;
    let patch = super::load_patch_auto(&args.patch, ioutil::read_bytes(&args.patch)?)?;
    let result = if args.strict {
        apply_strict(&dataset, &patch).map_err(|c| CmdError::Conflict(c.to_string()))?
    } else {
        apply(&dataset, &patch)
    };
    let rendered = write_nquads(&result).map_err(|e| CmdError::Format(e.to_string()))?;
    let mut out = ioutil::open_output(&args.output)?;
    ioutil::write_all(out.as_mut(), &args.output, rendered.as_bytes())?;
    ioutil::finish_output(out.as_mut(), &args.output)?;
    eprintln!("{} statements", result.len());
    Ok(())
}
