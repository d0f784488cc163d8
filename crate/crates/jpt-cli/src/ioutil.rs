//! Path plumbing: `-` means stdin or stdout, everything else is a file.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};

use crate::errors::CmdError;

pub const STDIO: &str = "-";

pub fn open_input(path: &str) -> Result<Box<dyn BufRead>, CmdError> {
    if path == STDIO {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        let file = File::open(path).map_err(|e| CmdError::io_at(path, e))?;
        Ok(Box::new(BufReader::new(file)))
    }
}

pub fn open_output(path: &str) -> Result<Box<dyn Write>, CmdError> {
    if path == STDIO {
        Ok(Box::new(BufWriter::new(io::stdout())))
    } else {
        let file = File::create(path).map_err(|e| CmdError::io_at(path, e))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

pub fn read_bytes(path: &str) -> Result<Vec<u8>, CmdError> {
    let mut buf = Vec::new();
    open_input(path)?
        .read_to_end(&mut buf)
        .map_err(|e| CmdError::io_at(path, e))?;
    Ok(buf)
}

pub fn read_text(path: &str) -> Result<String, CmdError> {
    let bytes = read_bytes(path)?;
    String::from_utf8(bytes).map_err(|_| CmdError::format_at(path, "input is not valid UTF-8"))
}

/// Writes everything, mapping failures to the output path.
pub fn write_all(out: &mut dyn Write, path: &str, data: &[u8]) -> Result<(), CmdError> {
    out.write_all(data).map_err(|e| write_err(path, e))?;
    Ok(())
}

pub fn finish_output(out: &mut dyn Write, path: &str) -> Result<(), CmdError> {
    out.flush().map_err(|e| write_err(path, e))
}

/// Failure while producing output. A broken stdout pipe means the consumer
/// stopped reading (`head`, a closed pager) and ends the process quietly;
/// everything else is a real error.
pub fn write_err(path: &str, err: io::Error) -> CmdError {
    if path == STDIO && err.kind() == io::ErrorKind::BrokenPipe {
        std::process::exit(0);
    }
    CmdError::io_at(path, err)
}

/// Prints a finished report to stdout under the same broken-pipe policy as
/// file output.
pub fn print_stdout(text: &str) -> Result<(), CmdError> {
    let mut out = io::stdout();
    out.write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .map_err(|e| write_err(STDIO, e))?;
    Ok(())
}
