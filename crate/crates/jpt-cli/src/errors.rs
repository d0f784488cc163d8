//! Command failure classes and their exit codes.
//!
//! The codes are stable API: 0 success, 1 format error, 2 I/O error,
//! 3 conflict. Argument parsing errors keep clap's own exit behavior.

use std::fmt;
use std::io;

#[derive(Debug)]
pub enum CmdError {
    /// Malformed input or unencodable content. Exit 1.
    Format(String),
    /// Filesystem or pipe failure. Exit 2.
    Io(String),
    /// Strict apply found mismatched operations. Exit 3.
    Conflict(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Format(_) => 1,
            CmdError::Io(_) => 2,
            CmdError::Conflict(_) => 3,
        }
    }

    /// I/O failure tagged with the path it happened on.
    pub fn io_at(path: &str, err: io::Error) -> Self {
        CmdError::Io(format!("{path}: {err}"))
    }

    pub fn format_at(path: &str, err: impl fmt::Display) -> Self {
        CmdError::Format(format!("{path}: {err}"))
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Format(msg) | CmdError::Io(msg) | CmdError::Conflict(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl From<io::Error> for CmdError {
    fn from(err: io::Error) -> Self {
        CmdError::Io(err.to_string())
    }
}
