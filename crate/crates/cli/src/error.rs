use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration; the message names the offending key. Exit 2.
    Config(String),
    /// Filesystem failure at a named path. Exit 3.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Module-level failure surfaced with experiment context. Exit 3.
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Io { path, source } => {
                write!(f, "io error at {}: {source}", path.display())
            }
            CliError::Runtime(msg) => write!(f, "runtime error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } | CliError::Runtime(_) => 3,
        }
    }
}
