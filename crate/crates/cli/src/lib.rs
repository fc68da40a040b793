//! Command-line front end for `crolab`: channel specification files,
//! JSON reports and CSV sweeps.

pub mod commands;
pub mod error;
pub mod format;
pub mod spec;

pub use error::CliError;
pub use spec::ChannelSpec;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Worker count from `CROLAB_THREADS`, default 1.
pub fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var("CROLAB_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(e) => Err(CliError::parse(format!("CROLAB_THREADS: {e}"))),
        Ok(s) => parse_threads(&s),
    }
}

pub fn parse_threads(s: &str) -> Result<usize, CliError> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(CliError::parse(format!(
            "CROLAB_THREADS must be a positive integer, got `{s}`"
        ))),
    }
}
