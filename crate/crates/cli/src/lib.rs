//! Command-line driver: configuration, run records and the result store.

pub mod commands;
pub mod config;
pub mod record;
pub mod report;
pub mod store;

use std::time::{SystemTime, UNIX_EPOCH};

use config::RunConfig;
use record::RunRecord;
use store::Store;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Resource(String),
    Io(String),
}

impl CliError {
    /// Exit status: 2 usage, 3 resource cap. I/O failures count as usage errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Resource(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<rwinv::Error> for CliError {
    fn from(e: rwinv::Error) -> Self {
        match e {
            rwinv::Error::Resource { .. } => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub const EXIT_VIOLATION: u8 = 1;

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

/// Runs `cfg` and stores the record.
pub fn execute(cfg: &RunConfig, store: &Store) -> Result<RunRecord, CliError> {
    let started = now_ms();
    let payload = commands::run(cfg, store)?;
    let record = RunRecord {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: cfg.hash(),
        config: cfg.clone(),
        started_unix_ms: started,
        finished_unix_ms: now_ms(),
        payload,
    };
    store.save(&record)?;
    Ok(record)
}
