//! Append-only directory of JSON run records named by config hash.

use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};
use std::thread::sleep;
use std::time::Duration;

use crate::record::RunRecord;
use crate::CliError;

pub const STORE_ENV: &str = "RWINV_STORE";
const DEFAULT_DIR: &str = ".rwinv-store";

fn io(e: std::io::Error, path: &Path) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub struct Store {
    dir: PathBuf,
}

/// Held while writing; removed on drop.
struct Lock(PathBuf);

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl Store {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Store { dir: dir.into() }
    }

    /// `$RWINV_STORE`, or `.rwinv-store` in the working directory.
    pub fn from_env() -> Self {
        Store::new(std::env::var_os(STORE_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_DIR.into()))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn lock(&self) -> Result<Lock, CliError> {
        fs::create_dir_all(&self.dir).map_err(|e| io(e, &self.dir))?;
        let path = self.dir.join(".lock");
        for _ in 0..200 {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(_) => return Ok(Lock(path)),
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => sleep(Duration::from_millis(50)),
                Err(e) => return Err(io(e, &path)),
            }
        }
        Err(CliError::Io(format!("store is locked by another writer: {}", path.display())))
    }

    /// Writes `record` as `<hash>.json`. A record with the same hash and payload is
    /// left as it is; a differing payload is kept beside it, never overwritten.
    pub fn save(&self, record: &RunRecord) -> Result<PathBuf, CliError> {
        let _lock = self.lock()?;
        let mut path = self.dir.join(format!("{}.json", record.config_hash));
        if path.exists() {
            let old = read(&path)?;
            if old.payload == record.payload {
                return Ok(path);
            }
            path = self.dir.join(format!("{}.{}.json", record.config_hash, record.finished_unix_ms));
        }
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string_pretty(record).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(&tmp, text + "\n").map_err(|e| io(e, &tmp))?;
        fs::rename(&tmp, &path).map_err(|e| io(e, &path))?;
        Ok(path)
    }

    /// Every stored record, in file name order. A missing store is empty.
    pub fn load_all(&self) -> Result<Vec<RunRecord>, CliError> {
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(io(e, &self.dir)),
        };
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        paths.iter().map(|p| read(p)).collect()
    }
}

fn read(path: &Path) -> Result<RunRecord, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io(e, path))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
