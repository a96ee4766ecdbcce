use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{create, open, IoError};

pub const DEFAULT_SPLIT_INDEX: u64 = 500_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Relative to the manifest's directory, `/`-separated.
    pub path: String,
    pub sha256: String,
    /// Data rows of CSV files; absent for other files.
    pub rows: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub created_utc: String,
    /// SHA-256 of each configuration's canonical JSON.
    pub configs: BTreeMap<String, String>,
    pub files: Vec<FileEntry>,
    pub split_index: u64,
}

/// `SOURCE_DATE_EPOCH` when set, otherwise the current time.
pub fn created_utc() -> String {
    let t = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|s| DateTime::<Utc>::from_timestamp(s, 0))
        .unwrap_or_else(Utc::now);
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

struct Digested {
    sha256: String,
    lines: u64,
    comments: u64,
}

fn digest(path: &Path) -> Result<Digested, IoError> {
    let mut r = open(path)?;
    let mut hasher = Sha256::new();
    let (mut lines, mut comments) = (0u64, 0u64);
    let mut at_start = true;
    loop {
        let chunk = r.fill_buf()?;
        if chunk.is_empty() {
            break;
        }
        hasher.update(chunk);
        for &b in chunk {
            if at_start && b == b'#' {
                comments += 1;
            }
            at_start = b == b'\n';
            lines += u64::from(at_start);
        }
        let n = chunk.len();
        r.consume(n);
    }
    if !at_start {
        lines += 1;
    }
    Ok(Digested {
        sha256: hex::encode(hasher.finalize()),
        lines,
        comments,
    })
}

pub fn sha256_file(path: &Path) -> Result<String, IoError> {
    Ok(digest(path)?.sha256)
}

fn entry(base: &Path, rel: &str) -> Result<FileEntry, IoError> {
    let d = digest(&base.join(rel))?;
    let rows = rel
        .ends_with(".csv")
        .then(|| d.lines.saturating_sub(d.comments + 1));
    Ok(FileEntry {
        path: rel.to_string(),
        sha256: d.sha256,
        rows,
    })
}

impl Manifest {
    pub fn new(seed: u64, split_index: u64) -> Self {
        Manifest {
            seed,
            created_utc: created_utc(),
            configs: BTreeMap::new(),
            files: Vec::new(),
            split_index,
        }
    }

    pub fn add_config<T: Serialize>(&mut self, name: &str, config: &T) -> Result<(), IoError> {
        let canonical = serde_json::to_vec(&serde_json::to_value(config)?)?;
        self.configs
            .insert(name.to_string(), hex::encode(Sha256::digest(&canonical)));
        Ok(())
    }

    /// Records `base/rel`; entries stay sorted by path.
    pub fn add_file(&mut self, base: &Path, rel: &str) -> Result<(), IoError> {
        let e = entry(base, rel)?;
        match self.files.binary_search_by(|f| f.path.as_str().cmp(rel)) {
            Ok(i) => self.files[i] = e,
            Err(i) => self.files.insert(i, e),
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        let mut text = String::new();
        open(path)?.read_to_string(&mut text)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Re-hashes every listed file relative to the manifest's directory.
    pub fn verify(path: &Path) -> Result<Self, IoError> {
        let manifest = Self::read(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for f in &manifest.files {
            let full = base.join(&f.path);
            let now = match entry(base, &f.path) {
                Ok(e) => e,
                Err(IoError::MissingFile(_)) => return Err(IoError::MissingFile(full)),
                Err(e) => return Err(e),
            };
            if now.sha256 != f.sha256 {
                return Err(IoError::HashMismatch {
                    path: f.path.clone(),
                    expected: f.sha256.clone(),
                    found: now.sha256,
                });
            }
            if let (Some(expected), Some(found)) = (f.rows, now.rows) {
                if expected != found {
                    return Err(IoError::RowMismatch {
                        path: f.path.clone(),
                        expected,
                        found,
                    });
                }
            }
        }
        Ok(manifest)
    }
}
