//! On-disk formats: bar files, model JSON, CSV tables and run manifests.

mod bars;
mod manifest;
mod model;
mod reports;
mod tables;

pub use bars::{load_bars, parse_timestamp, Bar, BarFile};
pub use manifest::{created_utc, sha256_file, FileEntry, Manifest, DEFAULT_SPLIT_INDEX};
pub use model::{read_model, read_model_dir, write_model, FitSummary, ModelFile};
pub use reports::{write_assignments, write_centroids, write_embedding, write_histogram, write_stats};
pub use tables::{
    read_features, read_ground_truth, read_map, read_stream, write_features, write_ground_truth,
    write_map, write_stream, StreamData, FEATURE_HEADER, GROUND_TRUTH_HEADER, MAP_HEADER,
    STREAM_HEADER,
};

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::econometrics::EconError;
use crate::regimegen::MapError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("expected file {0} does not exist")]
    MissingFile(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },

    #[error("row {row}: {message}")]
    Row { row: u64, message: String },

    #[error("{0}")]
    Format(String),

    #[error("invalid model in {path}: {source}")]
    Model { path: String, source: EconError },

    #[error("invalid transition map: {0}")]
    Map(#[from] MapError),

    #[error("{path}: content hash {found} does not match manifest {expected}")]
    HashMismatch {
        path: String,
        expected: String,
        found: String,
    },

    #[error("{path}: {found} rows, manifest records {expected}")]
    RowMismatch {
        path: String,
        expected: u64,
        found: u64,
    },
}

pub(crate) fn row_error(row: u64, message: impl Into<String>) -> IoError {
    IoError::Row {
        row,
        message: message.into(),
    }
}

/// Shortest decimal text that parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn open(path: &Path) -> Result<BufReader<File>, IoError> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(IoError::MissingFile(path.to_path_buf()))
        }
        Err(source) => Err(IoError::File {
            path: path.to_path_buf(),
            source,
        }),
    }
}

pub fn create(path: &Path) -> Result<BufWriter<File>, IoError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| IoError::File {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| IoError::File {
            path: path.to_path_buf(),
            source,
        })
}
