//! Configuration files, binary snapshots, checkpoints and report export.
//!
//! Every binary artifact starts with an 8-byte magic, the format version, the
//! config hash, the model id and the mesh, so a file from another run is
//! rejected instead of misread.

mod checkpoint;
mod config;
mod report;
mod snapshot;

use std::path::PathBuf;

use thiserror::Error;

use crate::scheme::{Mesh, SchemeError};

pub use checkpoint::{checkpoint, restore, CHECKPOINT_MAGIC};
pub use config::{
    load_config, write_config, MetricConfig, OutputConfig, RunConfig, StudyConfig, TimeConfig, DEFAULT_THRESHOLD,
    OUT_DIR_ENV,
};
pub use report::{run_summary, study_csv, study_summary, study_table, write_study, write_trajectory};
pub use snapshot::{
    check_meta, csv_header, read_snapshot, read_snapshot_any, write_csv_rows, write_snapshot, ArtifactMeta,
    FORMAT_VERSION, SNAPSHOT_MAGIC,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("config not found: {}", .0.display())]
    NotFound(PathBuf),
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("invalid {field}: {message}")]
    Invalid { field: String, message: String },
    #[error("corrupt input: {0}")]
    Corrupt(String),
    #[error("truncated input")]
    Truncated,
    #[error("version mismatch: expected {expected}, found {found}")]
    VersionMismatch { expected: String, found: String },
    #[error("config hash mismatch: expected {expected:016x}, found {found:016x}")]
    HashMismatch { expected: u64, found: u64 },
    #[error("mesh mismatch: expected n = {} on [{}, {}], found n = {} on [{}, {}]", expected.n, expected.r_min, expected.r_max, found.n, found.r_min, found.r_max)]
    MeshMismatch { expected: Mesh, found: Mesh },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Io(std::io::Error),
}

impl From<std::io::Error> for IoError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            IoError::Truncated
        } else {
            IoError::Io(e)
        }
    }
}
