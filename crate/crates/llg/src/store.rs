//! Snapshot and corpus files.
//!
//! Both are JSON documents carrying a format number and a SHA-256 checksum
//! of their canonical payload. Writes go to a temporary file in the target
//! directory that is renamed into place, so readers see either the old file
//! or the new one.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use llg_core::graph::SnapshotParts;
use llg_core::{Corpus, GraphError, GraphSnapshot};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SNAPSHOT_FORMAT: u32 = 1;
pub const CORPUS_FORMAT: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: truncated or malformed file: {source}")]
    Malformed {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: unsupported format {found}, expected {expected}")]
    Format {
        path: PathBuf,
        found: u32,
        expected: u32,
    },
    #[error("{path}: checksum mismatch: stored {stored}, computed {computed}")]
    Checksum {
        path: PathBuf,
        stored: String,
        computed: String,
    },
    #[error("{path}: {source}")]
    Integrity {
        path: PathBuf,
        #[source]
        source: GraphError,
    },
}

fn checksum(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize, Deserialize)]
struct SnapshotFile {
    format: u32,
    checksum: String,
    #[serde(flatten)]
    parts: SnapshotParts,
}

#[derive(Serialize, Deserialize)]
struct CorpusFile {
    format: u32,
    checksum: String,
    corpus: Corpus,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `bytes` to `path` through a synced temporary sibling.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), StoreError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| StoreError::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

/// Checksum of the compact serialization, which is canonical for these types.
fn payload_checksum<T: Serialize>(payload: &T) -> String {
    checksum(&serde_json::to_vec(payload).expect("in-memory values serialize"))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, StoreError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    serde_json::from_slice(&bytes).map_err(|source| StoreError::Malformed {
        path: path.to_path_buf(),
        source,
    })
}

fn check(
    path: &Path,
    format: u32,
    expected: u32,
    stored: &str,
    computed: String,
) -> Result<(), StoreError> {
    if format != expected {
        return Err(StoreError::Format {
            path: path.to_path_buf(),
            found: format,
            expected,
        });
    }
    if stored != computed {
        return Err(StoreError::Checksum {
            path: path.to_path_buf(),
            stored: stored.to_string(),
            computed,
        });
    }
    Ok(())
}

pub fn save_snapshot(snap: &GraphSnapshot, path: &Path) -> Result<(), StoreError> {
    let file = SnapshotFile {
        format: SNAPSHOT_FORMAT,
        checksum: payload_checksum(snap.parts()),
        parts: snap.parts().clone(),
    };
    let bytes = serde_json::to_vec_pretty(&file).expect("in-memory values serialize");
    write_atomic(path, &bytes)
}

/// Reads, verifies, and re-indexes a snapshot; nothing is returned unless
/// every check passes.
pub fn load_snapshot(path: &Path) -> Result<GraphSnapshot, StoreError> {
    let file: SnapshotFile = read_json(path)?;
    let computed = payload_checksum(&file.parts);
    check(path, file.format, SNAPSHOT_FORMAT, &file.checksum, computed)?;
    GraphSnapshot::from_parts(file.parts).map_err(|source| StoreError::Integrity {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_corpus(corpus: &Corpus, path: &Path) -> Result<(), StoreError> {
    let file = CorpusFile {
        format: CORPUS_FORMAT,
        checksum: payload_checksum(corpus),
        corpus: corpus.clone(),
    };
    let bytes = serde_json::to_vec_pretty(&file).expect("in-memory values serialize");
    write_atomic(path, &bytes)
}

pub fn load_corpus(path: &Path) -> Result<Corpus, StoreError> {
    let file: CorpusFile = read_json(path)?;
    let computed = payload_checksum(&file.corpus);
    check(path, file.format, CORPUS_FORMAT, &file.checksum, computed)?;
    Ok(file.corpus)
}
