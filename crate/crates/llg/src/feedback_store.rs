//! Append-only feedback log file, one JSON record per line.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use llg_core::{FeedbackDraft, FeedbackError, FeedbackLog, FeedbackRecord, GraphSnapshot};

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error(transparent)]
    Invalid(#[from] FeedbackError),
    #[error("writing feedback log: {0}")]
    Io(#[from] std::io::Error),
}

/// In-memory log mirrored by a file; every append is synced before it is
/// acknowledged.
#[derive(Debug)]
pub struct FeedbackStore {
    path: PathBuf,
    file: File,
    log: FeedbackLog,
}

/// Reads a log file. A final line that is unterminated and does not parse
/// is a torn write and is dropped with a warning; any other bad line is an
/// error.
pub fn read_log(path: &Path) -> Result<FeedbackLog> {
    scan(path).map(|(log, ..)| log)
}

/// The log, the byte length of its good lines, and whether the last good
/// line lacks its newline.
fn scan(path: &Path) -> Result<(FeedbackLog, u64, bool)> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Ok((FeedbackLog::new(), 0, false))
        }
        Err(e) => return Err(e).with_context(|| format!("opening {}", path.display())),
    };
    let mut reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut line = String::new();
    let (mut n, mut valid, mut unterminated) = (0, 0u64, false);
    loop {
        line.clear();
        let read = reader.read_line(&mut line)?;
        if read == 0 {
            break;
        }
        n += 1;
        let parsed =
            (!line.trim().is_empty()).then(|| serde_json::from_str::<FeedbackRecord>(&line));
        match parsed {
            Some(Err(_)) if !line.ends_with('\n') => {
                log::warn!("{}: dropping incomplete last line {n}", path.display());
                break;
            }
            Some(Err(e)) => return Err(e).with_context(|| format!("{}: line {n}", path.display())),
            Some(Ok(rec)) => records.push(rec),
            None => {}
        }
        valid += read as u64;
        unterminated = !line.ends_with('\n');
    }
    let log = FeedbackLog::from_records(records).with_context(|| format!("{}", path.display()))?;
    Ok((log, valid, unterminated))
}

impl FeedbackStore {
    pub fn open(path: &Path) -> Result<Self> {
        let (log, valid, unterminated) = scan(path)?;
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()))?;
        if file.metadata()?.len() > valid {
            file.set_len(valid)?;
        }
        if unterminated {
            file.write_all(b"\n")?;
            file.sync_data()?;
        }
        Ok(FeedbackStore {
            path: path.to_path_buf(),
            file,
            log,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn log(&self) -> &FeedbackLog {
        &self.log
    }

    /// Validates, assigns the next id, writes, and syncs.
    pub fn record(
        &mut self,
        draft: FeedbackDraft,
        snap: &GraphSnapshot,
        created_at: String,
    ) -> Result<FeedbackRecord, RecordError> {
        draft.validate(snap)?;
        let rec = FeedbackRecord::from_draft(self.log.next_id(), draft, created_at);
        let mut line = serde_json::to_string(&rec).expect("records serialize");
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.sync_data()?;
        self.log.append(rec.clone())?;
        Ok(rec)
    }
}
