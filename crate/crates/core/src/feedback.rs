//! User feedback on results and its folding into edge weights.
//!
//! Records are appended to a log and applied later, producing a new
//! snapshot: each judged path edge is scaled by
//! `1 + eta * (value_added - 3) / 2` when the result was relevant and by
//! `1 - eta` otherwise, then clamped to `[0.01, 0.99]`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeRef, GraphSnapshot};
use crate::search::ResultKind;

pub const DEFAULT_ETA: f64 = 0.1;
pub const MIN_WEIGHT: f64 = 0.01;
pub const MAX_WEIGHT: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeedbackError {
    #[error("value_added must be between 1 and 5, got {0}")]
    ValueOutOfRange(u8),
    #[error("unknown document '{0}'")]
    UnknownDocument(String),
    #[error("path_edges must be empty for direct results and non-empty for transitive ones")]
    PathKindMismatch,
    #[error("edge {0}–{1} is not in the snapshot")]
    UnknownEdge(String, String),
    #[error("record id {id} does not follow {last}")]
    NonMonotoneId { id: u64, last: u64 },
    #[error("invalid eta {0}: must be in [0, 1)")]
    InvalidEta(f64),
}

/// A judgement as submitted, before it gets an id and a timestamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackDraft {
    pub query_raw: String,
    pub doc_id: String,
    pub relevant: bool,
    pub value_added: u8,
    pub result_kind: ResultKind,
    #[serde(default)]
    pub path_edges: Vec<EdgeRef>,
}

impl FeedbackDraft {
    /// Checks the draft against a snapshot.
    pub fn validate(&self, snap: &GraphSnapshot) -> Result<(), FeedbackError> {
        if !(1..=5).contains(&self.value_added) {
            return Err(FeedbackError::ValueOutOfRange(self.value_added));
        }
        if snap.doc(&self.doc_id).is_none() {
            return Err(FeedbackError::UnknownDocument(self.doc_id.clone()));
        }
        let transitive = self.result_kind == ResultKind::Transitive;
        if transitive == self.path_edges.is_empty() {
            return Err(FeedbackError::PathKindMismatch);
        }
        for e in &self.path_edges {
            if snap.edge_between(&e.src, &e.dst).is_none() {
                return Err(FeedbackError::UnknownEdge(e.src.clone(), e.dst.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackRecord {
    pub id: u64,
    pub query_raw: String,
    pub doc_id: String,
    pub relevant: bool,
    pub value_added: u8,
    pub result_kind: ResultKind,
    #[serde(default)]
    pub path_edges: Vec<EdgeRef>,
    pub created_at: String,
}

impl FeedbackRecord {
    pub fn from_draft(id: u64, draft: FeedbackDraft, created_at: impl Into<String>) -> Self {
        FeedbackRecord {
            id,
            query_raw: draft.query_raw,
            doc_id: draft.doc_id,
            relevant: draft.relevant,
            value_added: draft.value_added,
            result_kind: draft.result_kind,
            path_edges: draft.path_edges,
            created_at: created_at.into(),
        }
    }

    /// Multiplier applied to each path edge.
    pub fn factor(&self, eta: f64) -> f64 {
        feedback_factor(self.relevant, self.value_added, eta)
    }
}

pub fn feedback_factor(relevant: bool, value_added: u8, eta: f64) -> f64 {
    if relevant {
        1.0 + eta * (f64::from(value_added) - 3.0) / 2.0
    } else {
        1.0 - eta
    }
}

pub fn clamp_weight(w: f64) -> f64 {
    w.clamp(MIN_WEIGHT, MAX_WEIGHT)
}

/// Append-only, id-ordered feedback records.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeedbackLog {
    records: Vec<FeedbackRecord>,
    /// Highest record id known to be applied.
    #[serde(default)]
    applied_up_to: u64,
}

impl FeedbackLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a log from stored records, which must have strictly increasing ids.
    pub fn from_records(records: Vec<FeedbackRecord>) -> Result<Self, FeedbackError> {
        let mut log = FeedbackLog::new();
        for r in records {
            log.append(r)?;
        }
        Ok(log)
    }

    pub fn records(&self) -> &[FeedbackRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last_id(&self) -> u64 {
        self.records.last().map_or(0, |r| r.id)
    }

    pub fn next_id(&self) -> u64 {
        self.last_id() + 1
    }

    pub fn applied_up_to(&self) -> u64 {
        self.applied_up_to
    }

    /// Raises the watermark; it never moves back.
    pub fn mark_applied(&mut self, watermark: u64) {
        self.applied_up_to = self.applied_up_to.max(watermark);
    }

    pub fn append(&mut self, record: FeedbackRecord) -> Result<u64, FeedbackError> {
        let last = self.last_id();
        if record.id <= last {
            return Err(FeedbackError::NonMonotoneId {
                id: record.id,
                last,
            });
        }
        let id = record.id;
        self.records.push(record);
        Ok(id)
    }

    /// Validates `draft` against `snap` and appends it with the next id.
    pub fn record(
        &mut self,
        draft: FeedbackDraft,
        snap: &GraphSnapshot,
        created_at: impl Into<String>,
    ) -> Result<FeedbackRecord, FeedbackError> {
        draft.validate(snap)?;
        let rec = FeedbackRecord::from_draft(self.next_id(), draft, created_at);
        self.append(rec.clone())?;
        Ok(rec)
    }

    /// Records with ids above `watermark`.
    pub fn pending(&self, watermark: u64) -> impl Iterator<Item = &FeedbackRecord> {
        self.records.iter().filter(move |r| r.id > watermark)
    }
}

/// Outcome of folding feedback into a snapshot.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ApplyReport {
    /// Records whose edges were updated (direct-result records included).
    pub applied: Vec<u64>,
    /// Records skipped because an edge no longer exists, with the reason.
    pub skipped: Vec<(u64, String)>,
    /// Number of edge weight updates performed.
    pub edge_updates: usize,
    pub watermark: u64,
}

/// Applies every record above the snapshot's watermark.
///
/// Returns the snapshot unchanged when nothing is pending; otherwise a new
/// snapshot with the next version and the watermark at the last record.
pub fn apply_feedback(
    snap: &GraphSnapshot,
    log: &FeedbackLog,
    eta: f64,
) -> Result<(GraphSnapshot, ApplyReport), FeedbackError> {
    if !(0.0..1.0).contains(&eta) {
        return Err(FeedbackError::InvalidEta(eta));
    }
    let start = snap.feedback_watermark();
    let pending: Vec<&FeedbackRecord> = log.pending(start).collect();
    let mut report = ApplyReport {
        watermark: start,
        ..ApplyReport::default()
    };
    if pending.is_empty() {
        return Ok((snap.clone(), report));
    }

    let mut parts = snap.parts().clone();
    for rec in pending {
        report.watermark = report.watermark.max(rec.id);
        let mut indices = Vec::with_capacity(rec.path_edges.len());
        let mut missing = None;
        for e in &rec.path_edges {
            let idx = snap
                .node_index(&e.src)
                .zip(snap.node_index(&e.dst))
                .and_then(|(a, b)| snap.edge_index_between(a, b));
            match idx {
                Some(i) => indices.push(i),
                None => {
                    missing = Some(format!("edge {}–{} no longer exists", e.src, e.dst));
                    break;
                }
            }
        }
        if let Some(reason) = missing {
            report.skipped.push((rec.id, reason));
            continue;
        }
        let f = rec.factor(eta);
        for i in indices {
            // Snapshot edges and parts edges share one sorted order.
            let edge = &mut parts.edges[i];
            edge.weight = clamp_weight(edge.weight * f);
            edge.provenance.push(format!("feedback:{}", rec.id));
            report.edge_updates += 1;
        }
        report.applied.push(rec.id);
    }
    parts.version = snap.version() + 1;
    parts.feedback_watermark = report.watermark;
    let next = GraphSnapshot::from_parts(parts).expect("reweighting keeps a valid snapshot valid");
    Ok((next, report))
}
