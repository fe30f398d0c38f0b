//! Document and project-structure parsing.

use std::collections::BTreeSet;
use std::io::BufRead;

use llg_core::{CorpusReport, DesignCaseDoc, ProjectElement, ProjectForest};
use serde_json::{Map, Value};

/// Fields a document record may carry; anything else is warned about.
pub const DOC_FIELDS: [&str; 8] = [
    "id",
    "title",
    "failure_description",
    "cause",
    "solution",
    "project_path",
    "language",
    "created_at",
];

fn line_locator(n: usize) -> String {
    format!("line {n}")
}

/// Parses one JSON document per line. Malformed lines are reported with
/// their line number and skipped; the first of two records sharing an id wins.
pub fn parse_documents<R: BufRead>(reader: R) -> (Vec<DesignCaseDoc>, CorpusReport) {
    let mut report = CorpusReport::default();
    let mut docs = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in reader.lines().enumerate() {
        let at = line_locator(i + 1);
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                report.error(at, format!("unreadable line: {e}"));
                continue;
            }
        };
        if line.trim().is_empty() {
            continue;
        }
        let object: Map<String, Value> = match serde_json::from_str(&line) {
            Ok(Value::Object(m)) => m,
            Ok(_) => {
                report.error(at, "record is not a JSON object");
                continue;
            }
            Err(e) => {
                report.error(at, format!("malformed JSON: {e}"));
                continue;
            }
        };
        for key in object.keys().filter(|k| !DOC_FIELDS.contains(&k.as_str())) {
            report.warn(&at, format!("unknown field '{key}' ignored"));
        }
        let has_failure = object
            .get("failure_description")
            .and_then(Value::as_str)
            .is_some_and(|s| !s.trim().is_empty());
        if !has_failure {
            report.error(at, "missing or empty failure_description");
            continue;
        }
        let doc: DesignCaseDoc = match serde_json::from_value(Value::Object(object)) {
            Ok(d) => d,
            Err(e) => {
                report.error(at, format!("invalid record: {e}"));
                continue;
            }
        };
        if !seen.insert(doc.id.clone()) {
            report.error(at, format!("duplicate id '{}'", doc.id));
            continue;
        }
        docs.push(doc);
    }
    report.doc_count = docs.len();
    (docs, report)
}

/// Parses a JSON array of `{id, name, kind, parent_id}` and validates the forest.
pub fn parse_project_tree(text: &str) -> (ProjectForest, CorpusReport) {
    match serde_json::from_str::<Vec<ProjectElement>>(text) {
        Ok(raw) => ProjectForest::validate(raw),
        Err(e) => {
            let mut report = CorpusReport::default();
            report.error("project file", format!("malformed JSON: {e}"));
            (ProjectForest::default(), report)
        }
    }
}
