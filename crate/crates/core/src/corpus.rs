//! Corpus model: lessons-learned documents, the project-structure forest, and
//! the validation report shared by every ingest step.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::textmine::{Gazetteer, TextResources};

fn default_language() -> String {
    "en".to_string()
}

/// One lessons-learned report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignCaseDoc {
    pub id: String,
    #[serde(default)]
    pub title: String,
    pub failure_description: String,
    #[serde(default)]
    pub cause: String,
    #[serde(default)]
    pub solution: String,
    /// Project element ids, root first.
    #[serde(default)]
    pub project_path: Vec<String>,
    #[serde(default = "default_language")]
    pub language: String,
    #[serde(default)]
    pub created_at: String,
}

impl DesignCaseDoc {
    /// Minimal document, mostly for tests and tooling.
    pub fn new(id: impl Into<String>, failure_description: impl Into<String>) -> Self {
        DesignCaseDoc {
            id: id.into(),
            title: String::new(),
            failure_description: failure_description.into(),
            cause: String::new(),
            solution: String::new(),
            project_path: Vec::new(),
            language: default_language(),
            created_at: String::new(),
        }
    }

    /// Text sections in a fixed order: title, failure, cause, solution.
    pub fn sections(&self) -> [&str; 4] {
        [
            &self.title,
            &self.failure_description,
            &self.cause,
            &self.solution,
        ]
    }

    /// All sections joined by newlines.
    pub fn full_text(&self) -> String {
        let mut out = String::new();
        for s in self.sections() {
            if s.is_empty() {
                continue;
            }
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(s);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Project,
    Module,
    Element,
}

impl ElementKind {
    fn depth(self) -> u8 {
        match self {
            ElementKind::Project => 0,
            ElementKind::Module => 1,
            ElementKind::Element => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::Project => "project",
            ElementKind::Module => "module",
            ElementKind::Element => "element",
        }
    }
}

/// Node of the project → module → element metadata forest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectElement {
    pub id: String,
    pub name: String,
    pub kind: ElementKind,
    #[serde(default)]
    pub parent_id: Option<String>,
}

impl ProjectElement {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        kind: ElementKind,
        parent_id: Option<&str>,
    ) -> Self {
        ProjectElement {
            id: id.into(),
            name: name.into(),
            kind,
            parent_id: parent_id.map(ToString::to_string),
        }
    }
}

/// A located finding (error or warning).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub locator: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub doc_count: usize,
    pub element_count: usize,
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl CorpusReport {
    pub fn is_accepted(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn error(&mut self, locator: impl Into<String>, message: impl Into<String>) {
        self.errors.push(Finding {
            locator: locator.into(),
            message: message.into(),
        });
    }

    pub fn warn(&mut self, locator: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(Finding {
            locator: locator.into(),
            message: message.into(),
        });
    }

    /// Appends another report's findings; counts are taken from `other` when
    /// it has them.
    pub fn merge(&mut self, other: CorpusReport) {
        self.doc_count = self.doc_count.max(other.doc_count);
        self.element_count = self.element_count.max(other.element_count);
        self.errors.extend(other.errors);
        self.warnings.extend(other.warnings);
    }
}

/// Validated project forest, keyed by element id.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<ProjectElement>", into = "Vec<ProjectElement>")]
pub struct ProjectForest {
    elements: BTreeMap<String, ProjectElement>,
}

impl From<Vec<ProjectElement>> for ProjectForest {
    fn from(v: Vec<ProjectElement>) -> Self {
        ProjectForest {
            elements: v.into_iter().map(|e| (e.id.clone(), e)).collect(),
        }
    }
}

impl From<ProjectForest> for Vec<ProjectElement> {
    fn from(f: ProjectForest) -> Self {
        f.elements.into_values().collect()
    }
}

impl ProjectForest {
    /// Validates raw elements and returns the accepted forest.
    ///
    /// Rejected elements (duplicate ids, unknown or rejected parents, cycle
    /// members, kind inversions) are left out of the forest and reported as
    /// errors. An element placed directly under a project is accepted with a
    /// kind-skip warning.
    pub fn validate(raw: Vec<ProjectElement>) -> (ProjectForest, CorpusReport) {
        let mut report = CorpusReport::default();
        let mut by_id: BTreeMap<String, ProjectElement> = BTreeMap::new();
        for el in raw {
            if by_id.contains_key(&el.id) {
                report.error(locator(&el.id), "duplicate element id");
                continue;
            }
            by_id.insert(el.id.clone(), el);
        }

        let mut rejected: BTreeSet<String> = BTreeSet::new();

        // Unknown parents.
        for el in by_id.values() {
            if let Some(p) = &el.parent_id {
                if !by_id.contains_key(p) {
                    report.error(locator(&el.id), format!("unknown parent_id '{p}'"));
                    rejected.insert(el.id.clone());
                }
            }
        }

        // Cycles: walk parent chains; a revisit inside the current walk is a cycle.
        let mut in_cycle: BTreeSet<String> = BTreeSet::new();
        for start in by_id.keys() {
            if in_cycle.contains(start) {
                continue;
            }
            let mut chain: Vec<&str> = Vec::new();
            let mut cur = Some(start.as_str());
            while let Some(id) = cur {
                if let Some(pos) = chain.iter().position(|c| *c == id) {
                    let mut members: Vec<String> =
                        chain[pos..].iter().map(|s| s.to_string()).collect();
                    members.sort();
                    if !members.iter().any(|m| in_cycle.contains(m)) {
                        report.error(
                            locator(&members[0]),
                            format!("cycle among elements: {}", members.join(", ")),
                        );
                    }
                    in_cycle.extend(members);
                    break;
                }
                if in_cycle.contains(id) {
                    break;
                }
                chain.push(id);
                cur = by_id.get(id).and_then(|e| e.parent_id.as_deref());
            }
        }
        rejected.extend(in_cycle.iter().cloned());

        // Kind order along parent links.
        for el in by_id.values() {
            if rejected.contains(&el.id) {
                continue;
            }
            let Some(parent) = el.parent_id.as_ref().and_then(|p| by_id.get(p)) else {
                continue;
            };
            let (c, p) = (el.kind.depth(), parent.kind.depth());
            if c < p || (c == p && el.kind != ElementKind::Module) {
                report.error(
                    locator(&el.id),
                    format!(
                        "kind inversion: {} under {} '{}'",
                        el.kind.as_str(),
                        parent.kind.as_str(),
                        parent.id
                    ),
                );
                rejected.insert(el.id.clone());
            } else if c > p + 1 {
                report.warn(
                    locator(&el.id),
                    format!(
                        "kind skip: {} directly under {} '{}'",
                        el.kind.as_str(),
                        parent.kind.as_str(),
                        parent.id
                    ),
                );
            }
        }

        // Descendants of rejected elements lose their anchor.
        loop {
            let orphaned: Vec<String> = by_id
                .values()
                .filter(|e| !rejected.contains(&e.id))
                .filter(|e| e.parent_id.as_ref().is_some_and(|p| rejected.contains(p)))
                .map(|e| e.id.clone())
                .collect();
            if orphaned.is_empty() {
                break;
            }
            for id in orphaned {
                report.error(locator(&id), "parent element was rejected");
                rejected.insert(id);
            }
        }

        by_id.retain(|id, _| !rejected.contains(id));
        report.element_count = by_id.len();
        (ProjectForest { elements: by_id }, report)
    }

    pub fn get(&self, id: &str) -> Option<&ProjectElement> {
        self.elements.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.elements.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ProjectElement> {
        self.elements.values()
    }

    /// Checks that `path` is a root-to-descendant chain in this forest.
    pub fn check_path(&self, path: &[String]) -> Result<(), String> {
        for (i, id) in path.iter().enumerate() {
            let Some(el) = self.elements.get(id) else {
                return Err(format!("project_path references unknown element '{id}'"));
            };
            let expected = if i == 0 { None } else { Some(&path[i - 1]) };
            if el.parent_id.as_ref() != expected {
                return Err(match expected {
                    None => format!("project_path must start at a root, '{id}' has a parent"),
                    Some(prev) => format!("'{id}' is not a child of '{prev}'"),
                });
            }
        }
        Ok(())
    }
}

fn locator(id: &str) -> String {
    format!("element '{id}'")
}

/// Cross-checks documents against the forest and re-asserts document
/// invariants.
pub fn validate_corpus(docs: &[DesignCaseDoc], forest: &ProjectForest) -> CorpusReport {
    let mut report = CorpusReport {
        doc_count: docs.len(),
        element_count: forest.len(),
        ..CorpusReport::default()
    };
    if docs.is_empty() {
        report.warn("corpus", "empty corpus");
    }
    let mut seen = BTreeSet::new();
    for doc in docs {
        let loc = format!("doc '{}'", doc.id);
        if !seen.insert(doc.id.as_str()) {
            report.error(loc.clone(), "duplicate document id");
        }
        if doc.failure_description.trim().is_empty() {
            report.error(loc.clone(), "empty failure_description");
        }
        if let Err(msg) = forest.check_path(&doc.project_path) {
            report.error(loc, msg);
        }
    }
    report
}

/// Everything needed to build a graph: documents, metadata, and text resources.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub docs: Vec<DesignCaseDoc>,
    #[serde(default)]
    pub forest: ProjectForest,
    #[serde(default)]
    pub resources: TextResources,
    #[serde(default)]
    pub gazetteer: Gazetteer,
}

impl Corpus {
    pub fn validate(&self) -> CorpusReport {
        let mut report = validate_corpus(&self.docs, &self.forest);
        if let Err(msg) = self.gazetteer.validate() {
            report.error("gazetteer", msg);
        }
        report
    }
}
