//! Text-mining pipeline: documents in, tokens, n-grams, TFIDF vectors,
//! technical terms, and recognized domain entities out.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

mod entity;
mod ngram;
mod normalize;
mod technical;
mod tfidf;

pub use entity::{recognize_entities, EntityMatch, EntityRecognizer};
pub use ngram::{extract_ngrams, is_ngram};
pub use normalize::{normalize, TokenStream};
pub use technical::{classify_technical_terms, gazetteer_terms, ClassifierParams};
pub use tfidf::{compute_tfidf, idf, vectorize, DocTerms, OutOfVocabulary, TermStats, TfidfVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TextError {
    #[error("n_max must be at least 1, got {0}")]
    InvalidNgramOrder(usize),
    #[error("cannot compute TFIDF over an empty corpus")]
    EmptyCorpus,
}

/// Per-language stopword lists and the abbreviation expansion map.
///
/// Abbreviation keys are matched against lowercased tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextResources {
    #[serde(default)]
    pub stopwords: BTreeMap<String, BTreeSet<String>>,
    #[serde(default)]
    pub abbreviations: BTreeMap<String, String>,
}

impl TextResources {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_stopwords<I, S>(mut self, language: &str, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set = self.stopwords.entry(language.to_string()).or_default();
        for w in words {
            let w = w.as_ref().trim().to_lowercase();
            if !w.is_empty() {
                set.insert(w);
            }
        }
        self
    }

    pub fn with_abbreviation(mut self, short: &str, expansion: &str) -> Self {
        self.abbreviations
            .insert(short.to_lowercase(), expansion.to_string());
        self
    }

    pub fn stopwords_for(&self, language: &str) -> Option<&BTreeSet<String>> {
        self.stopwords.get(language)
    }
}

/// One curated entity with its surface forms and expert weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GazetteerEntry {
    pub category: String,
    pub canonical: String,
    pub surface_forms: Vec<String>,
    /// Expert weight in (0, 1]; falls back to the build's entity weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

impl GazetteerEntry {
    pub fn new<I, S>(category: &str, canonical: &str, surfaces: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        GazetteerEntry {
            category: category.to_string(),
            canonical: canonical.to_string(),
            surface_forms: surfaces.into_iter().map(Into::into).collect(),
            weight: None,
        }
    }

    pub fn with_weight(mut self, w: f64) -> Self {
        self.weight = Some(w);
        self
    }

    /// Surface forms plus the canonical form, deduplicated.
    pub fn all_forms(&self) -> Vec<&str> {
        let mut forms: Vec<&str> = self.surface_forms.iter().map(String::as_str).collect();
        forms.push(&self.canonical);
        forms.sort_unstable();
        forms.dedup();
        forms.retain(|f| !f.trim().is_empty());
        forms
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gazetteer {
    pub entries: Vec<GazetteerEntry>,
}

impl Gazetteer {
    pub fn new(entries: Vec<GazetteerEntry>) -> Self {
        Gazetteer { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn validate(&self) -> Result<(), String> {
        let mut seen = BTreeSet::new();
        for e in &self.entries {
            if e.canonical.trim().is_empty() {
                return Err("gazetteer entry with empty canonical form".into());
            }
            if !seen.insert(e.canonical.to_lowercase()) {
                return Err(format!("duplicate gazetteer canonical '{}'", e.canonical));
            }
            if let Some(w) = e.weight {
                if !(w > 0.0 && w <= 1.0) {
                    return Err(format!(
                        "gazetteer weight for '{}' must be in (0,1], got {w}",
                        e.canonical
                    ));
                }
            }
        }
        Ok(())
    }
}
