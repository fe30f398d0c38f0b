use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::{is_ngram, normalize, Gazetteer, TermStats, TextResources};

/// Thresholds for the specificity rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierParams {
    /// Maximum document share for a specific term.
    pub specificity_frac: f64,
    /// Minimum corpus-wide occurrences for a specific term.
    pub min_count: u64,
}

impl Default for ClassifierParams {
    fn default() -> Self {
        ClassifierParams {
            specificity_frac: 0.2,
            min_count: 2,
        }
    }
}

/// Single-token normalized forms of every gazetteer surface and canonical.
pub fn gazetteer_terms(gazetteer: &Gazetteer, resources: &TextResources) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for entry in &gazetteer.entries {
        for form in entry.all_forms() {
            let ts = normalize(form, "en", resources);
            if ts.tokens.len() == 1 {
                out.extend(ts.tokens);
            }
        }
    }
    out
}

fn has_letter_and_digit(term: &str) -> bool {
    term.chars().any(char::is_alphabetic) && term.chars().any(|c| c.is_numeric())
}

/// Unigram terms that any rule marks as technical:
/// gazetteer membership, mixed letter+digit form, an all-caps raw form of
/// 2 to 6 characters, or corpus specificity (`df <= ceil(frac * n)` and
/// `total_count >= min_count`).
pub fn classify_technical_terms(
    stats: &BTreeMap<String, TermStats>,
    uppercase_seen: &BTreeSet<String>,
    gazetteer_terms: &BTreeSet<String>,
    corpus_size: u64,
    params: &ClassifierParams,
) -> BTreeSet<String> {
    let df_limit = libm::ceil(params.specificity_frac * corpus_size as f64) as u64;
    stats
        .values()
        .filter(|s| !is_ngram(&s.term))
        .filter(|s| {
            let len = s.term.chars().count();
            gazetteer_terms.contains(&s.term)
                || has_letter_and_digit(&s.term)
                || ((2..=6).contains(&len) && uppercase_seen.contains(&s.term))
                || (u64::from(s.df) <= df_limit && s.total_count >= params.min_count)
        })
        .map(|s| s.term.clone())
        .collect()
}
