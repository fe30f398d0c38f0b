use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::TextError;

/// Term counts for one document (unigrams and n-grams alike).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DocTerms {
    pub doc_id: String,
    pub counts: BTreeMap<String, u32>,
}

impl DocTerms {
    pub fn new(doc_id: impl Into<String>, counts: BTreeMap<String, u32>) -> Self {
        DocTerms {
            doc_id: doc_id.into(),
            counts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermStats {
    pub term: String,
    pub df: u32,
    pub total_count: u64,
    pub idf: f64,
}

/// Smoothed inverse document frequency: `ln((1 + n) / (1 + df)) + 1`.
///
/// `df = 0` gives the weight used for terms unseen at build time.
pub fn idf(corpus_size: u64, df: u32) -> f64 {
    libm::log((1.0 + corpus_size as f64) / (1.0 + f64::from(df))) + 1.0
}

fn log_tf(count: u32) -> f64 {
    1.0 + libm::log(f64::from(count))
}

/// L2-normalized sparse TFIDF vector.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TfidfVector {
    pub doc_id: String,
    pub weights: BTreeMap<String, f64>,
    /// L2 norm before normalization.
    pub norm: f64,
}

impl TfidfVector {
    /// Normalizes raw weights; an all-zero input yields an empty vector.
    pub fn from_raw(doc_id: impl Into<String>, raw: BTreeMap<String, f64>) -> Self {
        let norm = libm::sqrt(raw.values().map(|w| w * w).sum::<f64>());
        let weights = if norm > 0.0 {
            raw.into_iter()
                .filter(|(_, w)| *w > 0.0)
                .map(|(k, w)| (k, w / norm))
                .collect()
        } else {
            BTreeMap::new()
        };
        TfidfVector {
            doc_id: doc_id.into(),
            weights,
            norm,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, term: &str) -> f64 {
        self.weights.get(term).copied().unwrap_or(0.0)
    }

    pub fn dot(&self, other: &TfidfVector) -> f64 {
        let (small, large) = if self.weights.len() <= other.weights.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .weights
            .iter()
            .filter_map(|(k, w)| large.weights.get(k).map(|v| w * v))
            .sum()
    }

    /// Cosine of two unit vectors, clamped to [0, 1].
    pub fn cosine(&self, other: &TfidfVector) -> f64 {
        self.dot(other).clamp(0.0, 1.0)
    }

    /// Keys present in both vectors with `min(weight)`, strongest first.
    pub fn shared_terms(&self, other: &TfidfVector) -> Vec<(String, f64)> {
        let mut shared: Vec<(String, f64)> = self
            .weights
            .iter()
            .filter_map(|(k, w)| other.weights.get(k).map(|v| (k.clone(), w.min(*v))))
            .collect();
        shared.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        shared
    }
}

/// How `vectorize` treats terms missing from the statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutOfVocabulary {
    /// Skip them (queries).
    Drop,
    /// Weight them with `idf(n, 0)`.
    Smoothed,
}

/// TFIDF vector for `counts` under fixed corpus statistics.
pub fn vectorize(
    doc_id: &str,
    counts: &BTreeMap<String, u32>,
    stats: &BTreeMap<String, TermStats>,
    corpus_size: u64,
    oov: OutOfVocabulary,
) -> TfidfVector {
    let raw = counts
        .iter()
        .filter(|(_, c)| **c > 0)
        .filter_map(|(term, c)| {
            let idf = match (stats.get(term), oov) {
                (Some(s), _) => s.idf,
                (None, OutOfVocabulary::Smoothed) => idf(corpus_size, 0),
                (None, OutOfVocabulary::Drop) => return None,
            };
            Some((term.clone(), log_tf(*c) * idf))
        })
        .collect();
    TfidfVector::from_raw(doc_id, raw)
}

/// Computes corpus statistics and one normalized vector per document, in
/// input order.
///
/// `tf = 1 + ln(count)`, `idf = ln((1 + N) / (1 + df)) + 1`, weight `tf * idf`.
pub fn compute_tfidf(
    corpus: &[DocTerms],
) -> Result<(Vec<TfidfVector>, BTreeMap<String, TermStats>), TextError> {
    if corpus.is_empty() {
        return Err(TextError::EmptyCorpus);
    }
    let n = corpus.len() as u64;
    let mut stats: BTreeMap<String, TermStats> = BTreeMap::new();
    for doc in corpus {
        for (term, count) in doc.counts.iter().filter(|(_, c)| **c > 0) {
            let s = stats.entry(term.clone()).or_insert_with(|| TermStats {
                term: term.clone(),
                df: 0,
                total_count: 0,
                idf: 0.0,
            });
            s.df += 1;
            s.total_count += u64::from(*count);
        }
    }
    for s in stats.values_mut() {
        s.idf = idf(n, s.df);
    }
    let vectors = corpus
        .iter()
        .map(|d| vectorize(&d.doc_id, &d.counts, &stats, n, OutOfVocabulary::Drop))
        .collect();
    Ok((vectors, stats))
}
