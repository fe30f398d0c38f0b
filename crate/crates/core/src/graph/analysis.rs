use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{BuildConfig, GraphError};
use crate::corpus::{Corpus, DesignCaseDoc};
use crate::textmine::{
    classify_technical_terms, compute_tfidf, extract_ngrams, gazetteer_terms, normalize, DocTerms,
    EntityMatch, EntityRecognizer, TermStats, TextResources, TfidfVector, TokenStream,
};

/// Text-mining output for one document.
#[derive(Debug, Clone, PartialEq)]
pub struct DocAnalysis {
    pub tokens: TokenStream,
    /// n-gram counts (n = 1..=n_max), summed over sections.
    pub terms: BTreeMap<String, u32>,
    pub entities: Vec<EntityMatch>,
}

/// Text-mining output for a whole corpus, aligned with `Corpus::docs`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusAnalysis {
    pub docs: Vec<DocAnalysis>,
    pub vectors: Vec<TfidfVector>,
    pub stats: BTreeMap<String, TermStats>,
    pub technical: BTreeSet<String>,
}

/// Normalizes each section separately so n-grams never span sections.
pub fn analyze_document(
    doc: &DesignCaseDoc,
    resources: &TextResources,
    recognizer: &EntityRecognizer<'_>,
    n_max: usize,
) -> Result<DocAnalysis, GraphError> {
    let mut tokens = TokenStream::default().with_doc_id(doc.id.clone());
    let mut terms = BTreeMap::new();
    for section in doc.sections() {
        let ts = normalize(section, &doc.language, resources);
        for (gram, count) in extract_ngrams(&ts.tokens, n_max)? {
            *terms.entry(gram).or_insert(0) += count;
        }
        tokens.extend(ts);
    }
    Ok(DocAnalysis {
        tokens,
        terms,
        entities: recognizer.recognize(doc),
    })
}

pub fn analyze_corpus(corpus: &Corpus, config: &BuildConfig) -> Result<CorpusAnalysis, GraphError> {
    config.validate()?;
    let recognizer = EntityRecognizer::new(&corpus.gazetteer);
    let docs = corpus
        .docs
        .iter()
        .map(|d| analyze_document(d, &corpus.resources, &recognizer, config.n_max))
        .collect::<Result<Vec<_>, _>>()?;
    if docs.is_empty() {
        return Ok(CorpusAnalysis {
            docs,
            vectors: Vec::new(),
            stats: BTreeMap::new(),
            technical: BTreeSet::new(),
        });
    }
    let terms: Vec<DocTerms> = corpus
        .docs
        .iter()
        .zip(&docs)
        .map(|(d, a)| DocTerms::new(d.id.clone(), a.terms.clone()))
        .collect();
    let (vectors, stats) = compute_tfidf(&terms)?;
    let uppercase: BTreeSet<_> = docs
        .iter()
        .flat_map(|a| a.tokens.uppercase.iter().cloned())
        .collect();
    let technical = classify_technical_terms(
        &stats,
        &uppercase,
        &gazetteer_terms(&corpus.gazetteer, &corpus.resources),
        docs.len() as u64,
        &config.classifier,
    );
    Ok(CorpusAnalysis {
        docs,
        vectors,
        stats,
        technical,
    })
}
