//! Seeded synthetic corpora with planted keyword-invisible chains.
//!
//! Every query is a single token placed only in its anchor documents. Each
//! query also owns a gazetteer entity that appears in its anchors and in a
//! set of chained documents which never contain the query token, so the
//! keyword baseline cannot find them while an entity hop can.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{DesignCaseDoc, ElementKind, ProjectElement, ProjectForest};
use crate::textmine::{Gazetteer, GazetteerEntry};

/// Filler tokens per document, inclusive range.
const FILLER_MIN: usize = 24;
const FILLER_MAX: usize = 36;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub seed: u64,
    pub doc_count: usize,
    /// Distinct filler words.
    pub vocab_size: usize,
    pub entity_count: usize,
    /// Share of documents reachable from their query only through an entity.
    pub chain_fraction: f64,
    pub query_count: usize,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            seed: 42,
            doc_count: 120,
            vocab_size: 2000,
            entity_count: 30,
            chain_fraction: 0.5,
            query_count: 22,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("chain_fraction must be in [0,1], got {0}")]
    ChainFraction(f64),
    #[error("chained documents need at least one entity")]
    NoEntities,
    #[error("need at least one query")]
    NoQueries,
    #[error("need at least one filler word")]
    NoVocabulary,
    #[error("{anchors} anchor documents cannot cover {queries} queries")]
    TooFewAnchors { anchors: usize, queries: usize },
}

/// A generated query and what the generator guarantees about it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthQuery {
    pub query: String,
    /// Documents containing the query token.
    pub anchors: Vec<String>,
    /// Documents sharing the query's entity but not its token.
    pub keyword_invisible: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCorpus {
    pub params: SynthParams,
    pub docs: Vec<DesignCaseDoc>,
    pub forest: ProjectForest,
    pub gazetteer: Gazetteer,
    pub queries: Vec<SynthQuery>,
}

/// Lowercase base-26 word with a namespace prefix, e.g. `fi` + `baa`.
fn word(prefix: &str, mut n: usize) -> String {
    let mut code = [b'a'; 3];
    for slot in code.iter_mut().rev() {
        *slot = b'a' + (n % 26) as u8;
        n /= 26;
    }
    let mut s = String::from(prefix);
    for &c in &code {
        s.push(c as char);
    }
    if n > 0 {
        // Past 26^3 words, append the overflow in decimal.
        s.push_str(&format!("{n}"));
    }
    s
}

fn query_word(i: usize) -> String {
    word("qu", i)
}

fn entity_word(i: usize) -> String {
    word("en", i)
}

fn filler_word(i: usize) -> String {
    word("fi", i)
}

struct Plan {
    query: Option<usize>,
    entity: usize,
}

/// Deterministic corpus, forest, gazetteer, and queries for `p`.
pub fn generate_synthetic_corpus(p: &SynthParams) -> Result<SyntheticCorpus, SynthError> {
    if !(0.0..=1.0).contains(&p.chain_fraction) {
        return Err(SynthError::ChainFraction(p.chain_fraction));
    }
    if p.query_count == 0 {
        return Err(SynthError::NoQueries);
    }
    if p.vocab_size == 0 {
        return Err(SynthError::NoVocabulary);
    }
    let chained = libm::round(p.chain_fraction * p.doc_count as f64) as usize;
    if chained > 0 && p.entity_count == 0 {
        return Err(SynthError::NoEntities);
    }
    let anchors = p.doc_count - chained;
    if anchors < p.query_count {
        return Err(SynthError::TooFewAnchors {
            anchors,
            queries: p.query_count,
        });
    }
    let entity_of = |q: usize| {
        if p.entity_count == 0 {
            0
        } else {
            q % p.entity_count
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    // Anchors and chained documents are dealt to queries round-robin, then
    // shuffled so ids carry no structure.
    let mut plans: Vec<Plan> = (0..anchors)
        .map(|i| Plan {
            query: Some(i % p.query_count),
            entity: entity_of(i % p.query_count),
        })
        .chain((0..chained).map(|i| Plan {
            query: None,
            entity: entity_of(i % p.query_count),
        }))
        .collect();
    plans.shuffle(&mut rng);

    let project = String::from("SYN");
    let modules: Vec<String> = (1..=3).map(|m| format!("SYN-M{m}")).collect();
    let mut raw_forest = alloc::vec![ProjectElement::new(
        &project,
        "Synthetic project",
        ElementKind::Project,
        None
    )];
    for m in &modules {
        raw_forest.push(ProjectElement::new(
            m,
            m,
            ElementKind::Module,
            Some(&project),
        ));
    }
    let (forest, _) = ProjectForest::validate(raw_forest);

    let mut docs = Vec::with_capacity(p.doc_count);
    for (i, plan) in plans.iter().enumerate() {
        let n_filler = rng.gen_range(FILLER_MIN..=FILLER_MAX);
        let mut filler: Vec<String> = (0..n_filler)
            .map(|_| filler_word(rng.gen_range(0..p.vocab_size)))
            .collect();
        let cut1 = n_filler / 3;
        let cut2 = 2 * n_filler / 3;
        let solution: Vec<String> = filler.split_off(cut2);
        let cause_fill: Vec<String> = filler.split_off(cut1);
        let mut description = filler;
        let mut cause = cause_fill;

        if let Some(q) = plan.query {
            // Twice, so the query token outweighs any single filler word.
            description.insert(0, query_word(q));
            description.push(query_word(q));
        }
        if p.entity_count > 0 {
            cause.insert(0, entity_word(plan.entity));
        }
        let mut doc = DesignCaseDoc::new(format!("SYN-{i:04}"), description.join(" "));
        doc.title = format!("Synthetic case {i}");
        doc.cause = cause.join(" ");
        doc.solution = solution.join(" ");
        docs.push(doc);
    }

    let used: BTreeSet<usize> = if p.entity_count == 0 {
        BTreeSet::new()
    } else {
        plans.iter().map(|pl| pl.entity).collect()
    };
    let gazetteer = Gazetteer::new(
        used.iter()
            .map(|&e| {
                let w = entity_word(e);
                GazetteerEntry::new("component", &w, [w.as_str()])
            })
            .collect(),
    );

    let queries = (0..p.query_count)
        .map(|q| {
            let mut anchors_q = Vec::new();
            let mut invisible = Vec::new();
            for (doc, plan) in docs.iter().zip(&plans) {
                if plan.query == Some(q) {
                    anchors_q.push(doc.id.clone());
                } else if p.entity_count > 0 && plan.entity == entity_of(q) {
                    invisible.push(doc.id.clone());
                }
            }
            SynthQuery {
                query: query_word(q),
                anchors: anchors_q,
                keyword_invisible: invisible,
            }
        })
        .collect();

    Ok(SyntheticCorpus {
        params: p.clone(),
        docs,
        forest,
        gazetteer,
        queries,
    })
}
