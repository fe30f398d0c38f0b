use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::TextResources;

/// Normalized tokens of one text.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TokenStream {
    pub doc_id: String,
    /// Lowercase, stopword-free, non-empty tokens in text order.
    pub tokens: Vec<String>,
    /// Share of tokens missing from the corpus vocabulary; 0 for corpus docs.
    #[serde(default)]
    pub unknown_ratio: f64,
    /// Kept tokens that appeared fully upper-case in the raw text.
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub uppercase: BTreeSet<String>,
}

impl TokenStream {
    pub fn with_doc_id(mut self, id: impl Into<String>) -> Self {
        self.doc_id = id.into();
        self
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    /// Tokens joined by single spaces.
    pub fn phrase(&self) -> String {
        self.tokens.join(" ")
    }

    /// Appends another stream's tokens (sections of one document).
    pub fn extend(&mut self, other: TokenStream) {
        self.tokens.extend(other.tokens);
        self.uppercase.extend(other.uppercase);
    }
}

/// Maximal runs of alphanumeric characters.
fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
}

fn is_all_caps(word: &str) -> bool {
    word.chars().any(char::is_uppercase) && !word.chars().any(char::is_lowercase)
}

fn keep(token: &str) -> bool {
    if token.chars().count() >= 2 {
        return true;
    }
    token.chars().any(char::is_alphabetic) && token.chars().any(|c| c.is_numeric())
}

/// Splits on punctuation, lowercases, expands abbreviations, removes
/// stopwords, and drops one-character tokens.
///
/// Abbreviations expand once; expansion words are not looked up again.
/// Unknown languages get no stopword filtering.
pub fn normalize(text: &str, language: &str, resources: &TextResources) -> TokenStream {
    let stop = resources.stopwords_for(language);
    let mut out = TokenStream::default();
    let push = |token: String, raw_caps: bool, out: &mut TokenStream| {
        if stop.is_some_and(|s| s.contains(&token)) || !keep(&token) {
            return;
        }
        if raw_caps {
            out.uppercase.insert(token.clone());
        }
        out.tokens.push(token);
    };
    for raw in words(text) {
        let lower = raw.to_lowercase();
        match resources.abbreviations.get(&lower) {
            Some(expansion) => {
                for w in words(expansion) {
                    push(w.to_lowercase(), false, &mut out);
                }
            }
            None => {
                // Lowercasing can emit combining marks; split again.
                let caps = is_all_caps(raw);
                for w in words(&lower) {
                    push(w.into(), caps, &mut out);
                }
            }
        }
    }
    out
}
