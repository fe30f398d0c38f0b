use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Gazetteer;
use crate::corpus::DesignCaseDoc;

/// One gazetteer hit inside a document section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMatch {
    pub doc_id: String,
    pub category: String,
    /// Matched text exactly as written in the document.
    pub surface: String,
    pub canonical: String,
    /// Section index (title, failure, cause, solution).
    pub section: u8,
    /// Byte span of `surface` in that section.
    pub start: usize,
    pub end: usize,
}

struct Pattern {
    folded: Vec<char>,
    entry: usize,
}

/// Case-insensitive, leftmost-longest matcher over gazetteer surface forms.
///
/// Matches must begin and end on word boundaries.
pub struct EntityRecognizer<'g> {
    gazetteer: &'g Gazetteer,
    // First folded char → patterns, longest first.
    by_first: BTreeMap<char, Vec<Pattern>>,
}

fn fold(s: &str) -> Vec<char> {
    s.chars().flat_map(char::to_lowercase).collect()
}

impl<'g> EntityRecognizer<'g> {
    pub fn new(gazetteer: &'g Gazetteer) -> Self {
        let mut by_first: BTreeMap<char, Vec<Pattern>> = BTreeMap::new();
        for (entry, e) in gazetteer.entries.iter().enumerate() {
            for form in e.all_forms() {
                let folded = fold(form.trim());
                if let Some(&c) = folded.first() {
                    by_first
                        .entry(c)
                        .or_default()
                        .push(Pattern { folded, entry });
                }
            }
        }
        for list in by_first.values_mut() {
            list.sort_by(|a, b| {
                b.folded
                    .len()
                    .cmp(&a.folded.len())
                    .then(a.entry.cmp(&b.entry))
            });
        }
        EntityRecognizer {
            gazetteer,
            by_first,
        }
    }

    /// Matches in one text, left to right, non-overlapping.
    pub fn scan(&self, text: &str) -> Vec<(usize, usize, usize)> {
        // Folded chars with the byte span of the source char they came from.
        let mut folded: Vec<char> = Vec::new();
        let mut origin: Vec<(usize, usize)> = Vec::new();
        for (i, c) in text.char_indices() {
            for l in c.to_lowercase() {
                folded.push(l);
                origin.push((i, i + c.len_utf8()));
            }
        }
        let boundary = |k: usize| k == 0 || k >= folded.len() || !folded[k].is_alphanumeric();
        let mut out = Vec::new();
        let mut i = 0;
        while i < folded.len() {
            let starts_word = i == 0 || !folded[i - 1].is_alphanumeric();
            let hit = if starts_word {
                self.by_first.get(&folded[i]).and_then(|patterns| {
                    patterns.iter().find(|p| {
                        let end = i + p.folded.len();
                        end <= folded.len()
                            && folded[i..end] == p.folded[..]
                            && boundary(end)
                            // a split source char cannot end a match
                            && (end == folded.len() || origin[end].0 != origin[end - 1].0)
                    })
                })
            } else {
                None
            };
            match hit {
                Some(p) => {
                    let end = i + p.folded.len();
                    out.push((origin[i].0, origin[end - 1].1, p.entry));
                    i = end;
                }
                None => i += 1,
            }
        }
        out
    }

    /// All matches over every section of `doc`.
    pub fn recognize(&self, doc: &DesignCaseDoc) -> Vec<EntityMatch> {
        let mut out = Vec::new();
        for (section, text) in doc.sections().iter().enumerate() {
            for (start, end, entry) in self.scan(text) {
                let e = &self.gazetteer.entries[entry];
                out.push(EntityMatch {
                    doc_id: doc.id.clone(),
                    category: e.category.clone(),
                    surface: String::from(&text[start..end]),
                    canonical: e.canonical.clone(),
                    section: section as u8,
                    start,
                    end,
                });
            }
        }
        out
    }
}

/// Leftmost-longest, case-insensitive gazetteer matches over all sections.
pub fn recognize_entities(doc: &DesignCaseDoc, gazetteer: &Gazetteer) -> Vec<EntityMatch> {
    EntityRecognizer::new(gazetteer).recognize(doc)
}
