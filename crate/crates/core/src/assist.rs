//! Dictionary-based term checking and suggestions.
//!
//! Suggestions are drawn only from entries that are known to produce a
//! direct hit when searched on their own: unigrams whose best document
//! weight reaches the direct-hit threshold, and linking-node surfaces with
//! at least one adjacent document.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::graph::{GraphSnapshot, NodeKind, RelationLevel};
use crate::textmine::{is_ngram, normalize};

/// Default number of suggestions.
pub const DEFAULT_SUGGESTIONS: usize = 10;
const MAX_DISTANCE: usize = 2;
const MIN_PREFIX: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermCheck {
    pub known: bool,
    pub df: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    /// Unigram vocabulary with document frequencies.
    entries: BTreeMap<String, u32>,
    /// Linking-node surface forms and the ids of nodes carrying them.
    surfaces: BTreeMap<String, Vec<String>>,
    /// Terms eligible as suggestions, with the df used for ranking.
    suggestable: BTreeMap<String, u32>,
}

impl Dictionary {
    /// Derives the dictionary from a snapshot; `tau_q` is the direct-hit
    /// cosine threshold searches will use.
    pub fn from_snapshot(snap: &GraphSnapshot, tau_q: f64) -> Self {
        let entries: BTreeMap<String, u32> = snap
            .term_stats()
            .values()
            .filter(|s| !is_ngram(&s.term) && s.df >= 1)
            .map(|s| (s.term.clone(), s.df))
            .collect();

        let mut best_weight: BTreeMap<&str, f64> = BTreeMap::new();
        for v in snap.tfidf_index().values() {
            for (t, &w) in &v.weights {
                let e = best_weight.entry(t.as_str()).or_insert(0.0);
                *e = e.max(w);
            }
        }

        let resources = snap.resources();
        let round_trips = |s: &str| normalize(s, "en", resources).phrase() == s;

        let mut suggestable: BTreeMap<String, u32> = entries
            .iter()
            .filter(|(t, _)| best_weight.get(t.as_str()).is_some_and(|&w| w >= tau_q))
            .filter(|(t, _)| round_trips(t))
            .map(|(t, &df)| (t.clone(), df))
            .collect();

        let mut surfaces: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (surface, nodes) in snap.surfaces() {
            let ids: Vec<String> = nodes.iter().map(|&i| snap.node_at(i).id.clone()).collect();
            surfaces.insert(surface.into(), ids);

            let docs: BTreeSet<usize> = nodes
                .iter()
                .flat_map(|&i| snap.neighbors(i).iter())
                .filter(|&&(nb, ei)| {
                    snap.node_at(nb).kind == NodeKind::DesignCase
                        && snap.edge_at(ei).level != RelationLevel::L1
                })
                .map(|&(nb, _)| nb)
                .collect();
            let vectorizable = surface
                .split(' ')
                .any(|tok| snap.term_stats().contains_key(tok));
            if !docs.is_empty() && vectorizable && round_trips(surface) {
                let df = entries.get(surface).copied().unwrap_or(docs.len() as u32);
                suggestable.entry(surface.into()).or_insert(df);
            }
        }

        Dictionary {
            entries,
            surfaces,
            suggestable,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.surfaces.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<String, u32> {
        &self.entries
    }

    /// Node ids carrying `surface`, if any.
    pub fn surface_nodes(&self, surface: &str) -> &[String] {
        self.surfaces.get(surface).map_or(&[], Vec::as_slice)
    }

    /// Every term `suggest` may return.
    pub fn suggestable(&self) -> impl Iterator<Item = &str> {
        self.suggestable.keys().map(String::as_str)
    }

    fn key(&self, term: &str, resources: &crate::textmine::TextResources) -> String {
        let phrase = normalize(term, "en", resources).phrase();
        if phrase.is_empty() {
            term.trim().to_lowercase()
        } else {
            phrase
        }
    }

    /// Whether `term` (after normalization) is vocabulary or a linking surface.
    pub fn check_term(&self, term: &str, snap: &GraphSnapshot) -> TermCheck {
        let key = normalize(term, "en", snap.resources()).phrase();
        self.check_normalized(&key)
    }

    /// Like [`check_term`](Self::check_term) for an already normalized term.
    pub fn check_normalized(&self, key: &str) -> TermCheck {
        if key.is_empty() {
            return TermCheck {
                known: false,
                df: 0,
            };
        }
        if let Some(&df) = self.entries.get(key) {
            return TermCheck { known: true, df };
        }
        if self.surfaces.contains_key(key) {
            let df = self.suggestable.get(key).copied().unwrap_or(0);
            return TermCheck { known: true, df };
        }
        TermCheck {
            known: false,
            df: 0,
        }
    }

    /// Up to `k` dictionary terms close to an unknown `term`.
    ///
    /// A candidate is within Damerau-Levenshtein distance 2 or shares a
    /// prefix of at least 3 characters; candidates rank by distance, then
    /// df (descending), then the term. Known terms get no suggestions.
    pub fn suggest(&self, term: &str, k: usize, snap: &GraphSnapshot) -> Vec<String> {
        let key = self.key(term, snap.resources());
        self.suggest_normalized(&key, k)
    }

    /// Like [`suggest`](Self::suggest) for an already normalized term.
    pub fn suggest_normalized(&self, key: &str, k: usize) -> Vec<String> {
        if key.is_empty() || self.check_normalized(key).known {
            return Vec::new();
        }
        let key_chars: Vec<char> = key.chars().collect();
        let mut ranked: Vec<(usize, u32, &str)> = self
            .suggestable
            .iter()
            .filter(|(cand, _)| cand.as_str() != key)
            .filter_map(|(cand, &df)| {
                let cand_chars: Vec<char> = cand.chars().collect();
                let d = damerau_levenshtein(&key_chars, &cand_chars);
                let prefix = key_chars
                    .iter()
                    .zip(&cand_chars)
                    .take_while(|(a, b)| a == b)
                    .count();
                (d <= MAX_DISTANCE || prefix >= MIN_PREFIX).then_some((d, df, cand.as_str()))
            })
            .collect();
        ranked.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(b.2)));
        ranked
            .into_iter()
            .take(k)
            .map(|(_, _, t)| t.into())
            .collect()
    }
}

/// Unrestricted Damerau-Levenshtein distance (adjacent transpositions,
/// substrings may be edited more than once).
pub fn damerau_levenshtein(a: &[char], b: &[char]) -> usize {
    let (n, m) = (a.len(), b.len());
    let inf = n + m;
    let mut last_row: BTreeMap<char, usize> = BTreeMap::new();
    // d is (n+2) x (m+2), shifted by one so index 0 is the sentinel.
    let w = m + 2;
    let mut d = vec![0usize; (n + 2) * w];
    d[0] = inf;
    for i in 0..=n {
        d[(i + 1) * w] = inf;
        d[(i + 1) * w + 1] = i;
    }
    for j in 0..=m {
        d[j + 1] = inf;
        d[w + j + 1] = j;
    }
    for i in 1..=n {
        let mut last_match_col = 0;
        for j in 1..=m {
            let i1 = last_row.get(&b[j - 1]).copied().unwrap_or(0);
            let j1 = last_match_col;
            let cost = if a[i - 1] == b[j - 1] {
                last_match_col = j;
                0
            } else {
                1
            };
            let sub = d[i * w + j] + cost;
            let ins = d[(i + 1) * w + j] + 1;
            let del = d[i * w + j + 1] + 1;
            let trans = d[i1 * w + j1] + (i - i1 - 1) + 1 + (j - j1 - 1);
            d[(i + 1) * w + j + 1] = sub.min(ins).min(del).min(trans);
        }
        last_row.insert(a[i - 1], i);
    }
    d[(n + 1) * w + m + 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dl(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        damerau_levenshtein(&a, &b)
    }

    // Plain Levenshtein, an upper bound for the transposition-aware distance.
    fn lev(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut prev: Vec<usize> = (0..=b.len()).collect();
        for i in 1..=a.len() {
            let mut cur = vec![i; b.len() + 1];
            for j in 1..=b.len() {
                let c = usize::from(a[i - 1] != b[j - 1]);
                cur[j] = (prev[j - 1] + c).min(prev[j] + 1).min(cur[j - 1] + 1);
            }
            prev = cur;
        }
        prev[b.len()]
    }

    #[test]
    fn distances() {
        assert_eq!(dl("clokc", "clock"), 1);
        assert_eq!(dl("", "abc"), 3);
        assert_eq!(dl("abc", "abc"), 0);
        assert_eq!(dl("kitten", "sitting"), 3);
        assert_eq!(dl("ca", "abc"), 2);
        assert_eq!(dl("ab", "ba"), 1);
    }

    proptest! {
        #[test]
        fn distance_is_a_bounded_symmetric_measure(a in "[abc]{0,6}", b in "[abc]{0,6}") {
            let d = dl(&a, &b);
            prop_assert_eq!(d, dl(&b, &a));
            prop_assert!(d <= lev(&a, &b));
            prop_assert_eq!(d == 0, a == b);
            let (la, lb) = (a.chars().count(), b.chars().count());
            prop_assert!(d >= la.abs_diff(lb));
        }
    }
}
