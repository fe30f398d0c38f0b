use alloc::collections::BTreeMap;
use alloc::string::String;

use super::TextError;

/// Counts contiguous n-grams for n = 1..=n_max, joined by single spaces.
pub fn extract_ngrams<S: AsRef<str>>(
    tokens: &[S],
    n_max: usize,
) -> Result<BTreeMap<String, u32>, TextError> {
    if n_max < 1 {
        return Err(TextError::InvalidNgramOrder(n_max));
    }
    let mut counts = BTreeMap::new();
    for n in 1..=n_max.min(tokens.len()) {
        for window in tokens.windows(n) {
            let mut gram = String::new();
            for (i, t) in window.iter().enumerate() {
                if i > 0 {
                    gram.push(' ');
                }
                gram.push_str(t.as_ref());
            }
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

/// Multi-token keys are n-grams with n >= 2.
pub fn is_ngram(term: &str) -> bool {
    term.contains(' ')
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bigrams_over_three_tokens() {
        let got = extract_ngrams(&["a", "b", "c"], 2).unwrap();
        let want: BTreeMap<String, u32> = [("a", 1), ("b", 1), ("c", 1), ("a b", 1), ("b c", 1)]
            .into_iter()
            .map(|(k, v)| (k.into(), v))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn stream_shorter_than_n() {
        let got = extract_ngrams(&["a"], 3).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got["a"], 1);
    }

    #[test]
    fn repeated_tokens_count() {
        let got = extract_ngrams(&["a", "a"], 1).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got["a"], 2);
    }

    #[test]
    fn zero_order_is_rejected() {
        assert_eq!(
            extract_ngrams(&["a"], 0),
            Err(TextError::InvalidNgramOrder(0))
        );
    }

    proptest! {
        #[test]
        fn window_counts(tokens in proptest::collection::vec("[a-d]", 0..12), n_max in 1usize..5) {
            let counts = extract_ngrams(&tokens, n_max).unwrap();
            for n in 1..=n_max {
                let total: u32 = counts
                    .iter()
                    .filter(|(k, _)| k.split(' ').count() == n)
                    .map(|(_, v)| *v)
                    .sum();
                let expected = (tokens.len() + 1).saturating_sub(n);
                prop_assert_eq!(total as usize, expected);
            }
        }
    }
}
