use alloc::vec::Vec;

use super::Hit;

fn by_score(hits: &mut [Hit]) {
    hits.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.doc_id.cmp(&b.doc_id))
    });
}

/// Direct hits first, then transitive results, each group by score
/// descending with doc id ascending on ties; truncated to `limit`.
pub fn rank_results(mut direct: Vec<Hit>, mut transitive: Vec<Hit>, limit: usize) -> Vec<Hit> {
    by_score(&mut direct);
    by_score(&mut transitive);
    direct.extend(transitive);
    direct.truncate(limit);
    direct
}
