use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::edit::{normalized_similarity, PathMode};
use super::rulebook::RulebookMatrix;
use crate::lexicon::rank_order;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Reranker {
    #[default]
    Basic,
    Rulebook,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedCandidate {
    pub word: String,
    /// Basic normalized similarity to the source; used for gating.
    pub similarity: f64,
    /// ζ under the rulebook, when ranking with it.
    pub zeta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ranking {
    /// Candidates different from the source, best first.
    pub ranked: Vec<RankedCandidate>,
    /// The source word itself was among the candidates.
    pub identity_hit: bool,
}

impl Ranking {
    pub fn best(&self) -> Option<&RankedCandidate> {
        self.ranked.first()
    }
}

/// Orders oracle candidates for `source`.
///
/// Duplicates and empty strings are dropped. Candidates equal to the source
/// are not ranked but flagged through [`Ranking::identity_hit`]. `Basic`
/// sorts by similarity descending, `Rulebook` by ζ ascending; both break
/// ties on the word. A `Rulebook` ranking without a matrix falls back to
/// `Basic`.
pub fn rank_candidates<'a>(
    source: &str,
    candidates: impl IntoIterator<Item = &'a str>,
    reranker: Reranker,
    matrix: Option<&RulebookMatrix>,
    mode: PathMode,
) -> Ranking {
    let mut seen = BTreeSet::new();
    let mut out = Ranking::default();
    for word in candidates {
        if word.is_empty() || !seen.insert(word) {
            continue;
        }
        if word == source {
            out.identity_hit = true;
            continue;
        }
        let similarity = normalized_similarity(source, word).unwrap_or(0.0);
        let zeta = match (reranker, matrix) {
            (Reranker::Rulebook, Some(m)) => Some(m.pair_score(source, word, mode)),
            _ => None,
        };
        out.ranked.push(RankedCandidate {
            word: word.into(),
            similarity,
            zeta,
        });
    }
    out.ranked.sort_by(|a, b| match (a.zeta, b.zeta) {
        (Some(za), Some(zb)) => za.total_cmp(&zb).then_with(|| a.word.cmp(&b.word)),
        _ => rank_order(a.similarity, &a.word, b.similarity, &b.word),
    });
    out
}
