//! The mask-filling oracle contract and a deterministic table-driven mock.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{invalid, Error, OracleError};

/// Placeholder sent in place of the masked word.
pub const MASK_TOKEN: &str = "[MASK]";

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MaskQuery {
    /// Tokens with [`MASK_TOKEN`] at `mask_index`.
    pub tokens: Vec<String>,
    pub mask_index: usize,
    pub top_k: usize,
}

impl MaskQuery {
    /// Masks `tokens[mask_index]`; the original word is dropped.
    pub fn new(mut tokens: Vec<String>, mask_index: usize, top_k: usize) -> Result<Self, Error> {
        if mask_index >= tokens.len() {
            return Err(invalid(format!("mask index {mask_index} out of range for {} tokens", tokens.len())));
        }
        if top_k == 0 {
            return Err(invalid("top_k must be at least 1"));
        }
        tokens[mask_index] = MASK_TOKEN.to_string();
        Ok(MaskQuery { tokens, mask_index, top_k })
    }

    /// The masked token sequence joined by single spaces.
    pub fn signature(&self) -> String {
        self.tokens.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoredWord {
    pub word: String,
    pub score: f64,
}

/// Oracle answer for one masked position, best first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CandidateSet {
    candidates: Vec<ScoredWord>,
}

impl CandidateSet {
    /// Validates an oracle answer and keeps at most `top_k` entries.
    pub fn from_scored(mut candidates: Vec<ScoredWord>, top_k: usize) -> Result<Self, OracleError> {
        for c in &candidates {
            if c.word.is_empty() || c.word.chars().any(char::is_whitespace) {
                return Err(OracleError::Protocol(format!("candidate {:?} is not a single word", c.word)));
            }
            if !c.score.is_finite() {
                return Err(OracleError::Protocol(format!("candidate {:?} has a non-finite score", c.word)));
            }
        }
        if candidates.windows(2).any(|w| w[1].score > w[0].score) {
            return Err(OracleError::Protocol("candidate scores are not non-increasing".into()));
        }
        candidates.truncate(top_k);
        Ok(CandidateSet { candidates })
    }

    /// Ranked words scored `1, 1/2, 1/3, …`.
    pub fn from_ranked<S: AsRef<str>>(words: &[S], top_k: usize) -> Self {
        let candidates = words
            .iter()
            .take(top_k)
            .enumerate()
            .map(|(i, w)| ScoredWord {
                word: w.as_ref().to_string(),
                score: 1.0 / (i + 1) as f64,
            })
            .collect();
        CandidateSet { candidates }
    }

    pub fn as_slice(&self) -> &[ScoredWord] {
        &self.candidates
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.candidates.iter().map(|c| c.word.as_str())
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// Anything that proposes words for a masked position.
pub trait MaskFiller {
    fn mask_fill(&mut self, query: &MaskQuery) -> Result<CandidateSet, OracleError>;
}

impl<T: MaskFiller + ?Sized> MaskFiller for &mut T {
    fn mask_fill(&mut self, query: &MaskQuery) -> Result<CandidateSet, OracleError> {
        (**self).mask_fill(query)
    }
}

impl<T: MaskFiller + ?Sized> MaskFiller for alloc::boxed::Box<T> {
    fn mask_fill(&mut self, query: &MaskQuery) -> Result<CandidateSet, OracleError> {
        (**self).mask_fill(query)
    }
}

/// Deterministic oracle answering from a table keyed by context signature
/// (see [`MaskQuery::signature`]), with a fallback list for unmapped contexts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MockOracle {
    #[cfg_attr(feature = "serde", serde(default))]
    pub contexts: BTreeMap<String, Vec<String>>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub fallback: Vec<String>,
}

impl MockOracle {
    pub fn new(contexts: BTreeMap<String, Vec<String>>) -> Self {
        MockOracle {
            contexts,
            fallback: Vec::new(),
        }
    }

    pub fn with_fallback(mut self, fallback: Vec<String>) -> Self {
        self.fallback = fallback;
        self
    }

    /// Fallback made of the `k` most frequent words, ties broken by word.
    pub fn unigram_fallback<'a>(frequencies: impl IntoIterator<Item = (&'a str, u64)>, k: usize) -> Vec<String> {
        let mut freq: Vec<(&str, u64)> = frequencies.into_iter().collect();
        freq.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        freq.dedup_by(|a, b| a.0 == b.0);
        freq.into_iter().take(k).map(|(w, _)| w.to_string()).collect()
    }
}

impl MaskFiller for MockOracle {
    fn mask_fill(&mut self, query: &MaskQuery) -> Result<CandidateSet, OracleError> {
        let words = self.contexts.get(&query.signature()).unwrap_or(&self.fallback);
        Ok(CandidateSet::from_ranked(words, query.top_k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn toks(s: &str) -> Vec<String> {
        s.split(' ').map(String::from).collect()
    }

    #[test]
    fn query_masks_the_word() {
        let q = MaskQuery::new(toks("woh gail ।"), 1, 30).unwrap();
        assert_eq!(q.tokens, ["woh", "[MASK]", "।"]);
        assert_eq!(q.signature(), "woh [MASK] ।");
        assert!(MaskQuery::new(toks("a b"), 2, 30).is_err());
        assert!(MaskQuery::new(toks("a b"), 0, 0).is_err());
    }

    #[test]
    fn mock_answers_from_table() {
        let mut table = BTreeMap::new();
        table.insert("woh [MASK] ।".to_string(), vec!["hua".to_string(), "gaya".to_string()]);
        let mut mock = MockOracle::new(table);
        let q = MaskQuery::new(toks("woh bhail ।"), 1, 30).unwrap();
        let first = mock.mask_fill(&q).unwrap();
        assert_eq!(first.words().collect::<Vec<_>>(), ["hua", "gaya"]);
        let scores: Vec<_> = first.as_slice().iter().map(|c| c.score).collect();
        assert_eq!(scores, [1.0, 0.5]);
        assert_eq!(mock.mask_fill(&q).unwrap(), first);

        let q1 = MaskQuery::new(toks("woh bhail ।"), 1, 1).unwrap();
        assert_eq!(mock.mask_fill(&q1).unwrap().len(), 1);
    }

    #[test]
    fn unmapped_context_uses_fallback() {
        let mut mock = MockOracle::default();
        let q = MaskQuery::new(toks("x y"), 0, 5).unwrap();
        assert!(mock.mask_fill(&q).unwrap().is_empty());
    }

    #[test]
    fn unigram_fallback_is_frequency_ordered() {
        let fb = MockOracle::unigram_fallback([("ka", 3), ("hai", 9), ("se", 3), ("na", 1)], 3);
        assert_eq!(fb, ["hai", "ka", "se"]);
        let mut mock = MockOracle::default().with_fallback(fb.clone());
        let q = MaskQuery::new(toks("p q"), 1, 3).unwrap();
        assert_eq!(mock.mask_fill(&q).unwrap().words().collect::<Vec<_>>(), fb);
    }

    #[test]
    fn scored_answers_are_validated() {
        let sw = |w: &str, s: f64| ScoredWord { word: w.into(), score: s };
        assert!(CandidateSet::from_scored(vec![sw("a", 0.2), sw("b", 0.5)], 5).is_err());
        assert!(CandidateSet::from_scored(vec![sw("a b", 0.5)], 5).is_err());
        assert!(CandidateSet::from_scored(vec![sw("a", f64::NAN)], 5).is_err());
        let ok = CandidateSet::from_scored(vec![sw("a", 0.5), sw("b", 0.5), sw("c", 0.1)], 2).unwrap();
        assert_eq!(ok.len(), 2);
        assert!(CandidateSet::from_scored(vec![], 2).unwrap().is_empty());
    }
}
