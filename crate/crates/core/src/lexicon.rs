//! The growing LRL → HRL lexicon.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{invalid, Error};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Candidate {
    pub target: String,
    pub similarity: f64,
    /// Pass (1-based) in which the current score was learned.
    pub pass: u32,
}

/// Ranking order shared by the whole crate: higher similarity first, then
/// lexicographic on the target word.
pub(crate) fn rank_order(a_sim: f64, a_word: &str, b_sim: f64, b_word: &str) -> Ordering {
    b_sim.total_cmp(&a_sim).then_with(|| a_word.cmp(b_word))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LexiconEntry {
    pub source: String,
    /// Sorted by similarity descending, ties by target. Never empty.
    candidates: Vec<Candidate>,
    /// The best candidate is the source word itself.
    pub is_identity: bool,
}

impl LexiconEntry {
    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn best(&self) -> &Candidate {
        &self.candidates[0]
    }

    fn upsert(&mut self, target: &str, similarity: f64, pass: u32) -> bool {
        let changed = match self.candidates.iter_mut().find(|c| c.target == target) {
            Some(existing) if similarity > existing.similarity => {
                existing.similarity = similarity;
                existing.pass = pass;
                true
            }
            Some(_) => false,
            None => {
                self.candidates.push(Candidate {
                    target: target.to_string(),
                    similarity,
                    pass,
                });
                true
            }
        };
        if changed {
            self.candidates
                .sort_by(|a, b| rank_order(a.similarity, &a.target, b.similarity, &b.target));
            self.is_identity = self.candidates[0].target == self.source;
        }
        changed
    }
}

/// Run parameters recorded alongside the lexicon.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LexiconMeta {
    pub method: String,
    pub threshold: f64,
    pub passes: u32,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lexicon {
    entries: BTreeMap<String, LexiconEntry>,
    pub meta: LexiconMeta,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_meta(meta: LexiconMeta) -> Self {
        Lexicon {
            entries: BTreeMap::new(),
            meta,
        }
    }

    /// Records that `source` translates to `target` with the given score.
    ///
    /// An existing `(source, target)` pair is only rescored when the new
    /// similarity is strictly higher. Returns whether anything changed.
    pub fn update(
        &mut self,
        source: &str,
        target: &str,
        similarity: f64,
        pass: u32,
    ) -> Result<bool, Error> {
        if source.is_empty() || target.is_empty() {
            return Err(invalid("lexicon words must be non-empty"));
        }
        if similarity.is_nan() || similarity < 0.0 {
            return Err(invalid("similarity must be non-negative"));
        }
        let entry = self
            .entries
            .entry(source.to_string())
            .or_insert_with(|| LexiconEntry {
                source: source.to_string(),
                candidates: Vec::new(),
                is_identity: false,
            });
        Ok(entry.upsert(target, similarity, pass))
    }

    pub fn best_equivalent(&self, source: &str) -> Option<&str> {
        self.entries.get(source).map(|e| e.best().target.as_str())
    }

    pub fn get(&self, source: &str) -> Option<&LexiconEntry> {
        self.entries.get(source)
    }

    pub fn contains(&self, source: &str) -> bool {
        self.entries.contains_key(source)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in source-word order.
    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    /// Ranked target lists per source word, the shape the metrics consume.
    pub fn predictions(&self) -> BTreeMap<String, Vec<String>> {
        self.entries
            .values()
            .map(|e| {
                (
                    e.source.clone(),
                    e.candidates.iter().map(|c| c.target.clone()).collect(),
                )
            })
            .collect()
    }
}
