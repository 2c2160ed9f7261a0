//! Work scheduling: which (sentence, unknown word) pair to mask next.
//!
//! Items are ordered by how often they were processed, then by the share of
//! *other* unknown tokens in their sentence (both ascending), so words in
//! mostly-understood sentences go first. There is one item per unknown word
//! type, pointing at its best context; the context is re-chosen whenever the
//! queue is reprioritized.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::lexicon::Lexicon;

const PUNCTUATION: &[char] = &[
    '।', '॥', '.', ',', '!', '?', ';', ':', '"', '\'', '(', ')', '-',
];

pub fn is_punctuation(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| PUNCTUATION.contains(&c))
}

/// Where a sentence came from: document (file) index and 1-based line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SourceId {
    pub document: u32,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<String>,
    pub source: SourceId,
}

/// Splits on whitespace and detaches dandas and ASCII punctuation into
/// single-character tokens. Blank input yields `None`.
pub fn tokenize(line: &str, source: SourceId) -> Option<Sentence> {
    let mut tokens = Vec::new();
    for chunk in line.split_whitespace() {
        let mut word = String::new();
        for c in chunk.chars() {
            if PUNCTUATION.contains(&c) {
                if !word.is_empty() {
                    tokens.push(core::mem::take(&mut word));
                }
                tokens.push(String::from(c));
            } else {
                word.push(c);
            }
        }
        if !word.is_empty() {
            tokens.push(word);
        }
    }
    (!tokens.is_empty()).then_some(Sentence { tokens, source })
}

/// HRL word list after applying the frequency floor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: BTreeSet<String>,
}

impl Vocabulary {
    pub fn from_words<S: Into<String>>(words: impl IntoIterator<Item = S>) -> Self {
        Vocabulary {
            words: words.into_iter().map(Into::into).collect(),
        }
    }

    /// Keeps words whose frequency reaches `floor`.
    pub fn from_counts<S: Into<String>>(counts: impl IntoIterator<Item = (S, u64)>, floor: u64) -> Self {
        Vocabulary {
            words: counts
                .into_iter()
                .filter(|(_, f)| *f >= floor)
                .map(|(w, _)| w.into())
                .collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// A word is known when it is shared HRL vocabulary or already has a
/// lexicon entry. Punctuation is always known.
#[derive(Debug, Clone, Copy)]
pub struct KnownSet<'a> {
    pub vocabulary: &'a Vocabulary,
    pub lexicon: &'a Lexicon,
}

impl<'a> KnownSet<'a> {
    pub fn new(vocabulary: &'a Vocabulary, lexicon: &'a Lexicon) -> Self {
        KnownSet { vocabulary, lexicon }
    }

    pub fn contains(&self, token: &str) -> bool {
        is_punctuation(token) || self.vocabulary.contains(token) || self.lexicon.contains(token)
    }

    fn unknown_count(&self, s: &Sentence) -> u32 {
        s.tokens.iter().filter(|t| !self.contains(t)).count() as u32
    }
}

pub fn known_fraction(s: &Sentence, known: &KnownSet<'_>) -> f64 {
    if s.tokens.is_empty() {
        return 1.0;
    }
    let known_count = s.tokens.len() as u32 - known.unknown_count(s);
    f64::from(known_count) / s.tokens.len() as f64
}

/// One unknown word type together with the context it will be masked in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkItem {
    pub word: String,
    /// Index into the corpus slice the queue was built from.
    pub sentence: usize,
    pub word_index: usize,
    pub source: SourceId,
    pub times_processed: u32,
    /// Unknown tokens in the sentence besides this one.
    pub other_unknown: u32,
    pub sentence_len: u32,
}

impl WorkItem {
    pub fn other_unknown_fraction(&self) -> f64 {
        f64::from(self.other_unknown) / f64::from(self.sentence_len)
    }

    fn cmp_fraction(&self, other: &Self) -> Ordering {
        let lhs = u64::from(self.other_unknown) * u64::from(other.sentence_len);
        let rhs = u64::from(other.other_unknown) * u64::from(self.sentence_len);
        lhs.cmp(&rhs)
    }
}

impl Ord for WorkItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.times_processed
            .cmp(&other.times_processed)
            .then_with(|| self.cmp_fraction(other))
            .then_with(|| self.source.cmp(&other.source))
            .then_with(|| self.word_index.cmp(&other.word_index))
            .then_with(|| self.sentence.cmp(&other.sentence))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for WorkItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Priority list of work items.
#[derive(Debug, Clone)]
pub struct ExampleQueue {
    pending: BTreeSet<WorkItem>,
    /// Every occurrence `(sentence, position)` of each queued word type.
    occurrences: BTreeMap<String, Vec<(usize, usize)>>,
    max_passes: u32,
}

/// Picks the occurrence whose sentence has the lowest unknown share, ties
/// on provenance then position.
fn best_context(
    word: &str,
    places: &[(usize, usize)],
    corpus: &[Sentence],
    unknown: &mut BTreeMap<usize, u32>,
    known: &KnownSet<'_>,
    times_processed: u32,
) -> Option<WorkItem> {
    places
        .iter()
        .map(|&(si, pos)| {
            let s = &corpus[si];
            let count = *unknown.entry(si).or_insert_with(|| known.unknown_count(s));
            WorkItem {
                word: word.into(),
                sentence: si,
                word_index: pos,
                source: s.source,
                times_processed,
                other_unknown: count.saturating_sub(1),
                sentence_len: s.tokens.len() as u32,
            }
        })
        .min_by(|a, b| {
            // (other + 1) / len, i.e. the full unknown share
            let lhs = u64::from(a.other_unknown + 1) * u64::from(b.sentence_len);
            let rhs = u64::from(b.other_unknown + 1) * u64::from(a.sentence_len);
            lhs.cmp(&rhs)
                .then_with(|| a.source.cmp(&b.source))
                .then_with(|| a.sentence.cmp(&b.sentence))
                .then_with(|| a.word_index.cmp(&b.word_index))
        })
}

impl ExampleQueue {
    /// One item per unknown, non-punctuation word type in `corpus`.
    pub fn build(corpus: &[Sentence], known: &KnownSet<'_>, max_passes: u32) -> Self {
        let mut occurrences: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
        for (si, s) in corpus.iter().enumerate() {
            for (pos, tok) in s.tokens.iter().enumerate() {
                if !known.contains(tok) {
                    occurrences.entry(tok.clone()).or_default().push((si, pos));
                }
            }
        }
        let mut unknown = BTreeMap::new();
        let pending = occurrences
            .iter()
            .filter_map(|(w, places)| best_context(w, places, corpus, &mut unknown, known, 0))
            .collect();
        ExampleQueue {
            pending,
            occurrences,
            max_passes,
        }
    }

    pub fn max_passes(&self) -> u32 {
        self.max_passes
    }

    pub fn len(&self) -> usize {
        self.pending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }

    /// Items in priority order.
    pub fn iter(&self) -> impl Iterator<Item = &WorkItem> {
        self.pending.iter()
    }

    pub fn peek(&self) -> Option<&WorkItem> {
        self.pending.first().filter(|i| i.times_processed < self.max_passes)
    }

    /// Takes the highest-priority item, unless every item has used up its
    /// passes. Hand it back with [`ExampleQueue::finish`].
    pub fn next_example(&mut self) -> Option<WorkItem> {
        self.peek()?;
        self.pending.pop_first()
    }

    /// Returns a taken item after processing. A learned word leaves the
    /// queue for good; otherwise it goes back with one more pass counted.
    pub fn finish(&mut self, mut item: WorkItem, learned: bool) {
        if learned {
            self.occurrences.remove(&item.word);
            return;
        }
        item.times_processed += 1;
        self.pending.insert(item);
    }

    /// Drops items whose word became known and re-picks every remaining
    /// word's context using the current known set.
    pub fn reprioritize(&mut self, corpus: &[Sentence], known: &KnownSet<'_>) {
        let mut unknown = BTreeMap::new();
        let old = core::mem::take(&mut self.pending);
        for item in old {
            if known.contains(&item.word) {
                self.occurrences.remove(&item.word);
                continue;
            }
            let places = &self.occurrences[&item.word];
            if let Some(fresh) = best_context(&item.word, places, corpus, &mut unknown, known, item.times_processed) {
                self.pending.insert(fresh);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sent(line: u32, text: &str) -> Sentence {
        tokenize(text, SourceId { document: 0, line }).unwrap()
    }

    #[test]
    fn tokenize_detaches_danda() {
        let s = sent(1, "राम घर गइल।");
        assert_eq!(s.tokens, ["राम", "घर", "गइल", "।"]);
    }

    #[test]
    fn tokenize_collapses_whitespace() {
        assert_eq!(sent(1, "a  b").tokens, ["a", "b"]);
        assert_eq!(sent(1, "\ta b \n").tokens, ["a", "b"]);
    }

    #[test]
    fn tokenize_blank_is_none() {
        assert!(tokenize("", SourceId::default()).is_none());
        assert!(tokenize("   ", SourceId::default()).is_none());
    }

    #[test]
    fn tokenize_ascii_punctuation() {
        assert_eq!(sent(1, "(a-b), c॥").tokens, ["(", "a", "-", "b", ")", ",", "c", "॥"]);
    }

    #[test]
    fn known_fraction_counts() {
        let vocab = Vocabulary::from_words(["w", "x"]);
        let mut lex = Lexicon::new();
        lex.update("y", "yy", 0.9, 1).unwrap();
        let k = KnownSet::new(&vocab, &lex);
        assert_eq!(known_fraction(&sent(1, "w x"), &k), 1.0);
        assert_eq!(known_fraction(&sent(1, "w x y z"), &k), 0.75);

        let empty_vocab = Vocabulary::default();
        let empty_lex = Lexicon::new();
        let none = KnownSet::new(&empty_vocab, &empty_lex);
        assert_eq!(known_fraction(&sent(1, "p q"), &none), 0.0);
        assert_eq!(known_fraction(&sent(1, "p ।"), &none), 0.5);
    }

    #[test]
    fn frequency_floor() {
        let v = Vocabulary::from_counts([("a", 1u64), ("b", 5)], 2);
        assert!(!v.contains("a"));
        assert!(v.contains("b"));
    }

    #[test]
    fn queue_empty_when_everything_known() {
        let vocab = Vocabulary::from_words(["a", "b"]);
        let lex = Lexicon::new();
        let corpus = vec![sent(1, "a b ।")];
        let q = ExampleQueue::build(&corpus, &KnownSet::new(&vocab, &lex), 3);
        assert!(q.is_empty());
    }

    #[test]
    fn queue_one_item_per_unknown_type() {
        let vocab = Vocabulary::from_words(["a"]);
        let lex = Lexicon::new();
        let corpus = vec![sent(1, "a u v u")];
        let q = ExampleQueue::build(&corpus, &KnownSet::new(&vocab, &lex), 3);
        let words: Vec<_> = q.iter().map(|i| i.word.as_str()).collect();
        assert_eq!(q.len(), 2);
        assert!(words.contains(&"u") && words.contains(&"v"));
        let u = q.iter().find(|i| i.word == "u").unwrap();
        assert_eq!(u.word_index, 1);
        assert_eq!(u.other_unknown, 2);
    }

    #[test]
    fn queue_keeps_best_context() {
        // unknown shares: line 1 → 2/4 = 0.5, line 2 → 1/4 = 0.25
        let vocab = Vocabulary::from_words(["a", "b", "c"]);
        let lex = Lexicon::new();
        let corpus = vec![sent(1, "u z a b"), sent(2, "a b u c")];
        let q = ExampleQueue::build(&corpus, &KnownSet::new(&vocab, &lex), 3);
        let u = q.iter().find(|i| i.word == "u").unwrap();
        assert_eq!(u.sentence, 1);
        assert_eq!(u.word_index, 2);
    }

    fn item(times: u32, other: u32, line: u32) -> WorkItem {
        WorkItem {
            word: alloc::format!("w{line}"),
            sentence: line as usize,
            word_index: 0,
            source: SourceId { document: 0, line },
            times_processed: times,
            other_unknown: other,
            sentence_len: 10,
        }
    }

    #[test]
    fn ordering_key() {
        assert!(item(0, 9, 5) < item(1, 0, 1));
        assert!(item(1, 1, 5) < item(1, 4, 1));
        assert!(item(1, 4, 1) < item(1, 4, 2));
        // 1/4 < 1/3 although the numerators tie
        let mut short = item(0, 1, 1);
        short.sentence_len = 3;
        let mut long = item(0, 1, 2);
        long.sentence_len = 4;
        assert!(long < short);
    }

    #[test]
    fn next_example_respects_passes() {
        let vocab = Vocabulary::default();
        let lex = Lexicon::new();
        let corpus = vec![sent(1, "u")];
        let mut q = ExampleQueue::build(&corpus, &KnownSet::new(&vocab, &lex), 3);
        for _ in 0..3 {
            let it = q.next_example().unwrap();
            q.finish(it, false);
        }
        assert!(q.next_example().is_none());
        assert_eq!(q.len(), 1);
        assert_eq!(q.iter().next().unwrap().times_processed, 3);
    }

    #[test]
    fn reprioritize_behaviour() {
        let vocab = Vocabulary::from_words(["a"]);
        let mut lex = Lexicon::new();
        let corpus = vec![sent(1, "a u v w x"), sent(2, "y z")];
        let mut q = ExampleQueue::build(&corpus, &KnownSet::new(&vocab, &lex), 3);
        let before: Vec<_> = q.iter().cloned().collect();
        q.reprioritize(&corpus, &KnownSet::new(&vocab, &lex));
        assert_eq!(before, q.iter().cloned().collect::<Vec<_>>());

        let u_before = q.iter().find(|i| i.word == "u").unwrap().other_unknown_fraction();
        lex.update("v", "vv", 0.9, 1).unwrap();
        q.reprioritize(&corpus, &KnownSet::new(&vocab, &lex));
        assert!(q.iter().all(|i| i.word != "v"));
        let u_after = q.iter().find(|i| i.word == "u").unwrap().other_unknown_fraction();
        assert_eq!(u_before, 3.0 / 5.0);
        assert_eq!(u_after, 2.0 / 5.0);
    }
}
