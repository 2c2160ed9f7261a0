//! The induction loop: pick an example, rewrite known words into the HRL,
//! mask, query the oracle, rerank, gate on similarity, update the lexicon
//! (and, for `Rulebook`, the substitution matrix). Repeats until every
//! queued word is learned or has used up its passes.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use crate::orthography::{PathMode, Reranker};
use crate::error::{invalid, Error, OracleError};
use crate::lexicon::{Lexicon, LexiconMeta};
use crate::oracle::{MaskFiller, MaskQuery};
use crate::orthography::{min_edit_ops, rank_candidates, RulebookConfig, RulebookMatrix};
use crate::scheduler::{is_punctuation, ExampleQueue, KnownSet, Sentence, Vocabulary, WorkItem};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InductionConfig {
    pub reranker: Reranker,
    /// Minimum (exclusive) Basic similarity for accepting a pair.
    pub similarity_threshold: f64,
    pub max_passes: u32,
    pub top_k: usize,
    /// Processed items between queue reprioritizations.
    pub batch_size: usize,
    pub freeze_null: bool,
    pub path_mode: PathMode,
    pub random_seed: u64,
    /// Stop once a whole pass adds no entries.
    pub early_stop: bool,
    pub self_prob: f64,
    pub pseudocount: f64,
}

impl Default for InductionConfig {
    fn default() -> Self {
        InductionConfig {
            reranker: Reranker::Basic,
            similarity_threshold: 0.5,
            max_passes: 3,
            top_k: 30,
            batch_size: 100,
            freeze_null: false,
            path_mode: PathMode::UnitCost,
            random_seed: 0,
            early_stop: false,
            self_prob: 0.5,
            pseudocount: 1.0,
        }
    }
}

impl InductionConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.similarity_threshold > 0.0 && self.similarity_threshold <= 1.0) {
            return Err(invalid("similarity threshold must lie in (0, 1]"));
        }
        if self.max_passes == 0 {
            return Err(invalid("at least one pass is required"));
        }
        if self.top_k == 0 {
            return Err(invalid("top_k must be at least 1"));
        }
        if self.batch_size == 0 {
            return Err(invalid("batch size must be at least 1"));
        }
        Ok(())
    }

    fn rulebook_config(&self) -> RulebookConfig {
        RulebookConfig {
            self_prob: self.self_prob,
            pseudocount: self.pseudocount,
            freeze_null: self.freeze_null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Learned {
        source: String,
        target: String,
        similarity: f64,
    },
    /// The oracle proposed the source word itself and nothing else passed.
    Identity { source: String },
    Rejected,
    OracleEmpty,
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PassStats {
    pub pass: u32,
    pub items_processed: u64,
    pub entries_added: u64,
    pub identity_hits: u64,
    pub gate_rejections: u64,
    pub oracle_empty: u64,
    pub oracle_failures: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunReport {
    pub passes: Vec<PassStats>,
    pub initial_queue_size: u64,
    pub oracle_calls: u64,
    pub oracle_failures: u64,
    pub stopped_early: bool,
    /// Filled in by callers that can read a clock.
    pub wall_time_secs: Option<f64>,
}

impl RunReport {
    pub fn items_processed(&self) -> u64 {
        self.passes.iter().map(|p| p.items_processed).sum()
    }

    pub fn entries_added(&self) -> u64 {
        self.passes.iter().map(|p| p.entries_added).sum()
    }

    fn pass_mut(&mut self, pass: u32) -> &mut PassStats {
        while self.passes.len() < pass as usize {
            let n = self.passes.len() as u32 + 1;
            self.passes.push(PassStats { pass: n, ..Default::default() });
        }
        &mut self.passes[pass as usize - 1]
    }
}

/// Rewrites tokens that have a lexicon equivalent. HRL vocabulary and
/// punctuation stay as they are.
pub fn replace_known_words(tokens: &[String], lexicon: &Lexicon, vocabulary: &Vocabulary) -> Vec<String> {
    tokens
        .iter()
        .map(|t| {
            if is_punctuation(t) || vocabulary.contains(t) {
                return t.clone();
            }
            lexicon.best_equivalent(t).unwrap_or(t).to_string()
        })
        .collect()
}

/// Mutable state threaded through the loop.
#[derive(Debug, Clone)]
pub struct InductionState {
    pub lexicon: Lexicon,
    pub rulebook: Option<RulebookMatrix>,
}

/// Processes one work item. Pass number is `times_processed + 1`.
pub fn process_example<O: MaskFiller + ?Sized>(
    item: &WorkItem,
    corpus: &[Sentence],
    vocabulary: &Vocabulary,
    state: &mut InductionState,
    oracle: &mut O,
    cfg: &InductionConfig,
) -> Result<Outcome, OracleError> {
    let sentence = &corpus[item.sentence];
    let source = item.word.as_str();
    let pass = item.times_processed + 1;

    let tokens = replace_known_words(&sentence.tokens, &state.lexicon, vocabulary);
    let query = MaskQuery::new(tokens, item.word_index, cfg.top_k).expect("work item addresses a token");
    let answer = oracle.mask_fill(&query)?;
    if answer.is_empty() {
        return Ok(Outcome::OracleEmpty);
    }

    let matrix = match cfg.reranker {
        Reranker::Rulebook => state.rulebook.as_mut().map(|m| {
            m.register_word(source);
            answer.words().for_each(|w| m.register_word(w));
            &*m
        }),
        Reranker::Basic => None,
    };
    let ranking = rank_candidates(source, answer.words(), cfg.reranker, matrix, cfg.path_mode);

    if let Some(best) = ranking.best().filter(|b| b.similarity > cfg.similarity_threshold) {
        state
            .lexicon
            .update(source, &best.word, best.similarity, pass)
            .expect("words are non-empty");
        if let (Reranker::Rulebook, Some(m)) = (cfg.reranker, state.rulebook.as_mut()) {
            let ops = min_edit_ops(source, &best.word, cfg.path_mode, Some(m)).expect("matrix given");
            m.maximization_update(&ops);
        }
        return Ok(Outcome::Learned {
            source: source.to_string(),
            target: best.word.clone(),
            similarity: best.similarity,
        });
    }
    if ranking.identity_hit {
        state.lexicon.update(source, source, 1.0, pass).expect("non-empty");
        return Ok(Outcome::Identity {
            source: source.to_string(),
        });
    }
    Ok(Outcome::Rejected)
}

/// What happened in one step, for progress reporting.
#[derive(Debug, Clone)]
pub struct StepEvent<'a> {
    pub pass: u32,
    pub item: &'a WorkItem,
    pub result: &'a Result<Outcome, OracleError>,
    pub lexicon_size: usize,
}

#[derive(Debug, Clone)]
pub struct InductionRun {
    pub lexicon: Lexicon,
    /// Present for the `Rulebook` reranker.
    pub rulebook: Option<RulebookMatrix>,
    pub report: RunReport,
}

/// Runs the whole loop. Deterministic for a deterministic oracle.
pub fn run_induction<O: MaskFiller + ?Sized>(
    corpus: &[Sentence],
    vocabulary: &Vocabulary,
    oracle: &mut O,
    cfg: &InductionConfig,
) -> Result<InductionRun, Error> {
    run_induction_with(corpus, vocabulary, oracle, cfg, |_| {})
}

/// [`run_induction`] with a callback after every processed item.
pub fn run_induction_with<O: MaskFiller + ?Sized>(
    corpus: &[Sentence],
    vocabulary: &Vocabulary,
    oracle: &mut O,
    cfg: &InductionConfig,
    mut on_step: impl FnMut(&StepEvent<'_>),
) -> Result<InductionRun, Error> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(invalid("corpus is empty"));
    }
    if vocabulary.is_empty() {
        return Err(invalid("HRL vocabulary is empty"));
    }

    let method = match cfg.reranker {
        Reranker::Basic => "basic",
        Reranker::Rulebook => "rulebook",
    };
    let lexicon = Lexicon::with_meta(LexiconMeta {
        method: method.to_string(),
        threshold: cfg.similarity_threshold,
        passes: cfg.max_passes,
    });
    let rulebook = match cfg.reranker {
        Reranker::Rulebook => {
            let source_chars: BTreeSet<char> = corpus
                .iter()
                .flat_map(|s| s.tokens.iter())
                .filter(|t| !is_punctuation(t))
                .flat_map(|t| t.chars())
                .collect();
            let target_chars: BTreeSet<char> = vocabulary.iter().flat_map(str::chars).collect();
            Some(RulebookMatrix::new(source_chars, target_chars, cfg.rulebook_config())?)
        }
        Reranker::Basic => None,
    };
    let mut state = InductionState { lexicon, rulebook };
    let mut queue = ExampleQueue::build(corpus, &KnownSet::new(vocabulary, &state.lexicon), cfg.max_passes);
    let mut report = RunReport {
        initial_queue_size: queue.len() as u64,
        ..Default::default()
    };

    let mut since_reprioritize = 0;
    let mut current_pass = 1;
    while let Some(next_pass) = queue.peek().map(|i| i.times_processed + 1) {
        if next_pass > current_pass {
            let added = report.passes.get(current_pass as usize - 1).map_or(0, |p| p.entries_added);
            if cfg.early_stop && added == 0 {
                report.stopped_early = true;
                break;
            }
            current_pass = next_pass;
        }
        let item = queue.next_example().expect("peeked");
        let pass = item.times_processed + 1;
        let result = process_example(&item, corpus, vocabulary, &mut state, oracle, cfg);

        report.oracle_calls += 1;
        let stats = report.pass_mut(pass);
        stats.items_processed += 1;
        let done = match &result {
            Ok(Outcome::Learned { .. }) => {
                stats.entries_added += 1;
                true
            }
            Ok(Outcome::Identity { .. }) => {
                stats.identity_hits += 1;
                true
            }
            Ok(Outcome::Rejected) => {
                stats.gate_rejections += 1;
                false
            }
            Ok(Outcome::OracleEmpty) => {
                stats.oracle_empty += 1;
                false
            }
            Err(_) => {
                stats.oracle_failures += 1;
                report.oracle_failures += 1;
                false
            }
        };
        on_step(&StepEvent {
            pass,
            item: &item,
            result: &result,
            lexicon_size: state.lexicon.len(),
        });
        queue.finish(item, done);

        since_reprioritize += 1;
        if since_reprioritize == cfg.batch_size {
            since_reprioritize = 0;
            queue.reprioritize(corpus, &KnownSet::new(vocabulary, &state.lexicon));
        }
    }

    Ok(InductionRun {
        lexicon: state.lexicon,
        rulebook: state.rulebook,
        report,
    })
}
