//! Bilingual lexicon induction between a closely related high-resource
//! language (HRL) and low-resource language (LRL).
//!
//! LRL sentences are mask-filled one unknown word at a time by an HRL
//! masked language model (any [`oracle::MaskFiller`]); the proposed HRL
//! candidates are reranked by orthographic similarity to the masked word,
//! either with plain normalized edit distance (`Basic`) or with a learned
//! character-substitution model updated online by EM (`Rulebook`).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the HTTP
//! oracle client and the command line live in the `lexforge` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod evaluation;
pub mod induction;
pub mod lexicon;
pub mod oracle;
pub mod orthography;
pub mod scheduler;

pub use error::{Error, OracleError};
pub use evaluation::{EvalResult, SilverLexicon};
pub use induction::{InductionConfig, Outcome, PathMode, Reranker, RunReport};
pub use lexicon::{Candidate, Lexicon, LexiconEntry};
pub use oracle::{CandidateSet, MaskFiller, MaskQuery, MockOracle, MASK_TOKEN};
pub use orthography::{EditKind, EditOp, RulebookMatrix, Symbol};
pub use scheduler::{ExampleQueue, KnownSet, Sentence, SourceId, WorkItem};
