//! Orthographic similarity: unit-cost edit distance (`Basic`) and the
//! learned character-substitution model (`Rulebook`).

mod edit;
mod rank;
mod rulebook;

pub use edit::{levenshtein, min_edit_ops, normalized_similarity, unit_cost_script, EditKind, EditOp, PathMode, Symbol};
pub use rank::{rank_candidates, Ranking, RankedCandidate, Reranker};
pub use rulebook::{RulebookConfig, RulebookMatrix};
