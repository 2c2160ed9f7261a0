use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Error};
use crate::orthography::RulebookMatrix;

/// A character on either side of an edit, or the null symbol standing in
/// for insertions and deletions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Symbol {
    Null,
    Char(char),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Null => f.write_str("<NULL>"),
            Symbol::Char(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EditKind {
    Retain,
    Substitute,
    Delete,
    Insert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EditOp {
    pub kind: EditKind,
    pub source: Symbol,
    pub target: Symbol,
}

impl EditOp {
    pub fn retain(c: char) -> Self {
        EditOp { kind: EditKind::Retain, source: Symbol::Char(c), target: Symbol::Char(c) }
    }

    pub fn substitute(from: char, to: char) -> Self {
        debug_assert_ne!(from, to);
        EditOp { kind: EditKind::Substitute, source: Symbol::Char(from), target: Symbol::Char(to) }
    }

    pub fn delete(c: char) -> Self {
        EditOp { kind: EditKind::Delete, source: Symbol::Char(c), target: Symbol::Null }
    }

    pub fn insert(c: char) -> Self {
        EditOp { kind: EditKind::Insert, source: Symbol::Null, target: Symbol::Char(c) }
    }

    /// Diagonal step: retain when the characters agree.
    fn diagonal(a: char, b: char) -> Self {
        if a == b {
            Self::retain(a)
        } else {
            Self::substitute(a, b)
        }
    }
}

/// How an edit script is chosen when several minimal ones exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PathMode {
    /// Fewest non-retain operations, deterministic tie-break.
    #[default]
    UnitCost,
    /// Least total `-ln S` under the current substitution matrix.
    MatrixOptimal,
}

/// Unit-cost edit distance over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let up = row[j + 1];
            let cost = usize::from(ca != cb);
            row[j + 1] = (diag + cost).min(up + 1).min(row[j] + 1);
            diag = up;
        }
    }
    row[b.len()]
}

/// `1 - levenshtein / max(len)` with lengths in characters.
pub fn normalized_similarity(a: &str, b: &str) -> Result<f64, Error> {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return Err(invalid("similarity of two empty words is undefined"));
    }
    Ok(1.0 - levenshtein(a, b) as f64 / longest as f64)
}

#[derive(Clone, Copy)]
enum Step {
    Start,
    Diagonal,
    Up,
    Left,
}

/// Cheapest script from `a` to `b` under `cost`. At each cell the diagonal
/// move wins ties, then deletion, then insertion.
pub(crate) fn cheapest_script(a: &[char], b: &[char], mut cost: impl FnMut(&EditOp) -> f64) -> (f64, Vec<EditOp>) {
    let cols = b.len() + 1;
    let mut total = vec![0.0f64; (a.len() + 1) * cols];
    let mut step = vec![Step::Start; (a.len() + 1) * cols];
    for j in 1..cols {
        total[j] = total[j - 1] + cost(&EditOp::insert(b[j - 1]));
        step[j] = Step::Left;
    }
    for i in 1..=a.len() {
        let here = i * cols;
        total[here] = total[here - cols] + cost(&EditOp::delete(a[i - 1]));
        step[here] = Step::Up;
        for j in 1..cols {
            let mut best = total[here - cols + j - 1] + cost(&EditOp::diagonal(a[i - 1], b[j - 1]));
            let mut how = Step::Diagonal;
            let up = total[here - cols + j] + cost(&EditOp::delete(a[i - 1]));
            if up < best {
                best = up;
                how = Step::Up;
            }
            let left = total[here + j - 1] + cost(&EditOp::insert(b[j - 1]));
            if left < best {
                best = left;
                how = Step::Left;
            }
            total[here + j] = best;
            step[here + j] = how;
        }
    }

    let mut ops = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (a.len(), b.len());
    while i > 0 || j > 0 {
        match step[i * cols + j] {
            Step::Diagonal => {
                ops.push(EditOp::diagonal(a[i - 1], b[j - 1]));
                i -= 1;
                j -= 1;
            }
            Step::Up => {
                ops.push(EditOp::delete(a[i - 1]));
                i -= 1;
            }
            Step::Left => {
                ops.push(EditOp::insert(b[j - 1]));
                j -= 1;
            }
            Step::Start => unreachable!("backtrace left the table"),
        }
    }
    ops.reverse();
    (total[a.len() * cols + b.len()], ops)
}

/// A minimum-length edit script (retains included) from `a` to `b`.
pub fn unit_cost_script(a: &str, b: &str) -> Vec<EditOp> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    cheapest_script(&a, &b, |op| if op.kind == EditKind::Retain { 0.0 } else { 1.0 }).1
}

/// Edit script under the requested path mode. `MatrixOptimal` needs a matrix.
pub fn min_edit_ops(a: &str, b: &str, mode: PathMode, matrix: Option<&RulebookMatrix>) -> Result<Vec<EditOp>, Error> {
    match (mode, matrix) {
        (PathMode::UnitCost, _) => Ok(unit_cost_script(a, b)),
        (PathMode::MatrixOptimal, Some(m)) => Ok(m.optimal_script(a, b)),
        (PathMode::MatrixOptimal, None) => Err(invalid("matrix-optimal scripts need a rulebook matrix")),
    }
}
