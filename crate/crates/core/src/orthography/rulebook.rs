//! Character-substitution probabilities learned from accepted word pairs.
//!
//! Each source symbol `a` owns a row of pseudo-counts `C(a, ·)` over the
//! target symbols plus null, with row total `T(a)`. The substitution
//! probability is `S(a, b) = C(a, b) / T(a)`. Rows start out favouring the
//! self-transformation and every accepted pair adds one count per edit
//! operation of its script.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::edit::{cheapest_script, unit_cost_script, EditOp, PathMode, Symbol};
use crate::error::{invalid, Error};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RulebookConfig {
    /// Initial probability of a character mapping to itself.
    pub self_prob: f64,
    /// Count mass each row starts with.
    pub pseudocount: f64,
    /// Skip updates for operations whose source side is null.
    pub freeze_null: bool,
}

impl Default for RulebookConfig {
    fn default() -> Self {
        RulebookConfig {
            self_prob: 0.5,
            pseudocount: 1.0,
            freeze_null: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RulebookMatrix {
    sources: BTreeMap<Symbol, usize>,
    targets: BTreeMap<Symbol, usize>,
    /// `counts[row][col]`, columns in target insertion order.
    counts: Vec<Vec<f64>>,
    totals: Vec<f64>,
    config: RulebookConfig,
}

impl RulebookMatrix {
    /// Builds the initial matrix over `source_chars ∪ {null}` by
    /// `target_chars ∪ {null}`.
    pub fn new(
        source_chars: impl IntoIterator<Item = char>,
        target_chars: impl IntoIterator<Item = char>,
        config: RulebookConfig,
    ) -> Result<Self, Error> {
        if !(config.self_prob > 0.0 && config.self_prob < 1.0) {
            return Err(invalid("self probability must lie strictly between 0 and 1"));
        }
        if !(config.pseudocount > 0.0 && config.pseudocount.is_finite()) {
            return Err(invalid("pseudocount must be positive"));
        }
        let sources: BTreeSet<char> = source_chars.into_iter().collect();
        let targets: BTreeSet<char> = target_chars.into_iter().collect();
        if sources.is_empty() || targets.is_empty() {
            return Err(invalid("character sets must be non-empty"));
        }

        let mut m = RulebookMatrix {
            sources: BTreeMap::new(),
            targets: BTreeMap::new(),
            counts: Vec::new(),
            totals: Vec::new(),
            config,
        };
        m.targets.insert(Symbol::Null, 0);
        for (i, c) in targets.into_iter().enumerate() {
            m.targets.insert(Symbol::Char(c), i + 1);
        }
        m.push_row(Symbol::Null);
        for c in sources {
            m.push_row(Symbol::Char(c));
        }
        Ok(m)
    }

    pub fn config(&self) -> &RulebookConfig {
        &self.config
    }

    pub fn set_freeze_null(&mut self, freeze: bool) {
        self.config.freeze_null = freeze;
    }

    /// Initial row for `source` over the current target set.
    fn push_row(&mut self, source: Symbol) {
        let width = self.targets.len();
        let p = self.config.pseudocount;
        let mut row = alloc::vec![0.0; width];
        match self.targets.get(&source) {
            Some(&own) => {
                let other = p * (1.0 - self.config.self_prob) / (width - 1) as f64;
                row.iter_mut().for_each(|c| *c = other);
                row[own] = p * self.config.self_prob;
            }
            None => row.iter_mut().for_each(|c| *c = p / width as f64),
        }
        self.sources.insert(source, self.counts.len());
        self.totals.push(p);
        self.counts.push(row);
    }

    /// Adds a target column; every row gains the mass a fresh row would
    /// give a non-self target (or the self mass on the diagonal).
    fn push_column(&mut self, target: Symbol) {
        let width = self.targets.len() + 1;
        let p = self.config.pseudocount;
        let col = self.targets.len();
        self.targets.insert(target, col);
        for (&source, &row) in &self.sources {
            let has_self = source == target || self.targets.contains_key(&source);
            let mass = if source == target {
                p * self.config.self_prob
            } else if has_self {
                p * (1.0 - self.config.self_prob) / (width - 1) as f64
            } else {
                p / width as f64
            };
            self.counts[row].push(mass);
            self.totals[row] += mass;
        }
    }

    /// Makes sure `c` has a row and a column, initialised like the others.
    pub fn register_char(&mut self, c: char) {
        let sym = Symbol::Char(c);
        if !self.targets.contains_key(&sym) {
            self.push_column(sym);
        }
        if !self.sources.contains_key(&sym) {
            self.push_row(sym);
        }
    }

    pub fn register_word(&mut self, word: &str) {
        word.chars().for_each(|c| self.register_char(c));
    }

    pub fn knows(&self, sym: Symbol) -> bool {
        self.sources.contains_key(&sym) && self.targets.contains_key(&sym)
    }

    fn cell(&self, a: Symbol, b: Symbol) -> Result<(usize, usize), Error> {
        let unknown = |s: Symbol| match s {
            Symbol::Char(c) => Error::UnknownCharacter(c),
            Symbol::Null => invalid("null symbol missing from matrix"),
        };
        let row = *self.sources.get(&a).ok_or_else(|| unknown(a))?;
        let col = *self.targets.get(&b).ok_or_else(|| unknown(b))?;
        Ok((row, col))
    }

    /// `S(a, b) = C(a, b) / T(a)`.
    pub fn substitution_score(&self, a: Symbol, b: Symbol) -> Result<f64, Error> {
        let (row, col) = self.cell(a, b)?;
        Ok(self.counts[row][col] / self.totals[row])
    }

    pub fn count(&self, a: Symbol, b: Symbol) -> Result<f64, Error> {
        let (row, col) = self.cell(a, b)?;
        Ok(self.counts[row][col])
    }

    pub fn total(&self, a: Symbol) -> Option<f64> {
        self.sources.get(&a).map(|&r| self.totals[r])
    }

    fn op_cost(&self, op: &EditOp) -> f64 {
        let (row, col) = self.cell(op.source, op.target).expect("characters registered before scoring");
        -libm::log(self.counts[row][col] / self.totals[row])
    }

    fn with_words(&self, s: &str, t: &str) -> Option<Self> {
        let missing = s.chars().chain(t.chars()).any(|c| !self.knows(Symbol::Char(c)));
        missing.then(|| {
            let mut m = self.clone();
            m.register_word(s);
            m.register_word(t);
            m
        })
    }

    /// Script minimising `Σ -ln S(a, b)` under the current matrix.
    /// Characters the matrix has not seen are scored as if freshly registered.
    pub fn optimal_script(&self, s: &str, t: &str) -> Vec<EditOp> {
        if let Some(m) = self.with_words(s, t) {
            return m.optimal_script(s, t);
        }
        let s: Vec<char> = s.chars().collect();
        let t: Vec<char> = t.chars().collect();
        cheapest_script(&s, &t, |op| self.op_cost(op)).1
    }

    /// ζ(s, t): negative log-probability of the edit script from `s` to `t`.
    /// Lower means more likely equivalent.
    pub fn pair_score(&self, s: &str, t: &str, mode: PathMode) -> f64 {
        if let Some(m) = self.with_words(s, t) {
            return m.pair_score(s, t, mode);
        }
        let ops = match mode {
            PathMode::UnitCost => unit_cost_script(s, t),
            PathMode::MatrixOptimal => self.optimal_script(s, t),
        };
        self.script_score(&ops)
    }

    /// ζ of an explicit script. All symbols must be registered.
    pub fn script_score(&self, ops: &[EditOp]) -> f64 {
        ops.iter().map(|op| self.op_cost(op)).sum()
    }

    /// Maximization step: one count per operation on its cell and row total.
    /// Unseen characters are registered first.
    pub fn maximization_update(&mut self, ops: &[EditOp]) {
        for op in ops {
            if self.config.freeze_null && op.source == Symbol::Null {
                continue;
            }
            for sym in [op.source, op.target] {
                if let Symbol::Char(c) = sym {
                    self.register_char(c);
                }
            }
            let (row, col) = self.cell(op.source, op.target).expect("just registered");
            self.counts[row][col] += 1.0;
            self.totals[row] += 1.0;
        }
    }

    pub fn source_symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.sources.keys().copied()
    }

    pub fn target_symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.targets.keys().copied()
    }

    /// One row as `(target, count, probability)`, sorted by probability
    /// descending, ties by target symbol.
    pub fn row(&self, a: Symbol) -> Option<Vec<(Symbol, f64, f64)>> {
        let &r = self.sources.get(&a)?;
        let total = self.totals[r];
        let mut cells: Vec<_> = self
            .targets
            .iter()
            .map(|(&b, &col)| (b, self.counts[r][col], self.counts[r][col] / total))
            .collect();
        cells.sort_by(|x, y| y.2.total_cmp(&x.2).then(x.0.cmp(&y.0)));
        Some(cells)
    }

    /// Most probable target other than `a` itself.
    pub fn best_non_self(&self, a: Symbol) -> Option<(Symbol, f64)> {
        self.row(a)?
            .into_iter()
            .find(|&(b, _, _)| b != a)
            .map(|(b, _, p)| (b, p))
    }

    /// Largest `|Σ_b C(a,b) - T(a)|` and `|Σ_b S(a,b) - 1|` over all rows.
    pub fn simplex_error(&self) -> (f64, f64) {
        let mut count_err: f64 = 0.0;
        let mut prob_err: f64 = 0.0;
        for (row, &total) in self.counts.iter().zip(&self.totals) {
            let sum: f64 = row.iter().sum();
            let psum: f64 = row.iter().map(|c| c / total).sum();
            count_err = count_err.max((sum - total).abs());
            prob_err = prob_err.max((psum - 1.0).abs());
        }
        (count_err, prob_err)
    }
}
