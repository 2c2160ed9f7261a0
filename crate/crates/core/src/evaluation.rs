//! Precision@k, accuracy on non-identical predictions (NIA@k), coverage and
//! the identity baseline, scored against a silver lexicon.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error};
use crate::lexicon::Lexicon;

/// Ranked predictions per source word.
pub type Predictions = BTreeMap<String, Vec<String>>;

/// Acceptable HRL equivalents for each LRL word.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SilverLexicon {
    entries: BTreeMap<String, BTreeSet<String>>,
}

impl SilverLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds acceptable targets for `source`; entries with no targets are
    /// rejected.
    pub fn insert<S: Into<String>>(&mut self, source: impl Into<String>, targets: impl IntoIterator<Item = S>) -> Result<(), Error> {
        let source = source.into();
        let targets: BTreeSet<String> = targets.into_iter().map(Into::into).collect();
        if source.is_empty() || targets.is_empty() || targets.iter().any(String::is_empty) {
            return Err(invalid("silver entries need a source and at least one target"));
        }
        self.entries.entry(source).or_default().extend(targets);
        Ok(())
    }

    pub fn targets(&self, source: &str) -> Option<&BTreeSet<String>> {
        self.entries.get(source)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalResult {
    pub k: usize,
    /// Percentage in `[0, 100]`.
    pub precision_at_k: f64,
    /// Percentage, `None` when no non-identical prediction exists.
    pub nia_at_k: Option<f64>,
    /// Share of silver words with at least one prediction.
    pub coverage: f64,
    pub silver_words: usize,
    pub words_correct: usize,
    pub words_covered: usize,
    pub non_identical_predictions: usize,
    pub non_identical_correct: usize,
}

#[derive(Default)]
struct Tally {
    correct: usize,
    covered: usize,
    pool: usize,
    pool_correct: usize,
}

fn tally(predictions: &Predictions, silver: &SilverLexicon, k: usize) -> Tally {
    let mut t = Tally::default();
    for (source, targets) in silver.iter() {
        let top: &[String] = match predictions.get(source) {
            Some(p) => &p[..p.len().min(k)],
            None => &[],
        };
        if !top.is_empty() {
            t.covered += 1;
        }
        if top.iter().any(|p| targets.contains(p)) {
            t.correct += 1;
        }
        for p in top.iter().filter(|p| p.as_str() != source) {
            t.pool += 1;
            if targets.contains(p) {
                t.pool_correct += 1;
            }
        }
    }
    t
}

fn check(silver: &SilverLexicon, k: usize) -> Result<(), Error> {
    if silver.is_empty() {
        return Err(invalid("silver lexicon is empty"));
    }
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    Ok(())
}

/// Percentage of silver words with a correct target among their top `k`
/// predictions. Words without predictions count as wrong.
pub fn precision_at_k(predictions: &Predictions, silver: &SilverLexicon, k: usize) -> Result<f64, Error> {
    check(silver, k)?;
    let t = tally(predictions, silver, k);
    Ok(100.0 * t.correct as f64 / silver.len() as f64)
}

/// Percentage of correct predictions among all top-`k` predictions that
/// differ from their source word. `None` when there are no such predictions.
pub fn nia_at_k(predictions: &Predictions, silver: &SilverLexicon, k: usize) -> Result<Option<f64>, Error> {
    check(silver, k)?;
    let t = tally(predictions, silver, k);
    Ok((t.pool > 0).then(|| 100.0 * t.pool_correct as f64 / t.pool as f64))
}

pub fn evaluate_predictions(predictions: &Predictions, silver: &SilverLexicon, ks: &[usize]) -> Result<Vec<EvalResult>, Error> {
    ks.iter()
        .map(|&k| {
            check(silver, k)?;
            let t = tally(predictions, silver, k);
            let n = silver.len();
            Ok(EvalResult {
                k,
                precision_at_k: 100.0 * t.correct as f64 / n as f64,
                nia_at_k: (t.pool > 0).then(|| 100.0 * t.pool_correct as f64 / t.pool as f64),
                coverage: t.covered as f64 / n as f64,
                silver_words: n,
                words_correct: t.correct,
                words_covered: t.covered,
                non_identical_predictions: t.pool,
                non_identical_correct: t.pool_correct,
            })
        })
        .collect()
}

/// Scores an induced lexicon at each `k`.
pub fn evaluate(lexicon: &Lexicon, silver: &SilverLexicon, ks: &[usize]) -> Result<Vec<EvalResult>, Error> {
    evaluate_predictions(&lexicon.predictions(), silver, ks)
}

/// Predicts every silver word as itself.
pub fn identity_baseline(silver: &SilverLexicon, k: usize) -> Result<EvalResult, Error> {
    let predictions: Predictions = silver.iter().map(|(s, _)| (s.into(), vec![s.into()])).collect();
    Ok(evaluate_predictions(&predictions, silver, &[k])?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preds(items: &[(&str, &[&str])]) -> Predictions {
        items
            .iter()
            .map(|(s, p)| (s.to_string(), p.iter().map(|x| x.to_string()).collect()))
            .collect()
    }

    use alloc::string::ToString;

    fn silver(items: &[(&str, &[&str])]) -> SilverLexicon {
        let mut s = SilverLexicon::new();
        for (src, t) in items {
            s.insert(*src, t.iter().copied()).unwrap();
        }
        s
    }

    #[test]
    fn perfect_predictions() {
        let s = silver(&[("a", &["x"]), ("b", &["y"])]);
        let p = preds(&[("a", &["x"]), ("b", &["y"])]);
        assert_eq!(precision_at_k(&p, &s, 1).unwrap(), 100.0);
    }

    #[test]
    fn any_of_top_k() {
        let s = silver(&[("w", &["a", "b"])]);
        let p = preds(&[("w", &["c", "a"])]);
        assert_eq!(precision_at_k(&p, &s, 2).unwrap(), 100.0);
        assert_eq!(precision_at_k(&p, &s, 1).unwrap(), 0.0);
    }

    #[test]
    fn missing_predictions_count_as_wrong() {
        let s = silver(&[("a", &["x"]), ("b", &["y"]), ("c", &["z"])]);
        let p = preds(&[("a", &["x"]), ("b", &["q", "y"])]);
        let got = precision_at_k(&p, &s, 2).unwrap();
        assert!((got - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!((got * 100.0).round() / 100.0, 66.67);
    }

    #[test]
    fn nia_examples() {
        let s = silver(&[("a", &["a"]), ("b", &["x"])]);
        assert_eq!(nia_at_k(&preds(&[("a", &["a"]), ("b", &["b"])]), &s, 2).unwrap(), None);

        let s1 = silver(&[("w", &["w", "v"])]);
        assert_eq!(nia_at_k(&preds(&[("w", &["w", "v"])]), &s1, 2).unwrap(), Some(100.0));

        let s2 = silver(&[("a", &["x"]), ("b", &["y"])]);
        let p2 = preds(&[("a", &["x", "q"]), ("b", &["r", "s"])]);
        assert_eq!(nia_at_k(&p2, &s2, 2).unwrap(), Some(25.0));
    }

    #[test]
    fn empty_silver_is_rejected() {
        let p = Predictions::new();
        assert!(precision_at_k(&p, &SilverLexicon::new(), 1).is_err());
        assert!(nia_at_k(&p, &SilverLexicon::new(), 1).is_err());
        assert!(precision_at_k(&p, &silver(&[("a", &["b"])]), 0).is_err());
    }

    #[test]
    fn identity_baseline_examples() {
        let none = silver(&[("a", &["b"]), ("c", &["d"])]);
        assert_eq!(identity_baseline(&none, 2).unwrap().precision_at_k, 0.0);

        let half = silver(&[("w1", &["w1"]), ("w2", &["x"])]);
        let r2 = identity_baseline(&half, 2).unwrap();
        assert_eq!(r2.precision_at_k, 50.0);
        assert_eq!(r2.nia_at_k, None);
        assert_eq!(r2.coverage, 1.0);
        for k in [1, 3, 5] {
            assert_eq!(identity_baseline(&half, k).unwrap().precision_at_k, 50.0);
        }
    }

    #[test]
    fn evaluate_lexicon() {
        let s = silver(&[("a", &["x"]), ("b", &["y"])]);
        let empty = evaluate(&Lexicon::new(), &s, &[1, 2, 3, 5]).unwrap();
        assert!(empty.iter().all(|r| r.precision_at_k == 0.0 && r.coverage == 0.0 && r.nia_at_k.is_none()));

        let mut lex = Lexicon::new();
        lex.update("a", "x", 0.9, 1).unwrap();
        lex.update("b", "y", 0.9, 1).unwrap();
        let r = evaluate(&lex, &s, &[1]).unwrap();
        assert_eq!(r[0].precision_at_k, 100.0);
        assert_eq!(r[0].coverage, 1.0);
    }

    #[test]
    fn silver_rejects_empty_targets() {
        let mut s = SilverLexicon::new();
        assert!(s.insert("a", Vec::<String>::new()).is_err());
        assert!(s.insert("", ["x"]).is_err());
    }
}
