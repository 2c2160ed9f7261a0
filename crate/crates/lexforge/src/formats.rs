//! Text formats. Everything read from disk is NFC-normalized so that
//! codepoint comparisons are stable across inputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use lexforge_core::evaluation::EvalResult;
use lexforge_core::scheduler::{tokenize, Vocabulary};
use lexforge_core::{Lexicon, MockOracle, RulebookMatrix, Sentence, SilverLexicon, SourceId, Symbol};
use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

pub const LEXICON_HEADER: &str = "source\ttarget\tsimilarity\tpass";
pub const RULEBOOK_HEADER: &str = "source_char\ttarget_char\tcount\tprobability";
pub const NULL_TOKEN: &str = "<NULL>";

/// Reads a UTF-8 file and NFC-normalizes it.
pub fn read_text(path: &Path) -> Result<String> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(raw.nfc().collect())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// One sentence per non-blank line; `document` tags provenance.
pub fn parse_corpus(text: &str, document: u32) -> Vec<Sentence> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            tokenize(
                l,
                SourceId {
                    document,
                    line: i as u32 + 1,
                },
            )
        })
        .collect()
}

/// Reads several corpus files; file `i` becomes document `i`.
pub fn read_corpora<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<Sentence>> {
    let mut out = Vec::new();
    for (doc, p) in paths.iter().enumerate() {
        out.extend(parse_corpus(&read_text(p.as_ref())?, doc as u32));
    }
    Ok(out)
}

/// `word<TAB>frequency` or bare `word` (frequency 1) per line.
pub fn parse_vocab_counts(text: &str, path: &Path) -> Result<Vec<(String, u64)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let word = cols.next().unwrap_or_default().trim();
        let freq = match cols.next() {
            Some(f) => f
                .trim()
                .parse::<u64>()
                .map_err(|e| parse_err(path, i + 1, format!("bad frequency {f:?}: {e}")))?,
            None => 1,
        };
        if word.is_empty() || word.contains(char::is_whitespace) {
            return Err(parse_err(path, i + 1, "vocabulary word must be a single token"));
        }
        out.push((word.to_string(), freq));
    }
    Ok(out)
}

pub fn read_vocabulary(path: &Path, min_freq: u64) -> Result<Vocabulary> {
    let counts = parse_vocab_counts(&read_text(path)?, path)?;
    Ok(Vocabulary::from_counts(counts, min_freq))
}

/// Lexicon as TSV: up to `top_k` rows per source, ordered by source then rank.
pub fn lexicon_to_tsv(lexicon: &Lexicon, top_k: usize) -> String {
    let mut out = String::new();
    out.push_str(LEXICON_HEADER);
    out.push('\n');
    for entry in lexicon.entries() {
        for c in entry.candidates().iter().take(top_k.max(1)) {
            let _ = writeln!(out, "{}\t{}\t{:.6}\t{}", entry.source, c.target, c.similarity, c.pass);
        }
    }
    out
}

pub fn write_lexicon(mut sink: impl Write, lexicon: &Lexicon, top_k: usize) -> io::Result<()> {
    sink.write_all(lexicon_to_tsv(lexicon, top_k).as_bytes())
}

pub fn parse_lexicon(text: &str, path: &Path) -> Result<Lexicon> {
    let mut lex = Lexicon::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if i == 0 && line == LEXICON_HEADER {
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let [source, target, sim, pass] = cols[..] else {
            return Err(parse_err(path, i + 1, format!("expected 4 columns, found {}", cols.len())));
        };
        let sim: f64 = sim
            .parse()
            .map_err(|e| parse_err(path, i + 1, format!("bad similarity {sim:?}: {e}")))?;
        let pass: u32 = pass
            .parse()
            .map_err(|e| parse_err(path, i + 1, format!("bad pass {pass:?}: {e}")))?;
        lex.update(source, target, sim, pass)
            .map_err(|e| parse_err(path, i + 1, e.to_string()))?;
    }
    Ok(lex)
}

pub fn read_lexicon(path: &Path) -> Result<Lexicon> {
    parse_lexicon(&read_text(path)?, path)
}

fn symbol_str(s: Symbol) -> String {
    s.to_string()
}

fn parse_symbol(s: &str) -> Option<Symbol> {
    if s == NULL_TOKEN {
        return Some(Symbol::Null);
    }
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(Symbol::Char(c)),
        _ => None,
    }
}

/// Matrix dump: rows by source symbol, each row by probability descending.
pub fn rulebook_to_tsv(m: &RulebookMatrix) -> String {
    let mut out = String::new();
    out.push_str(RULEBOOK_HEADER);
    out.push('\n');
    for a in m.source_symbols() {
        for (b, count, p) in m.row(a).unwrap_or_default() {
            let _ = writeln!(out, "{}\t{}\t{count:.6}\t{p:.9}", symbol_str(a), symbol_str(b));
        }
    }
    out
}

/// One parsed dump row.
#[derive(Debug, Clone, PartialEq)]
pub struct RulebookRow {
    pub source: Symbol,
    pub target: Symbol,
    pub count: f64,
    pub probability: f64,
}

pub fn parse_rulebook(text: &str, path: &Path) -> Result<Vec<RulebookRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if (i == 0 && line == RULEBOOK_HEADER) || line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let [a, b, count, p] = cols[..] else {
            return Err(parse_err(path, i + 1, "expected 4 columns"));
        };
        let sym = |s: &str| parse_symbol(s).ok_or_else(|| parse_err(path, i + 1, format!("bad symbol {s:?}")));
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| parse_err(path, i + 1, format!("bad number {s:?}: {e}")))
        };
        rows.push(RulebookRow {
            source: sym(a)?,
            target: sym(b)?,
            count: num(count)?,
            probability: num(p)?,
        });
    }
    Ok(rows)
}

/// `source<TAB>target1<TAB>target2…` per line.
pub fn parse_silver(text: &str, path: &Path) -> Result<SilverLexicon> {
    let mut silver = SilverLexicon::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split('\t').map(str::trim);
        let source = cols.next().unwrap_or_default();
        let targets: Vec<&str> = cols.filter(|t| !t.is_empty()).collect();
        silver
            .insert(source, targets)
            .map_err(|e| parse_err(path, i + 1, e.to_string()))?;
    }
    Ok(silver)
}

pub fn read_silver(path: &Path) -> Result<SilverLexicon> {
    parse_silver(&read_text(path)?, path)
}

pub fn read_mock_table(path: &Path) -> Result<MockOracle> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e.line(), e.to_string()))
}

pub fn mock_table_to_json(mock: &MockOracle) -> String {
    let mut s = serde_json::to_string_pretty(mock).expect("mock table serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct EvalRow {
    k: usize,
    p_at_k: f64,
    nia_at_k: Option<f64>,
    coverage: f64,
}

pub fn eval_to_json(results: &[EvalResult]) -> String {
    let rows: Vec<EvalRow> = results
        .iter()
        .map(|r| EvalRow {
            k: r.k,
            p_at_k: r.precision_at_k,
            nia_at_k: r.nia_at_k,
            coverage: r.coverage,
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("plain data");
    s.push('\n');
    s
}

/// Aligned table, one row per `k`. `label` names the system in the first column.
pub fn eval_table(label: &str, results: &[EvalResult]) -> String {
    let width = label.chars().count().max(6);
    let mut out = format!("{:<width$}  {:>3}  {:>7}  {:>7}  {:>8}\n", "method", "k", "P@k", "NIA@k", "coverage");
    for r in results {
        let nia = r.nia_at_k.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
        let _ = writeln!(
            out,
            "{label:<width$}  {:>3}  {:>7.2}  {nia:>7}  {:>8.4}",
            r.k, r.precision_at_k, r.coverage
        );
    }
    out
}

/// Word frequencies over tokenized lines, punctuation excluded.
pub fn unigram_counts(corpus: &[Sentence]) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for s in corpus {
        for t in &s.tokens {
            if !lexforge_core::scheduler::is_punctuation(t) {
                *counts.entry(t.clone()).or_insert(0) += 1;
            }
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("test.tsv")
    }

    #[test]
    fn empty_lexicon_is_header_only() {
        assert_eq!(lexicon_to_tsv(&Lexicon::new(), 2), format!("{LEXICON_HEADER}\n"));
    }

    #[test]
    fn lexicon_rows_capped_at_top_k() {
        let mut lex = Lexicon::new();
        lex.update("bhail", "hua", 0.6, 1).unwrap();
        assert_eq!(lexicon_to_tsv(&lex, 2).lines().count(), 2);
        lex.update("bhail", "bhaya", 0.8, 2).unwrap();
        lex.update("bhail", "bhayl", 0.7, 2).unwrap();
        let tsv = lexicon_to_tsv(&lex, 2);
        assert_eq!(tsv, format!("{LEXICON_HEADER}\nbhail\tbhaya\t0.800000\t2\nbhail\tbhayl\t0.700000\t2\n"));
    }

    #[test]
    fn lexicon_parse_errors_carry_line() {
        let err = parse_lexicon(&format!("{LEXICON_HEADER}\na\tb\tx\t1\n"), p()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_lexicon("a\tb\n", p()).is_err());
    }

    #[test]
    fn vocab_with_and_without_counts() {
        let v = parse_vocab_counts("है\t120\nघर\n\n", p()).unwrap();
        assert_eq!(v, vec![("है".to_string(), 120), ("घर".to_string(), 1)]);
        assert!(parse_vocab_counts("a\tmany\n", p()).is_err());
    }

    #[test]
    fn silver_variable_width() {
        let s = parse_silver("bhail\thua\thui\nghar\tghar\n", p()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.targets("bhail").unwrap().len(), 2);
        assert!(parse_silver("lonely\n", p()).is_err());
    }

    #[test]
    fn rulebook_dump_format() {
        let m = RulebookMatrix::new(['a', 'b'], ['a', 'b'], Default::default()).unwrap();
        let tsv = rulebook_to_tsv(&m);
        let mut lines = tsv.lines();
        assert_eq!(lines.next(), Some(RULEBOOK_HEADER));
        assert_eq!(lines.next(), Some("<NULL>\t<NULL>\t0.500000\t0.500000000"));
        let rows = parse_rulebook(&tsv, p()).unwrap();
        assert_eq!(rows.len(), 9);
        let ab = rows
            .iter()
            .find(|r| r.source == Symbol::Char('a') && r.target == Symbol::Char('b'))
            .unwrap();
        assert_eq!(ab.probability, 0.25);
    }

    #[test]
    fn corpus_lines_and_provenance() {
        let c = parse_corpus("राम घर गइल।\n\nहम\n", 2);
        assert_eq!(c.len(), 2);
        assert_eq!(c[1].source, SourceId { document: 2, line: 3 });
    }

    #[test]
    fn nfc_applied_on_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.txt");
        fs::write(&path, "e\u{301}\n").unwrap();
        assert_eq!(read_text(&path).unwrap(), "\u{e9}\n");
    }

    #[test]
    fn eval_outputs() {
        let r = EvalResult {
            k: 2,
            precision_at_k: 61.0,
            nia_at_k: None,
            coverage: 0.5,
            silver_words: 2,
            words_correct: 1,
            words_covered: 1,
            non_identical_predictions: 0,
            non_identical_correct: 0,
        };
        let json: serde_json::Value = serde_json::from_str(&eval_to_json(std::slice::from_ref(&r))).unwrap();
        assert_eq!(json[0]["k"], 2);
        assert!(json[0]["nia_at_k"].is_null());
        let table = eval_table("basic", &[r]);
        assert_eq!(table.lines().count(), 2);
        assert!(table.lines().nth(1).unwrap().contains("61.00"));
    }
}
