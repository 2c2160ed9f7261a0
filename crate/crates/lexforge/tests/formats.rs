use std::path::Path;

use lexforge::formats::{lexicon_to_tsv, parse_lexicon, parse_rulebook, rulebook_to_tsv, LEXICON_HEADER};
use lexforge_core::orthography::RulebookConfig;
use lexforge_core::{EditOp, Lexicon, RulebookMatrix, Symbol};
use proptest::prelude::*;

// similarities as they arise in practice: 1 - d/L for short words
fn similarity() -> impl Strategy<Value = f64> {
    (1u32..=12).prop_flat_map(|len| (0..len).prop_map(move |d| 1.0 - f64::from(d) / f64::from(len)))
}

proptest! {
    #[test]
    fn export_import_keeps_best_equivalents(updates in proptest::collection::vec(("[a-dक]{1,3}", "[a-dख]{1,3}", similarity(), 1u32..4), 0..40)) {
        let mut lex = Lexicon::new();
        for (s, t, sim, pass) in &updates {
            lex.update(s, t, *sim, *pass).unwrap();
        }
        let tsv = lexicon_to_tsv(&lex, usize::MAX);
        let back = parse_lexicon(&tsv, Path::new("mem")).unwrap();
        prop_assert_eq!(back.len(), lex.len());
        for e in lex.entries() {
            prop_assert_eq!(back.best_equivalent(&e.source), lex.best_equivalent(&e.source));
        }
        prop_assert_eq!(lexicon_to_tsv(&back, usize::MAX), tsv);
    }
}

#[test]
fn empty_lexicon_exports_header_only() {
    assert_eq!(lexicon_to_tsv(&Lexicon::new(), 3), format!("{LEXICON_HEADER}\n"));
}

#[test]
fn top_k_caps_rows_per_source() {
    let mut lex = Lexicon::new();
    lex.update("bhail", "hua", 0.6, 1).unwrap();
    assert_eq!(lexicon_to_tsv(&lex, 2).lines().count(), 2);
    lex.update("bhail", "bhaya", 0.8, 2).unwrap();
    lex.update("bhail", "gaya", 0.7, 2).unwrap();
    let tsv = lexicon_to_tsv(&lex, 2);
    assert_eq!(tsv, format!("{LEXICON_HEADER}\nbhail\tbhaya\t0.800000\t2\nbhail\tgaya\t0.700000\t2\n"));
}

#[test]
fn rulebook_dump_parses_back_row_stochastic() {
    let mut m = RulebookMatrix::new(['a', 'b'], ['a', 'b'], RulebookConfig::default()).unwrap();
    m.maximization_update(&[EditOp::substitute('a', 'b'), EditOp::delete('b'), EditOp::insert('a')]);
    let rows = parse_rulebook(&rulebook_to_tsv(&m), Path::new("mem")).unwrap();
    assert_eq!(rows.len(), 3 * 3);
    assert!(rows.iter().any(|r| r.source == Symbol::Null));
    for src in [Symbol::Char('a'), Symbol::Char('b'), Symbol::Null] {
        let sum: f64 = rows.iter().filter(|r| r.source == src).map(|r| r.probability).sum();
        assert!((sum - 1.0).abs() < 1e-8, "{src}: {sum}");
    }
}
