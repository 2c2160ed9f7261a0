//! Test-only oracles, independent of the library's DP.

#![allow(dead_code)]

use std::collections::HashMap;

use lexforge_core::{EditKind, EditOp, Symbol};

/// Edit distance by memoized recursion on suffixes.
pub fn brute_distance(a: &[char], b: &[char]) -> usize {
    fn go(a: &[char], b: &[char], memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if a.is_empty() {
            return b.len();
        }
        if b.is_empty() {
            return a.len();
        }
        let key = (a.len(), b.len());
        if let Some(&d) = memo.get(&key) {
            return d;
        }
        let d = if a[0] == b[0] {
            go(&a[1..], &b[1..], memo)
        } else {
            1 + go(&a[1..], &b[1..], memo)
                .min(go(&a[1..], b, memo))
                .min(go(a, &b[1..], memo))
        };
        memo.insert(key, d);
        d
    }
    go(a, b, &mut HashMap::new())
}

/// Applies a script to `a`, checking each op's shape; returns the result.
pub fn apply_script(a: &str, ops: &[EditOp]) -> Result<String, String> {
    let mut src = a.chars();
    let mut out = String::new();
    for op in ops {
        match (op.kind, op.source, op.target) {
            (EditKind::Retain, Symbol::Char(x), Symbol::Char(y)) if x == y => {
                (src.next() == Some(x)).then_some(()).ok_or("retain mismatch")?;
                out.push(y);
            }
            (EditKind::Substitute, Symbol::Char(x), Symbol::Char(y)) if x != y => {
                (src.next() == Some(x)).then_some(()).ok_or("substitute mismatch")?;
                out.push(y);
            }
            (EditKind::Delete, Symbol::Char(x), Symbol::Null) => {
                (src.next() == Some(x)).then_some(()).ok_or("delete mismatch")?;
            }
            (EditKind::Insert, Symbol::Null, Symbol::Char(y)) => out.push(y),
            other => return Err(format!("malformed op {other:?}")),
        }
    }
    if src.next().is_some() {
        return Err("script leaves source characters unconsumed".into());
    }
    Ok(out)
}

/// Every word over `alphabet` with length `0..=max_len`.
pub fn all_words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut words = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &c in alphabet {
                let mut x = w.clone();
                x.push(c);
                next.push(x);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    words
}
