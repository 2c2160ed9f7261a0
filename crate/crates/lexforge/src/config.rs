//! `key = value` run configuration files. Keys are the long flag names
//! without the leading dashes; `#` starts a comment. Command-line flags
//! override file values, which override built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formats::read_text;

const KNOWN_KEYS: &[&str] = &[
    "corpus",
    "hrl-vocab",
    "vocab-min-freq",
    "oracle-url",
    "mock-table",
    "reranker",
    "threshold",
    "passes",
    "top-k",
    "batch-size",
    "freeze-null",
    "path-mode",
    "seed",
    "early-stop",
    "retries",
    "out-lexicon",
    "out-report",
    "out-rulebook",
    "lexicon-top-k",
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let key = key.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("line {}: unknown key {key:?}", i + 1)));
            }
            let value = value.trim().trim_matches('"').to_string();
            values.insert(key, value);
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::Config(format!("{key} = {v:?}: {e}")))
            })
            .transpose()
    }

    pub fn flag(&self, key: &str) -> Result<Option<bool>> {
        match self.raw(key) {
            None => Ok(None),
            Some("true" | "yes" | "1" | "on") => Ok(Some(true)),
            Some("false" | "no" | "0" | "off") => Ok(Some(false)),
            Some(v) => Err(Error::Config(format!("{key} = {v:?} is not a boolean"))),
        }
    }
}
