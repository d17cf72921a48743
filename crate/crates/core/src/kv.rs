//! `key = value` text files with `#` comments, shared by the scenario
//! manifest, the expectation lists and the simulation config.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Entry<'a> {
    /// 1-based line number in the source text.
    pub line: usize,
    pub key: &'a str,
    pub value: &'a str,
}

pub(crate) fn parse(text: &str) -> Result<Vec<Entry<'_>>> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::MalformedKeyValue {
                line,
                reason: format!("expected `key = value`, found `{content}`"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::MalformedKeyValue {
                line,
                reason: "empty key".into(),
            });
        }
        entries.push(Entry {
            line,
            key,
            value: value.trim(),
        });
    }
    Ok(entries)
}
