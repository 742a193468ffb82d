//! Flat `key = value` text with `#` comments.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub(crate) struct FlatConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl FlatConfig {
    pub(crate) fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                msg: format!("expected `key = value`, got {line:?}"),
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(Error::Config {
                    line: line_no,
                    msg: "empty key".into(),
                });
            }
            if entries
                .insert(key.to_string(), (line_no, value.trim().to_string()))
                .is_some()
            {
                return Err(Error::Config {
                    line: line_no,
                    msg: format!("duplicate key {key:?}"),
                });
            }
        }
        Ok(FlatConfig { entries })
    }

    /// Removes and returns a raw value.
    pub(crate) fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    pub(crate) fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key).map(|(line, v)| parse_f64(line, key, &v)).transpose()
    }

    pub(crate) fn take_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.take(key)
            .map(|(line, v)| v.split(',').map(|item| parse_f64(line, key, item.trim())).collect())
            .transpose()
    }

    /// Fails on the first key nobody asked for.
    pub(crate) fn finish(self) -> Result<()> {
        match self.entries.into_iter().next() {
            Some((key, (line, _))) => Err(Error::Config {
                line,
                msg: format!("unknown key {key:?}"),
            }),
            None => Ok(()),
        }
    }
}

pub(crate) fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    value.parse::<f64>().map_err(|_| Error::Config {
        line,
        msg: format!("{key}: {value:?} is not a number"),
    })
}
