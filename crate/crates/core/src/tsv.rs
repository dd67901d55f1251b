//! Line-oriented TSV reading for the data and lexicon files.
//!
//! Blank lines and lines starting with `#` are skipped. Line numbers are
//! 1-based and count every physical line.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TsvError {
    pub line: usize,
    pub message: String,
}

impl TsvError {
    pub fn new(line: usize, message: impl fmt::Display) -> Self {
        TsvError {
            line,
            message: message.to_string(),
        }
    }
}

/// A non-comment record with its 1-based line number.
pub struct Record<'a> {
    pub line: usize,
    pub fields: Vec<&'a str>,
}

impl<'a> Record<'a> {
    pub fn field(&self, idx: usize, name: &str) -> Result<&'a str, TsvError> {
        match self.fields.get(idx) {
            Some(f) if !f.is_empty() => Ok(f),
            _ => Err(TsvError::new(self.line, format!("missing {name} column"))),
        }
    }

    pub fn optional(&self, idx: usize) -> Option<&'a str> {
        self.fields.get(idx).copied().filter(|f| !f.is_empty())
    }

    pub fn error(&self, message: impl fmt::Display) -> TsvError {
        TsvError::new(self.line, message)
    }
}

pub fn records(text: &str) -> impl Iterator<Item = Record<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            return None;
        }
        Some(Record {
            line: i + 1,
            fields: line.split('\t').map(str::trim).collect(),
        })
    })
}
