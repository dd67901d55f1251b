//! Factored parallel corpora and dictionary injection.
//!
//! The format is two UTF-8 files, one sentence per line, LF endings,
//! tokens separated by one space, factors by `|`. Lines are kept verbatim,
//! so emitting a parsed corpus gives back the input bytes.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::{strip_to_surface, DictEntry, WordFormDictionary};
use crate::exec::Exec;
use crate::token::{join_line, FactoredToken};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("source has {source_lines} lines but target has {target_lines}")]
    LineCountMismatch { source_lines: usize, target_lines: usize },
    #[error("{side} line {line}, token {column}: {found} factors, expected {expected}")]
    RaggedFactorWidth {
        side: Side,
        line: usize,
        column: usize,
        found: usize,
        expected: usize,
    },
    #[error("{side} line {line}, token {column}: {message}")]
    MalformedToken {
        side: Side,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{side} line {line}: {message}")]
    MalformedLine { side: Side, line: usize, message: String },
    #[error("{side} side: corpus tokens have {corpus} factors, dictionary tokens {dictionary}")]
    WidthIncompatible {
        side: Side,
        corpus: usize,
        dictionary: usize,
    },
}

impl CorpusError {
    /// 1-based line the error refers to, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            CorpusError::RaggedFactorWidth { line, .. }
            | CorpusError::MalformedToken { line, .. }
            | CorpusError::MalformedLine { line, .. } => Some(*line),
            _ => None,
        }
    }

    pub fn side(&self) -> Option<Side> {
        match self {
            CorpusError::RaggedFactorWidth { side, .. }
            | CorpusError::MalformedToken { side, .. }
            | CorpusError::MalformedLine { side, .. }
            | CorpusError::WidthIncompatible { side, .. } => Some(*side),
            CorpusError::LineCountMismatch { .. } => None,
        }
    }
}

pub type Line = Vec<FactoredToken>;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParallelCorpus {
    pub pairs: Vec<(Line, Line)>,
}

impl ParallelCorpus {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn side(&self, side: Side) -> impl Iterator<Item = &Line> {
        self.pairs.iter().map(move |(s, t)| match side {
            Side::Source => s,
            Side::Target => t,
        })
    }

    pub fn tokens(&self, side: Side) -> impl Iterator<Item = &FactoredToken> {
        self.side(side).flatten()
    }

    /// Factor width of the first token on `side`, or `None` when that side
    /// has no tokens.
    pub fn width(&self, side: Side) -> Option<usize> {
        self.tokens(side).next().map(FactoredToken::width)
    }

    /// The source and target text, one line per pair.
    pub fn to_strings(&self) -> (String, String) {
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        emit_factored_corpus(self, &mut src, &mut tgt).expect("writing to memory cannot fail");
        (
            String::from_utf8(src).expect("tokens are UTF-8"),
            String::from_utf8(tgt).expect("tokens are UTF-8"),
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Pad narrower tokens with `null` instead of rejecting ragged input.
    pub auto_normalize: bool,
    pub exec: Exec,
}

fn split_lines(text: &str, side: Side) -> Result<Vec<&str>, CorpusError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let body = text.strip_suffix('\n').ok_or(CorpusError::MalformedLine {
        side,
        line: text.split('\n').count(),
        message: "missing final newline".into(),
    })?;
    Ok(body.split('\n').collect())
}

fn parse_line(raw: &str, side: Side, line: usize) -> Result<Line, CorpusError> {
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    if raw.ends_with('\r') {
        return Err(CorpusError::MalformedLine {
            side,
            line,
            message: "CR line ending".into(),
        });
    }
    raw.split(' ')
        .enumerate()
        .map(|(i, t)| {
            FactoredToken::parse(t).map_err(|e| CorpusError::MalformedToken {
                side,
                line,
                column: i + 1,
                message: if t.is_empty() {
                    "empty token (leading, trailing or repeated space)".into()
                } else {
                    e.to_string()
                },
            })
        })
        .collect()
}

fn parse_side(text: &str, side: Side, opts: ParseOptions) -> Result<Vec<Line>, CorpusError> {
    let raw = split_lines(text, side)?;
    opts.exec
        .map_indexed(&raw, |i, l| parse_line(l, side, i + 1))
        .into_iter()
        .collect()
}

fn normalize_side(lines: &mut [Line], side: Side, auto_normalize: bool) -> Result<bool, CorpusError> {
    let Some(expected) = lines.iter().flatten().next().map(FactoredToken::width) else {
        return Ok(false);
    };
    let max = lines.iter().flatten().map(FactoredToken::width).max().unwrap_or(expected);
    if !auto_normalize {
        for (li, l) in lines.iter().enumerate() {
            for (ti, t) in l.iter().enumerate() {
                if t.width() != expected {
                    return Err(CorpusError::RaggedFactorWidth {
                        side,
                        line: li + 1,
                        column: ti + 1,
                        found: t.width(),
                        expected,
                    });
                }
            }
        }
        return Ok(false);
    }
    let mut changed = false;
    for t in lines.iter_mut().flatten() {
        if t.width() < max {
            *t = t.padded(max);
            changed = true;
        }
    }
    Ok(changed)
}

/// Parses a source and a target file into a corpus. The first error in
/// file order is returned.
pub fn parse_factored_corpus(source: &str, target: &str, opts: ParseOptions) -> Result<ParallelCorpus, CorpusError> {
    let mut src = parse_side(source, Side::Source, opts)?;
    let mut tgt = parse_side(target, Side::Target, opts)?;
    if src.len() != tgt.len() {
        return Err(CorpusError::LineCountMismatch {
            source_lines: src.len(),
            target_lines: tgt.len(),
        });
    }
    normalize_side(&mut src, Side::Source, opts.auto_normalize)?;
    normalize_side(&mut tgt, Side::Target, opts.auto_normalize)?;
    Ok(ParallelCorpus {
        pairs: src.into_iter().zip(tgt).collect(),
    })
}

pub fn emit_factored_corpus(corpus: &ParallelCorpus, source: &mut impl Write, target: &mut impl Write) -> io::Result<()> {
    for (s, t) in &corpus.pairs {
        writeln!(source, "{}", join_line(s))?;
        writeln!(target, "{}", join_line(t))?;
    }
    Ok(())
}

/// A token whose width differs from the first token on its side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaggedToken {
    pub side: Side,
    pub line: usize,
    pub column: usize,
    pub width: usize,
    pub expected: usize,
}

/// Every ragged-width token in the corpus, in file order.
pub fn ragged_tokens(corpus: &ParallelCorpus) -> Vec<RaggedToken> {
    let mut out = Vec::new();
    for side in [Side::Source, Side::Target] {
        let Some(expected) = corpus.width(side) else { continue };
        for (li, l) in corpus.side(side).enumerate() {
            for (ti, t) in l.iter().enumerate() {
                if t.width() != expected {
                    out.push(RaggedToken {
                        side,
                        line: li + 1,
                        column: ti + 1,
                        width: t.width(),
                        expected,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InjectMode {
    #[default]
    Factored,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InjectionReport {
    pub entries_offered: usize,
    pub entries_added: usize,
    pub duplicates_skipped: usize,
    pub normalization_applied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InjectOptions {
    pub mode: InjectMode,
    /// Pad dictionary tokens that are narrower than the corpus tokens.
    pub normalize: bool,
}

fn fit_width(
    tokens: &[FactoredToken],
    side: Side,
    corpus_width: Option<usize>,
    normalize: bool,
) -> Result<(Vec<FactoredToken>, bool), CorpusError> {
    let Some(cw) = corpus_width else {
        return Ok((tokens.to_vec(), false));
    };
    let mut padded = false;
    let out = tokens
        .iter()
        .map(|t| match t.width() {
            w if w == cw => Ok(t.clone()),
            w if w < cw && normalize => {
                padded = true;
                Ok(t.padded(cw))
            }
            w => Err(CorpusError::WidthIncompatible {
                side,
                corpus: cw,
                dictionary: w,
            }),
        })
        .collect::<Result<_, _>>()?;
    Ok((out, padded))
}

/// Appends each dictionary entry as a one-entry sentence pair after the
/// existing lines. An entry whose rendered source and target lines already
/// form a pair in the corpus is skipped.
pub fn inject(
    corpus: &ParallelCorpus,
    dict: &WordFormDictionary,
    opts: InjectOptions,
) -> Result<(ParallelCorpus, InjectionReport), CorpusError> {
    let stripped;
    let dict = match opts.mode {
        InjectMode::Surface if dict.scheme.source_width() > 0 || dict.scheme.target_width() > 0 => {
            stripped = strip_to_surface(dict);
            &stripped
        }
        _ => dict,
    };
    let mut src_width = corpus.width(Side::Source);
    let mut tgt_width = corpus.width(Side::Target);

    let mut seen: HashSet<(String, String)> = corpus
        .pairs
        .iter()
        .map(|(s, t)| (join_line(s), join_line(t)))
        .collect();
    let mut out = corpus.clone();
    let mut report = InjectionReport {
        entries_offered: dict.len(),
        ..Default::default()
    };
    for DictEntry { source, target } in dict.entries() {
        let (source, ps) = fit_width(source, Side::Source, src_width, opts.normalize)?;
        let (target, pt) = fit_width(std::slice::from_ref(target), Side::Target, tgt_width, opts.normalize)?;
        src_width = src_width.or(source.first().map(FactoredToken::width));
        tgt_width = tgt_width.or(target.first().map(FactoredToken::width));
        report.normalization_applied |= ps || pt;
        if seen.insert((join_line(&source), join_line(&target))) {
            out.pairs.push((source, target));
            report.entries_added += 1;
        } else {
            report.duplicates_skipped += 1;
        }
    }
    Ok((out, report))
}
