//! Word-form dictionaries: every inflected form of every lexicon entry,
//! paired with its English factored source.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::features::{Case, Number, Person, TamSlot};
use crate::noun::{noun_paradigm, NounLexEntry, SuffixTable};
use crate::source::{english_noun_surface, english_verb_surface, EnglishVerbFactors};
use crate::token::{join_line, FactoredToken, TokenError, NULL_FACTOR};
use crate::verb::{verb_paradigm, VerbLexEntry, VerbSuffixTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DictError {
    #[error("scheme step names unknown {side} factor {name:?}")]
    UnknownFactor { side: &'static str, name: String },
    #[error("{side} token {token:?} has {found} factors, scheme expects {expected}")]
    WidthMismatch {
        side: &'static str,
        token: String,
        found: usize,
        expected: usize,
    },
    #[error("multiword source {0:?} in a factored dictionary")]
    PhraseSource(String),
    #[error("empty source phrase")]
    EmptySource,
    #[error("token {token:?} has {found} factors, more than {width}")]
    TokenTooWide { token: String, found: usize, width: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// `from` factors map to `to` factors. Names refer to positions in the
/// side's factor list, where position 0 is the surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorStep {
    pub from: Vec<String>,
    pub to: Vec<String>,
}

impl FactorStep {
    fn new(from: &[&str], to: &[&str]) -> Self {
        FactorStep {
            from: from.iter().map(|s| s.to_string()).collect(),
            to: to.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for FactorStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from.join("|"), self.to.join("|"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorScheme {
    pub name: String,
    pub source_factors: Vec<String>,
    pub target_factors: Vec<String>,
    pub translation_steps: Vec<FactorStep>,
    pub generation_steps: Vec<FactorStep>,
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

impl FactorScheme {
    fn factored(name: &str, source: &[&str]) -> Self {
        FactorScheme {
            name: name.into(),
            source_factors: names(source),
            target_factors: names(&["surface", "root", "suffix"]),
            translation_steps: vec![FactorStep::new(source, &["root", "suffix"])],
            generation_steps: vec![FactorStep::new(&["root", "suffix"], &["surface"])],
        }
    }

    /// `root|number|case` → `surface|root|suffix`.
    pub fn noun() -> Self {
        Self::factored("noun", &["root", "number", "case"])
    }

    /// `root|number|person|tam` → `surface|root|suffix`.
    pub fn verb() -> Self {
        Self::factored("verb", &["root", "number", "person", "tam"])
    }

    /// Nouns and verbs in one corpus. Noun sources carry `null` for TAM.
    pub fn combined() -> Self {
        Self::factored("combined", &["root", "number", "case_or_person", "tam"])
    }

    /// Plain words on both sides.
    pub fn surface() -> Self {
        FactorScheme {
            name: "surface".into(),
            source_factors: names(&["surface"]),
            target_factors: names(&["surface"]),
            translation_steps: vec![FactorStep::new(&["surface"], &["surface"])],
            generation_steps: Vec::new(),
        }
    }

    /// A scheme with anonymous factors, for corpora of unknown layout:
    /// everything on the source translates to the target factors, and the
    /// target factors generate the surface.
    pub fn generic(source_width: usize, target_width: usize) -> Self {
        let side = |w: usize| -> Vec<String> {
            std::iter::once("surface".to_string())
                .chain((1..=w).map(|i| format!("f{i}")))
                .collect()
        };
        let source = side(source_width);
        let target = side(target_width);
        let target_factors: Vec<String> = if target_width == 0 {
            target.clone()
        } else {
            target[1..].to_vec()
        };
        let generation_steps = if target_width == 0 {
            Vec::new()
        } else {
            vec![FactorStep {
                from: target_factors.clone(),
                to: vec!["surface".into()],
            }]
        };
        FactorScheme {
            name: "generic".into(),
            translation_steps: vec![FactorStep {
                from: source.clone(),
                to: target_factors,
            }],
            generation_steps,
            source_factors: source,
            target_factors: target,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Some(match name {
            "noun" => Self::noun(),
            "verb" => Self::verb(),
            "combined" => Self::combined(),
            "surface" => Self::surface(),
            _ => return None,
        })
    }

    /// Factor count of source tokens, not counting the surface.
    pub fn source_width(&self) -> usize {
        self.source_factors.len().saturating_sub(1)
    }

    pub fn target_width(&self) -> usize {
        self.target_factors.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<(), DictError> {
        let check = |side: &'static str, list: &[String], step_names: &[String]| {
            step_names.iter().try_for_each(|n| {
                if list.contains(n) {
                    Ok(())
                } else {
                    Err(DictError::UnknownFactor { side, name: n.clone() })
                }
            })
        };
        for s in &self.translation_steps {
            check("source", &self.source_factors, &s.from)?;
            check("target", &self.target_factors, &s.to)?;
        }
        for s in &self.generation_steps {
            check("target", &self.target_factors, &s.from)?;
            check("target", &self.target_factors, &s.to)?;
        }
        Ok(())
    }

    /// Positions of `names` in the source (`target == false`) or target list.
    pub fn positions(&self, target: bool, names: &[String]) -> Vec<usize> {
        let list = if target { &self.target_factors } else { &self.source_factors };
        names
            .iter()
            .filter_map(|n| list.iter().position(|x| x == n))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DictEntry {
    /// One token, except for surface dictionaries where an English form
    /// such as `will walk` spans several words.
    pub source: Vec<FactoredToken>,
    pub target: FactoredToken,
}

impl DictEntry {
    pub fn new(source: FactoredToken, target: FactoredToken) -> Self {
        DictEntry {
            source: vec![source],
            target,
        }
    }

    pub fn source_line(&self) -> String {
        join_line(&self.source)
    }
}

impl fmt::Display for DictEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.source_line(), self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordFormDictionary {
    pub scheme: FactorScheme,
    entries: Vec<DictEntry>,
    #[serde(skip)]
    seen: HashSet<DictEntry>,
}

impl WordFormDictionary {
    pub fn new(scheme: FactorScheme) -> Self {
        WordFormDictionary {
            scheme,
            entries: Vec::new(),
            seen: HashSet::new(),
        }
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn validate_entry(&self, entry: &DictEntry) -> Result<(), DictError> {
        let sw = self.scheme.source_width();
        let tw = self.scheme.target_width();
        if entry.source.is_empty() {
            return Err(DictError::EmptySource);
        }
        if sw > 0 && entry.source.len() > 1 {
            return Err(DictError::PhraseSource(entry.source_line()));
        }
        for t in &entry.source {
            if t.width() != sw {
                return Err(DictError::WidthMismatch {
                    side: "source",
                    token: t.to_string(),
                    found: t.width(),
                    expected: sw,
                });
            }
        }
        if entry.target.width() != tw {
            return Err(DictError::WidthMismatch {
                side: "target",
                token: entry.target.to_string(),
                found: entry.target.width(),
                expected: tw,
            });
        }
        Ok(())
    }

    /// Adds an entry unless an identical one is present. Returns whether it
    /// was added.
    pub fn push(&mut self, entry: DictEntry) -> Result<bool, DictError> {
        self.validate_entry(&entry)?;
        if !self.seen.insert(entry.clone()) {
            return Ok(false);
        }
        self.entries.push(entry);
        Ok(true)
    }

    /// One entry per line: source, tab, target.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, scheme: FactorScheme) -> Result<Self, DictError> {
        scheme.validate()?;
        let mut dict = WordFormDictionary::new(scheme);
        for (idx, line) in text.lines().enumerate() {
            let entry = parse_entry_line(line).map_err(|message| DictError::Parse { line: idx + 1, message })?;
            dict.push(entry).map_err(|e| DictError::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
        }
        Ok(dict)
    }

    /// Parses a dictionary file and picks the scheme from its token widths.
    pub fn parse_inferred(text: &str) -> Result<Self, DictError> {
        let entries: Vec<DictEntry> = text
            .lines()
            .enumerate()
            .map(|(idx, line)| parse_entry_line(line).map_err(|message| DictError::Parse { line: idx + 1, message }))
            .collect::<Result<_, _>>()?;
        let scheme = match entries.first() {
            None => FactorScheme::surface(),
            Some(first) => {
                let sw = first.source[0].width();
                let tw = first.target.width();
                let noun_padded = entries.iter().any(|e| e.source[0].piece(3) == Some(NULL_FACTOR));
                match (sw, tw) {
                    (0, 0) => FactorScheme::surface(),
                    (2, 2) => FactorScheme::noun(),
                    (3, 2) if noun_padded => FactorScheme::combined(),
                    (3, 2) => FactorScheme::verb(),
                    (s, t) => FactorScheme::generic(s, t),
                }
            }
        };
        let mut dict = WordFormDictionary::new(scheme);
        for (idx, e) in entries.into_iter().enumerate() {
            dict.push(e).map_err(|e| DictError::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
        }
        Ok(dict)
    }
}

fn parse_entry_line(line: &str) -> Result<DictEntry, String> {
    let (src, tgt) = line
        .split_once('\t')
        .ok_or_else(|| "expected source and target separated by a tab".to_string())?;
    let tok = |s: &str| FactoredToken::parse(s).map_err(|e: TokenError| e.to_string());
    let source: Vec<FactoredToken> = src.split(' ').map(tok).collect::<Result<_, _>>()?;
    Ok(DictEntry {
        source,
        target: tok(tgt)?,
    })
}

/// A lexicon row that could not be turned into forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildFailure {
    /// 0-based lexicon index.
    pub index: usize,
    pub entry: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictBuild {
    pub dictionary: WordFormDictionary,
    pub failures: Vec<BuildFailure>,
}

fn assemble(scheme: FactorScheme, rows: Vec<Result<Vec<DictEntry>, BuildFailure>>) -> DictBuild {
    let mut dictionary = WordFormDictionary::new(scheme);
    let mut failures = Vec::new();
    for row in rows {
        match row {
            Ok(entries) => {
                for e in entries {
                    // builders emit tokens matching their own scheme
                    dictionary.push(e).expect("builder entry fits its scheme");
                }
            }
            Err(f) => failures.push(f),
        }
    }
    DictBuild { dictionary, failures }
}

fn tok(surface: &str, factors: &[&str]) -> Result<FactoredToken, String> {
    FactoredToken::new(surface, factors.iter().copied()).map_err(|e| e.to_string())
}

fn noun_entries(english: &str, entry: &NounLexEntry, table: &SuffixTable, pad: bool) -> Result<Vec<DictEntry>, String> {
    let rows = noun_paradigm(entry, table).map_err(|e| e.to_string())?;
    rows.iter()
        .map(|r| {
            let mut src = vec![r.number.factor(), r.case.factor()];
            if pad {
                src.push(NULL_FACTOR);
            }
            let suffix = r.suffix.as_deref().unwrap_or(NULL_FACTOR);
            Ok(DictEntry::new(
                tok(english, &src)?,
                tok(&r.surface, &[&entry.hindi_root, suffix])?,
            ))
        })
        .collect()
}

fn verb_entries(entry: &VerbLexEntry, table: &VerbSuffixTable) -> Result<Vec<DictEntry>, String> {
    if entry.english_root.is_empty() {
        return Err("verb has no English root".into());
    }
    let rows = verb_paradigm(entry, table).map_err(|e| e.to_string())?;
    rows.iter()
        .map(|r| {
            let f = &r.factors;
            let suffix = r.suffix.as_deref().unwrap_or(NULL_FACTOR);
            Ok(DictEntry::new(
                tok(&entry.english_root, &[f.number.factor(), f.person.factor(), f.tam.factor()])?,
                tok(&r.surface, &[&entry.hindi_root, suffix])?,
            ))
        })
        .collect()
}

/// Four entries per noun in paradigm order, lexicon order preserved.
pub fn build_noun_dict(lexicon: &[(String, NounLexEntry)], table: &SuffixTable, exec: Exec) -> DictBuild {
    build_noun_dict_with(lexicon, table, FactorScheme::noun(), exec)
}

fn build_noun_dict_with(
    lexicon: &[(String, NounLexEntry)],
    table: &SuffixTable,
    scheme: FactorScheme,
    exec: Exec,
) -> DictBuild {
    let pad = scheme.source_width() == 3;
    let rows = exec.map_indexed(lexicon, |index, (english, entry)| {
        noun_entries(english, entry, table, pad).map_err(|message| BuildFailure {
            index,
            entry: format!("{english}\t{}", entry.hindi_root),
            message,
        })
    });
    assemble(scheme, rows)
}

/// One entry per distinct (source, target) pair over the table's grid.
/// Feminine and masculine forms share a source, so a source tuple appears
/// once for each distinct gender form.
pub fn build_verb_dict(lexicon: &[VerbLexEntry], table: &VerbSuffixTable, exec: Exec) -> DictBuild {
    build_verb_dict_with(lexicon, table, FactorScheme::verb(), exec)
}

fn build_verb_dict_with(
    lexicon: &[VerbLexEntry],
    table: &VerbSuffixTable,
    scheme: FactorScheme,
    exec: Exec,
) -> DictBuild {
    let rows = exec.map_indexed(lexicon, |index, entry| {
        verb_entries(entry, table).map_err(|message| BuildFailure {
            index,
            entry: format!("{}\t{}", entry.english_root, entry.hindi_root),
            message,
        })
    });
    assemble(scheme, rows)
}

/// Nouns and verbs in one dictionary under [`FactorScheme::combined`].
pub fn build_combined_dict(
    nouns: &[(String, NounLexEntry)],
    noun_table: &SuffixTable,
    verbs: &[VerbLexEntry],
    verb_table: &VerbSuffixTable,
    exec: Exec,
) -> DictBuild {
    let n = build_noun_dict_with(nouns, noun_table, FactorScheme::combined(), exec);
    let v = build_verb_dict_with(verbs, verb_table, FactorScheme::combined(), exec);
    let mut dictionary = n.dictionary;
    for e in v.dictionary.entries {
        dictionary.push(e).expect("combined entries share one scheme");
    }
    let mut failures = n.failures;
    failures.extend(v.failures);
    DictBuild { dictionary, failures }
}

/// Pads every token with `null` factors to exactly `width`.
pub fn normalize_factors(tokens: &[FactoredToken], width: usize) -> Result<Vec<FactoredToken>, DictError> {
    tokens
        .iter()
        .map(|t| {
            if t.width() > width {
                Err(DictError::TokenTooWide {
                    token: t.to_string(),
                    found: t.width(),
                    width,
                })
            } else {
                Ok(t.padded(width))
            }
        })
        .collect()
}

/// English words for a factored source token, read off its factor values.
fn english_phrase(token: &FactoredToken) -> Vec<FactoredToken> {
    let root = token.surface();
    let f = token.factors();
    let get = |i: usize| f.get(i).map(String::as_str);
    let text = match (get(0).and_then(Number::from_factor), get(1), get(2)) {
        (Some(number), Some(p), Some(t)) if TamSlot::from_factor(t).is_some() => {
            let factors = EnglishVerbFactors {
                number,
                person: Person::from_factor(p).unwrap_or(Person::Third),
                tam: TamSlot::from_factor(t).unwrap_or(TamSlot::PresentHabitual),
            };
            english_verb_surface(root, &factors)
        }
        (Some(number), Some(c), _) if Case::from_factor(c).is_some() => english_noun_surface(root, number),
        _ => root.to_owned(),
    };
    text.split(' ')
        .filter(|w| !w.is_empty())
        .map(|w| FactoredToken::surface_only(w).expect("English forms contain no separator"))
        .collect()
}

/// Drops all factors, rewriting the English side to its inflected surface
/// words. Idempotent.
pub fn strip_to_surface(dict: &WordFormDictionary) -> WordFormDictionary {
    let mut out = WordFormDictionary::new(FactorScheme::surface());
    for e in &dict.entries {
        let source = if e.source.iter().all(|t| t.width() == 0) {
            e.source.clone()
        } else {
            e.source.iter().flat_map(english_phrase).collect()
        };
        let entry = DictEntry {
            source,
            target: e.target.without_factors(),
        };
        out.push(entry).expect("surface entries fit the surface scheme");
    }
    out
}
