//! Hindi verb paradigms over a gender/number/person/TAM grid.
//!
//! The suffix table is data: each TAM slot declares which of gender, number
//! and person its suffix agrees with, and a `-` in a feature column
//! collapses that dimension. The grid a paradigm covers is the product of
//! the declared values of every agreeing dimension, with collapsed
//! dimensions expanded to all their values. English carries no gender, so
//! every English (number, person, TAM) tuple appears once per Hindi gender.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{Gender, Number, Person, TamSlot};
use crate::script::{self, EndingCategory, ScriptError};
use crate::tsv::{self, TsvError};

const DEFAULT_VERB_TABLE: &str = include_str!("../data/verb_suffixes.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerbError {
    #[error("empty verb stem")]
    EmptyRoot,
    #[error("invalid verb stem {root:?}: {reason}")]
    InvalidRoot { root: String, reason: String },
    #[error("factors {0:?} fall outside the suffix table grid")]
    OutsideGrid(VerbFactors),
    #[error("no dimensions given")]
    EmptyDims,
    #[error("dimension {index} is {value}; every dimension must be at least 1")]
    NonPositiveDim { index: usize, value: i64 },
    #[error("paradigm size overflows u64")]
    Overflow,
    #[error(transparent)]
    Script(#[from] ScriptError),
}

/// The factors a Hindi verb form agrees with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VerbFactors {
    pub tam: TamSlot,
    pub gender: Gender,
    pub number: Number,
    pub person: Person,
}

impl VerbFactors {
    pub fn new(tam: TamSlot, gender: Gender, number: Number, person: Person) -> Self {
        VerbFactors {
            tam,
            gender,
            number,
            person,
        }
    }
}

/// A cell key with optional (collapsed) dimensions. Also used for
/// irregular-form overrides, where `None` matches any value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FactorPattern {
    pub tam: TamSlot,
    pub gender: Option<Gender>,
    pub number: Option<Number>,
    pub person: Option<Person>,
}

impl FactorPattern {
    pub fn matches(&self, f: &VerbFactors) -> bool {
        self.tam == f.tam
            && self.gender.is_none_or(|g| g == f.gender)
            && self.number.is_none_or(|n| n == f.number)
            && self.person.is_none_or(|p| p == f.person)
    }

    /// Parses `tam[:gender[:number[:person]]]`, `-` for any value.
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut parts = s.split(':');
        let tam_raw = parts.next().unwrap_or_default();
        let tam = TamSlot::from_code(tam_raw).ok_or_else(|| format!("unknown TAM slot {tam_raw:?}"))?;
        fn dim<T>(raw: Option<&str>, parse: fn(&str) -> Option<T>, what: &str) -> Result<Option<T>, String> {
            match raw {
                None | Some("-") | Some("") => Ok(None),
                Some(v) => parse(v).map(Some).ok_or_else(|| format!("bad {what} {v:?}")),
            }
        }
        let pattern = FactorPattern {
            tam,
            gender: dim(parts.next(), Gender::from_code, "gender")?,
            number: dim(parts.next(), Number::from_code, "number")?,
            person: dim(parts.next(), Person::from_code, "person")?,
        };
        if parts.next().is_some() {
            return Err(format!("too many fields in {s:?}"));
        }
        Ok(pattern)
    }
}

/// Which dimensions a TAM slot's suffix agrees with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    pub gender: bool,
    pub number: bool,
    pub person: bool,
}

impl Agreement {
    fn of(p: &FactorPattern) -> Self {
        Agreement {
            gender: p.gender.is_some(),
            number: p.number.is_some(),
            person: p.person.is_some(),
        }
    }

    fn collapse(&self, f: &VerbFactors) -> FactorPattern {
        FactorPattern {
            tam: f.tam,
            gender: self.gender.then_some(f.gender),
            number: self.number.then_some(f.number),
            person: self.person.then_some(f.person),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbSuffixTable {
    cells: BTreeMap<FactorPattern, Option<String>>,
    agreement: BTreeMap<TamSlot, Agreement>,
}

impl VerbSuffixTable {
    /// Parses `tam \t gender \t number \t person \t suffix`.
    ///
    /// Every line of one TAM slot must collapse the same dimensions, and the
    /// declared cells must form a full product over the declared values.
    pub fn parse(text: &str) -> Result<Self, TsvError> {
        let mut cells = BTreeMap::new();
        let mut agreement: BTreeMap<TamSlot, Agreement> = BTreeMap::new();
        let mut first_line: BTreeMap<TamSlot, usize> = BTreeMap::new();
        for rec in tsv::records(text) {
            let key = [0, 1, 2, 3]
                .iter()
                .map(|&i| rec.field(i, ["tam_slot", "gender", "number", "person"][i]))
                .collect::<Result<Vec<_>, _>>()?
                .join(":");
            let pattern = FactorPattern::parse(&key).map_err(|e| rec.error(e))?;
            let raw = rec.field(4, "suffix")?;
            let suffix = if raw == "-" {
                None
            } else {
                let s = script::nfc(raw);
                script::validate_devanagari(&s).map_err(|e| rec.error(e))?;
                Some(s)
            };
            let agr = Agreement::of(&pattern);
            match agreement.get(&pattern.tam) {
                Some(prev) if *prev != agr => {
                    return Err(rec.error(format!(
                        "{} collapses different dimensions than on line {}",
                        pattern.tam, first_line[&pattern.tam]
                    )))
                }
                Some(_) => {}
                None => {
                    agreement.insert(pattern.tam, agr);
                    first_line.insert(pattern.tam, rec.line);
                }
            }
            if cells.insert(pattern, suffix).is_some() {
                return Err(rec.error(format!("duplicate cell {key}")));
            }
        }
        let table = VerbSuffixTable { cells, agreement };
        for (&tam, &line) in &first_line {
            let keys: Vec<_> = table.cells.keys().filter(|k| k.tam == tam).collect();
            let declared = keys.len();
            let distinct = |get: fn(&FactorPattern) -> Option<u8>| {
                keys.iter().filter_map(|k| get(k)).collect::<BTreeSet<_>>().len().max(1)
            };
            let full = distinct(|k| k.gender.map(|g| g as u8))
                * distinct(|k| k.number.map(|n| n as u8))
                * distinct(|k| k.person.map(|p| p as u8));
            if declared != full {
                return Err(TsvError::new(
                    line,
                    format!("{tam} declares {declared} cells but its values span {full}"),
                ));
            }
        }
        Ok(table)
    }

    pub fn hindi_default() -> Self {
        Self::parse(DEFAULT_VERB_TABLE).expect("shipped verb suffix table is valid")
    }

    /// Values present per dimension for a slot; collapsed dimensions give
    /// every value.
    fn value_sets(&self, tam: TamSlot) -> (Vec<Gender>, Vec<Number>, Vec<Person>) {
        let keys: Vec<_> = self.cells.keys().filter(|k| k.tam == tam).collect();
        fn collect<T: Ord + Copy>(keys: &[&FactorPattern], get: fn(&FactorPattern) -> Option<T>, all: &[T]) -> Vec<T> {
            let present: BTreeSet<T> = keys.iter().filter_map(|k| get(k)).collect();
            if present.is_empty() {
                all.to_vec()
            } else {
                present.into_iter().collect()
            }
        }
        (
            collect(&keys, |k| k.gender, Gender::ALL),
            collect(&keys, |k| k.number, Number::ALL),
            collect(&keys, |k| k.person, Person::ALL),
        )
    }

    pub fn tam_slots(&self) -> impl Iterator<Item = TamSlot> + '_ {
        self.agreement.keys().copied()
    }

    pub fn agreement(&self, tam: TamSlot) -> Option<Agreement> {
        self.agreement.get(&tam).copied()
    }

    /// Every factor combination the table covers, in TAM, gender, number,
    /// person order.
    pub fn grid(&self) -> Vec<VerbFactors> {
        let mut out = Vec::new();
        for tam in self.tam_slots() {
            let (genders, numbers, persons) = self.value_sets(tam);
            for &g in &genders {
                for &n in &numbers {
                    for &p in &persons {
                        out.push(VerbFactors::new(tam, g, n, p));
                    }
                }
            }
        }
        out
    }

    /// Suffix for a factor combination, honoring collapsed dimensions.
    /// `Ok(None)` is the bare stem.
    pub fn suffix(&self, factors: &VerbFactors) -> Result<Option<&str>, VerbError> {
        let agr = self
            .agreement
            .get(&factors.tam)
            .ok_or(VerbError::OutsideGrid(*factors))?;
        self.cells
            .get(&agr.collapse(factors))
            .map(|s| s.as_deref())
            .ok_or(VerbError::OutsideGrid(*factors))
    }
}

impl Default for VerbSuffixTable {
    fn default() -> Self {
        Self::hindi_default()
    }
}

pub fn verb_suffix<'t>(table: &'t VerbSuffixTable, factors: &VerbFactors) -> Result<Option<&'t str>, VerbError> {
    table.suffix(factors)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VerbLexEntry {
    /// Stem: the infinitive without ना.
    pub hindi_root: String,
    pub english_root: String,
    /// Suppletive forms; the first matching pattern wins.
    pub irregular_forms: Vec<(FactorPattern, String)>,
}

impl VerbLexEntry {
    pub fn new(english_root: &str, hindi_root: &str) -> Result<Self, VerbError> {
        let root = script::nfc(hindi_root.trim());
        if root.is_empty() {
            return Err(VerbError::EmptyRoot);
        }
        script::validate_devanagari(&root).map_err(|e| VerbError::InvalidRoot {
            root: root.clone(),
            reason: e.to_string(),
        })?;
        Ok(VerbLexEntry {
            hindi_root: root,
            english_root: english_root.trim().to_owned(),
            irregular_forms: Vec::new(),
        })
    }

    pub fn with_irregular(mut self, pattern: FactorPattern, surface: &str) -> Self {
        self.irregular_forms.push((pattern, script::nfc(surface)));
        self
    }

    pub fn irregular_for(&self, factors: &VerbFactors) -> Option<&str> {
        self.irregular_forms
            .iter()
            .find(|(p, _)| p.matches(factors))
            .map(|(_, s)| s.as_str())
    }
}

/// Builds a verb surface from stem and suffix, keyed only on the stem
/// ending.
///
/// Consonant-final stems take a vowel suffix as a vowel sign (चल + आ →
/// चला). After ा/ो/े a य glide goes before आ (खा + आ → खाया). ी-final
/// stems shorten before a vowel, take the glide before आ and ओ (पी + आ →
/// पिया) and absorb a following ई (पी + ई → पी). ू-final stems shorten
/// (छू + आ → छुआ).
pub fn join_verb(root: &str, suffix: Option<&str>) -> Result<String, VerbError> {
    if root.is_empty() {
        return Err(VerbError::EmptyRoot);
    }
    let Some(suffix) = suffix else {
        return Ok(root.to_owned());
    };
    let Some((vowel, rest)) = script::leading_vowel(suffix) else {
        return Ok(script::nfc(&format!("{root}{suffix}")));
    };
    let plain = |stem: &str| format!("{stem}{vowel}{rest}");
    let surface = match script::ending_of(root)? {
        EndingCategory::Consonant => script::attach_vowel(root, vowel, rest)?,
        EndingCategory::LongIi => match vowel {
            'आ' | 'ओ' => script::attach_vowel(&(script::shorten_if_long(root) + "य"), vowel, rest)?,
            'ई' => script::attach_vowel(root, vowel, rest)?,
            _ => plain(&script::shorten_if_long(root)),
        },
        EndingCategory::LongUu => plain(&script::shorten_if_long(root)),
        EndingCategory::LongA | EndingCategory::O | EndingCategory::E if vowel == 'आ' => {
            script::attach_vowel(&format!("{root}य"), vowel, rest)?
        }
        _ => plain(root),
    };
    Ok(script::nfc(&surface))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbParadigmRow {
    pub factors: VerbFactors,
    pub suffix: Option<String>,
    pub surface: String,
}

/// One row per grid cell of the table.
pub fn verb_paradigm(entry: &VerbLexEntry, table: &VerbSuffixTable) -> Result<Vec<VerbParadigmRow>, VerbError> {
    if entry.hindi_root.is_empty() {
        return Err(VerbError::EmptyRoot);
    }
    table
        .grid()
        .into_iter()
        .map(|factors| {
            let suffix = table.suffix(&factors)?;
            let surface = match entry.irregular_for(&factors) {
                Some(s) => s.to_owned(),
                None => join_verb(&entry.hindi_root, suffix)?,
            };
            Ok(VerbParadigmRow {
                factors,
                suffix: suffix.map(str::to_owned),
                surface,
            })
        })
        .collect()
}

/// Number of forms spanned by independent dimensions of the given sizes.
pub fn paradigm_space(dims: &[i64]) -> Result<u64, VerbError> {
    if dims.is_empty() {
        return Err(VerbError::EmptyDims);
    }
    dims.iter().enumerate().try_fold(1u64, |acc, (index, &value)| {
        if value < 1 {
            return Err(VerbError::NonPositiveDim { index, value });
        }
        acc.checked_mul(value as u64).ok_or(VerbError::Overflow)
    })
}

/// Parses a verb lexicon: `english_root \t hindi_stem [\t pattern=surface ...]`
/// where a pattern is `tam[:gender[:number[:person]]]`.
pub fn parse_verb_lexicon(text: &str) -> Result<Vec<VerbLexEntry>, TsvError> {
    tsv::records(text)
        .map(|rec| {
            let english = rec.field(0, "english_root")?;
            if english.contains('|') || english.contains(char::is_whitespace) {
                return Err(rec.error(format!("english root {english:?} contains '|' or whitespace")));
            }
            let stem = rec.field(1, "hindi_stem")?;
            let mut entry = VerbLexEntry::new(english, stem).map_err(|e| rec.error(e))?;
            for raw in rec.fields.iter().skip(2).filter(|f| !f.is_empty()) {
                let (pat, surface) = raw
                    .split_once('=')
                    .ok_or_else(|| rec.error(format!("override {raw:?} is not pattern=surface")))?;
                let pattern = FactorPattern::parse(pat).map_err(|e| rec.error(e))?;
                let surface = script::nfc(surface.trim());
                script::validate_devanagari(&surface).map_err(|e| rec.error(e))?;
                entry.irregular_forms.push((pattern, surface));
            }
            Ok(entry)
        })
        .collect()
}
