//! Hindi noun classes, the class × number × case suffix grid, the joiner and
//! four-form paradigm generation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{Case, Gender, Number};
use crate::script::{self, EndingCategory, EndingRule, ScriptError};
use crate::tsv::{self, TsvError};

const DEFAULT_SUFFIX_TABLE: &str = include_str!("../data/noun_suffixes.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NounError {
    #[error("empty noun root")]
    EmptyRoot,
    #[error("suffix {suffix:?} is not used by class {class}")]
    IllegalSuffixForClass { class: NounClass, suffix: String },
    #[error("invalid noun root {root:?}: {reason}")]
    InvalidRoot { root: String, reason: String },
    #[error(transparent)]
    Script(#[from] ScriptError),
}

/// Inflection class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NounClass {
    A,
    B,
    C,
    D,
    E,
}

impl NounClass {
    pub const ALL: [NounClass; 5] = [
        NounClass::A,
        NounClass::B,
        NounClass::C,
        NounClass::D,
        NounClass::E,
    ];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for NounClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for NounClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(NounClass::A),
            "B" | "b" => Ok(NounClass::B),
            "C" | "c" => Ok(NounClass::C),
            "D" | "d" => Ok(NounClass::D),
            "E" | "e" => Ok(NounClass::E),
            _ => Err(format!("unknown noun class {s:?}")),
        }
    }
}

/// A Hindi noun with the features the classifier uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NounLexEntry {
    pub hindi_root: String,
    pub gender: Gender,
    pub countable: bool,
    pub class_override: Option<NounClass>,
}

impl NounLexEntry {
    /// A countable noun. The root is NFC-normalized and must be Devanagari.
    pub fn new(hindi_root: &str, gender: Gender) -> Result<Self, NounError> {
        let root = script::nfc(hindi_root.trim());
        if root.is_empty() {
            return Err(NounError::EmptyRoot);
        }
        script::validate_devanagari(&root).map_err(|e| NounError::InvalidRoot {
            root: root.clone(),
            reason: e.to_string(),
        })?;
        Ok(NounLexEntry {
            hindi_root: root,
            gender,
            countable: true,
            class_override: None,
        })
    }

    pub fn uncountable(mut self) -> Self {
        self.countable = false;
        self
    }

    pub fn with_class(mut self, class: NounClass) -> Self {
        self.class_override = Some(class);
        self
    }
}

/// Suffix per class, number and case. `None` is the null suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixTable {
    cells: [[[Option<String>; 2]; 2]; 5],
}

fn number_index(n: Number) -> usize {
    match n {
        Number::Singular => 0,
        Number::Plural => 1,
    }
}

fn case_index(c: Case) -> usize {
    match c {
        Case::Direct => 0,
        Case::Oblique => 1,
    }
}

impl SuffixTable {
    /// Parses the `class \t number \t case \t suffix` format. All 20 cells
    /// must be given exactly once; class A and every singular direct cell
    /// must be null.
    pub fn parse(text: &str) -> Result<Self, TsvError> {
        let mut seen = [[[false; 2]; 2]; 5];
        let mut cells: [[[Option<String>; 2]; 2]; 5] = Default::default();
        let mut last_line = 0;
        for rec in tsv::records(text) {
            last_line = rec.line;
            let class: NounClass = rec.field(0, "class")?.parse().map_err(|e| rec.error(e))?;
            let number = Number::from_code(rec.field(1, "number")?)
                .ok_or_else(|| rec.error(format!("bad number {:?}", rec.fields[1])))?;
            let case = Case::from_code(rec.field(2, "case")?)
                .ok_or_else(|| rec.error(format!("bad case {:?}", rec.fields[2])))?;
            let raw = rec.field(3, "suffix")?;
            let suffix = if raw == "-" {
                None
            } else {
                let s = script::nfc(raw);
                script::validate_devanagari(&s).map_err(|e| rec.error(e))?;
                Some(s)
            };
            let (c, n, k) = (class.index(), number_index(number), case_index(case));
            if seen[c][n][k] {
                return Err(rec.error(format!("duplicate cell {class} {number} {case}")));
            }
            if suffix.is_some() && class == NounClass::A {
                return Err(rec.error("class A never takes a suffix"));
            }
            if suffix.is_some() && number == Number::Singular && case == Case::Direct {
                return Err(rec.error("singular direct is always the bare root"));
            }
            seen[c][n][k] = true;
            cells[c][n][k] = suffix;
        }
        for class in NounClass::ALL {
            for number in Number::ALL {
                for case in Case::ALL {
                    if !seen[class.index()][number_index(*number)][case_index(*case)] {
                        return Err(TsvError::new(
                            last_line,
                            format!("missing cell {class} {number} {case}"),
                        ));
                    }
                }
            }
        }
        Ok(SuffixTable { cells })
    }

    /// The shipped Hindi table.
    pub fn hindi_default() -> Self {
        Self::parse(DEFAULT_SUFFIX_TABLE).expect("shipped noun suffix table is valid")
    }

    pub fn suffix(&self, class: NounClass, number: Number, case: Case) -> Option<&str> {
        self.cells[class.index()][number_index(number)][case_index(case)].as_deref()
    }

    /// Non-null suffixes used by a class.
    pub fn suffixes_for(&self, class: NounClass) -> impl Iterator<Item = &str> {
        self.cells[class.index()]
            .iter()
            .flatten()
            .filter_map(|s| s.as_deref())
    }

    /// Serializes back to the TSV format.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# class\tnumber\tcase\tsuffix\n");
        for class in NounClass::ALL {
            for number in Number::ALL {
                for case in Case::ALL {
                    let s = self.suffix(class, *number, *case).unwrap_or("-");
                    out.push_str(&format!("{class}\t{}\t{}\t{s}\n", number.code(), case.code()));
                }
            }
        }
        out
    }
}

impl Default for SuffixTable {
    fn default() -> Self {
        Self::hindi_default()
    }
}

/// Assigns the inflection class.
///
/// An explicit override wins, then uncountable nouns go to A. Otherwise
/// feminine ी/ि-final nouns are B, other feminines C, masculine ा-final D
/// and other masculines E.
pub fn classify_noun(entry: &NounLexEntry) -> Result<NounClass, NounError> {
    if entry.hindi_root.is_empty() {
        return Err(NounError::EmptyRoot);
    }
    if let Some(class) = entry.class_override {
        return Ok(class);
    }
    if !entry.countable {
        return Ok(NounClass::A);
    }
    let ending = script::ending_of(&entry.hindi_root)?;
    Ok(match (entry.gender, ending) {
        (Gender::Feminine, EndingCategory::LongIi | EndingCategory::ShortI) => NounClass::B,
        (Gender::Feminine, _) => NounClass::C,
        (Gender::Masculine, EndingCategory::LongA) => NounClass::D,
        (Gender::Masculine, _) => NounClass::E,
    })
}

pub fn noun_suffix(table: &SuffixTable, class: NounClass, number: Number, case: Case) -> Option<&str> {
    table.suffix(class, number, case)
}

/// Builds the surface form from root, class and suffix.
///
/// Rules, keyed on class and root ending:
///
/// * D, ा-final: the suffix vowel replaces ा (कुत्ता + ए → कुत्ते).
/// * B, ी-final: ी shortens to ि before the suffix (लड़की + याँ → लड़कियाँ).
/// * E, ी/ि-final: shorten, then the vowel suffix takes a य glide (माली + ओं → मालियों).
/// * C/E, ू-final: ू shortens to ु (बहू + एँ → बहुएँ).
/// * C/E, consonant-final: the suffix vowel becomes a vowel sign (रात + एँ → रातें).
/// * otherwise plain concatenation.
pub fn join_noun(
    table: &SuffixTable,
    root: &str,
    class: NounClass,
    suffix: Option<&str>,
) -> Result<String, NounError> {
    if root.is_empty() {
        return Err(NounError::EmptyRoot);
    }
    let Some(suffix) = suffix else {
        return Ok(root.to_owned());
    };
    if !table.suffixes_for(class).any(|s| s == suffix) {
        return Err(NounError::IllegalSuffixForClass {
            class,
            suffix: suffix.to_owned(),
        });
    }
    let ending = script::ending_of(root)?;
    let lead = script::leading_vowel(suffix);
    use EndingCategory as End;
    let surface = match (class, ending, lead) {
        (NounClass::D, End::LongA, Some((vowel, rest))) => {
            if root.trim_end_matches(script::is_nasal_mark).ends_with('ा') {
                script::attach_vowel(root, vowel, rest)?
            } else {
                script::replace_final_independent(root, vowel, rest)?
            }
        }
        (NounClass::B, End::LongIi, _) => {
            script::rewrite_ending(root, EndingRule::ShortenFinalVowel)? + suffix
        }
        (NounClass::E, End::LongIi | End::ShortI, Some((vowel, rest))) => {
            let glide = script::shorten_if_long(root) + "य";
            script::attach_vowel(&glide, vowel, rest)?
        }
        (NounClass::C | NounClass::E, End::LongUu, _) => {
            script::rewrite_ending(root, EndingRule::ShortenFinalVowel)? + suffix
        }
        (NounClass::C | NounClass::E, End::Consonant, Some((vowel, rest))) => {
            script::attach_vowel(root, vowel, rest)?
        }
        _ => format!("{root}{suffix}"),
    };
    Ok(script::nfc(&surface))
}

/// One cell of a noun paradigm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NounParadigmRow {
    pub number: Number,
    pub case: Case,
    pub suffix: Option<String>,
    pub surface: String,
}

/// Paradigm order: sg-dir, sg-obl, pl-dir, pl-obl.
pub const PARADIGM_CELLS: [(Number, Case); 4] = [
    (Number::Singular, Case::Direct),
    (Number::Singular, Case::Oblique),
    (Number::Plural, Case::Direct),
    (Number::Plural, Case::Oblique),
];

/// The four forms of a noun.
pub fn noun_paradigm(entry: &NounLexEntry, table: &SuffixTable) -> Result<Vec<NounParadigmRow>, NounError> {
    let class = classify_noun(entry)?;
    PARADIGM_CELLS
        .iter()
        .map(|&(number, case)| {
            let suffix = table.suffix(class, number, case);
            let surface = join_noun(table, &entry.hindi_root, class, suffix)?;
            Ok(NounParadigmRow {
                number,
                case,
                suffix: suffix.map(str::to_owned),
                surface,
            })
        })
        .collect()
}

fn parse_noun_fields(rec: &tsv::Record<'_>, offset: usize) -> Result<NounLexEntry, TsvError> {
    let root = rec.field(offset, "hindi_root")?;
    let gender_raw = rec
        .optional(offset + 1)
        .ok_or_else(|| rec.error(format!("noun {root:?} has no gender annotation")))?;
    let gender = Gender::from_code(gender_raw)
        .ok_or_else(|| rec.error(format!("bad gender {gender_raw:?} (expected m or f)")))?;
    let mut entry = NounLexEntry::new(root, gender).map_err(|e| rec.error(e))?;
    if let Some(c) = rec.optional(offset + 2) {
        entry.countable = match c {
            "1" => true,
            "0" => false,
            other => return Err(rec.error(format!("bad countable flag {other:?} (expected 1 or 0)"))),
        };
    }
    if let Some(c) = rec.optional(offset + 3) {
        entry.class_override = Some(c.parse().map_err(|e: String| rec.error(e))?);
    }
    Ok(entry)
}

/// Parses a noun lexicon: `hindi_root \t m|f [\t 1|0 [\t A-E]]`.
pub fn parse_noun_lexicon(text: &str) -> Result<Vec<NounLexEntry>, TsvError> {
    tsv::records(text).map(|rec| parse_noun_fields(&rec, 0)).collect()
}

/// Parses a bilingual noun lexicon:
/// `english_root \t hindi_root \t m|f [\t 1|0 [\t A-E]]`.
pub fn parse_bilingual_noun_lexicon(text: &str) -> Result<Vec<(String, NounLexEntry)>, TsvError> {
    tsv::records(text)
        .map(|rec| {
            let english = rec.field(0, "english_root")?;
            if english.contains('|') || english.contains(char::is_whitespace) {
                return Err(rec.error(format!("english root {english:?} contains '|' or whitespace")));
            }
            Ok((english.to_owned(), parse_noun_fields(&rec, 1)?))
        })
        .collect()
}
