//! Devanagari text utilities.
//!
//! Segmentation here is structural rather than grapheme-cluster based: an
//! orthographic syllable is a consonant (optionally with nukta), any number
//! of virama-joined consonants, an optional dependent vowel sign and any
//! trailing nasalization or visarga marks. An independent vowel plus its
//! marks is also a syllable. Everything else stands alone.
//!
//! The joiner rules in [`crate::noun`] and [`crate::verb`] only ever touch
//! the final syllable, and keying them on [`EndingCategory`] keeps them
//! independent of Unicode segmentation revisions.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

pub const NUKTA: char = '\u{093C}';
pub const VIRAMA: char = '\u{094D}';
pub const CANDRABINDU: char = '\u{0901}';
pub const ANUSVARA: char = '\u{0902}';
pub const VISARGA: char = '\u{0903}';
const INVERTED_CANDRABINDU: char = '\u{0900}';
const ZWNJ: char = '\u{200C}';
const ZWJ: char = '\u{200D}';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("empty input")]
    EmptyInput,
    #[error("non-Devanagari content {ch:?} (U+{code:04X}) at char {index} of {word:?}")]
    NonDevanagariContent {
        word: String,
        ch: char,
        code: u32,
        index: usize,
    },
    #[error("rule {rule} is not applicable to {word:?}")]
    RuleNotApplicable { word: String, rule: String },
    #[error("{0:?} is not a dependent vowel sign")]
    NotAVowelSign(char),
}

/// Classification of a word by its final vowel sign or final codepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EndingCategory {
    LongA,
    LongIi,
    ShortI,
    LongUu,
    ShortU,
    E,
    O,
    Consonant,
    Other,
}

impl fmt::Display for EndingCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EndingCategory::LongA => "LONG_A",
            EndingCategory::LongIi => "LONG_II",
            EndingCategory::ShortI => "SHORT_I",
            EndingCategory::LongUu => "LONG_UU",
            EndingCategory::ShortU => "SHORT_U",
            EndingCategory::E => "E",
            EndingCategory::O => "O",
            EndingCategory::Consonant => "CONSONANT",
            EndingCategory::Other => "OTHER",
        };
        f.write_str(s)
    }
}

/// One orthographic syllable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syllable(pub String);

impl Syllable {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A single-ending rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndingRule {
    /// Remove the final dependent vowel sign, leaving the inherent vowel.
    DropFinalVowel,
    /// ी → ि, ू → ु (and the independent ई → इ, ऊ → उ).
    ShortenFinalVowel,
    /// Replace the final vowel sign with the given sign, or attach it to a
    /// consonant-final word.
    ReplaceWith(char),
}

impl fmt::Display for EndingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndingRule::DropFinalVowel => f.write_str("DROP_FINAL_VOWEL"),
            EndingRule::ShortenFinalVowel => f.write_str("SHORTEN_FINAL_VOWEL"),
            EndingRule::ReplaceWith(c) => write!(f, "REPLACE_WITH({c})"),
        }
    }
}

pub fn is_consonant(c: char) -> bool {
    matches!(c, '\u{0915}'..='\u{0939}' | '\u{0958}'..='\u{095F}' | '\u{0978}'..='\u{097F}')
}

pub fn is_vowel_sign(c: char) -> bool {
    matches!(
        c,
        '\u{093A}' | '\u{093B}' | '\u{093E}'..='\u{094C}' | '\u{094E}' | '\u{094F}'
            | '\u{0955}'..='\u{0957}' | '\u{0962}' | '\u{0963}'
    )
}

pub fn is_independent_vowel(c: char) -> bool {
    matches!(c, '\u{0904}'..='\u{0914}' | '\u{0960}' | '\u{0961}' | '\u{0972}'..='\u{0977}')
}

pub fn is_nasal_mark(c: char) -> bool {
    matches!(c, INVERTED_CANDRABINDU | CANDRABINDU | ANUSVARA)
}

fn is_syllable_modifier(c: char) -> bool {
    is_nasal_mark(c) || c == VISARGA
}

fn is_devanagari(c: char) -> bool {
    ('\u{0900}'..='\u{097F}').contains(&c)
}

fn is_common_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2013}' | '\u{2014}' | '\u{2018}' | '\u{2019}' | '\u{201C}' | '\u{201D}' | '\u{2026}'
        )
}

/// Vowel signs whose glyph sits above the headline. A chandrabindu next to
/// one of these is written as an anusvara.
fn is_above_headline(sign: char) -> bool {
    matches!(sign, 'ि' | 'ी' | 'े' | 'ै' | 'ो' | 'ौ' | 'ॅ' | 'ॉ')
}

/// Dependent sign for an independent vowel.
pub fn matra_of(vowel: char) -> Option<char> {
    Some(match vowel {
        'आ' => 'ा',
        'इ' => 'ि',
        'ई' => 'ी',
        'उ' => 'ु',
        'ऊ' => 'ू',
        'ऋ' => 'ृ',
        'ए' => 'े',
        'ऐ' => 'ै',
        'ओ' => 'ो',
        'औ' => 'ौ',
        'ऍ' => 'ॅ',
        'ऑ' => 'ॉ',
        _ => return None,
    })
}

/// Independent vowel for a dependent sign.
pub fn independent_of(sign: char) -> Option<char> {
    Some(match sign {
        'ा' => 'आ',
        'ि' => 'इ',
        'ी' => 'ई',
        'ु' => 'उ',
        'ू' => 'ऊ',
        'ृ' => 'ऋ',
        'े' => 'ए',
        'ै' => 'ऐ',
        'ो' => 'ओ',
        'ौ' => 'औ',
        'ॅ' => 'ऍ',
        'ॉ' => 'ऑ',
        _ => return None,
    })
}

fn shortened(c: char) -> Option<char> {
    Some(match c {
        'ी' => 'ि',
        'ू' => 'ु',
        'ई' => 'इ',
        'ऊ' => 'उ',
        _ => return None,
    })
}

fn category_of_vowel(c: char) -> EndingCategory {
    match c {
        'ा' | 'आ' => EndingCategory::LongA,
        'ी' | 'ई' => EndingCategory::LongIi,
        'ि' | 'इ' => EndingCategory::ShortI,
        'ू' | 'ऊ' => EndingCategory::LongUu,
        'ु' | 'उ' => EndingCategory::ShortU,
        'े' | 'ए' => EndingCategory::E,
        'ो' | 'ओ' => EndingCategory::O,
        _ => EndingCategory::Other,
    }
}

/// NFC-normalize a string.
pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Checks that every codepoint is Devanagari, a joiner control or common
/// punctuation.
pub fn validate_devanagari(word: &str) -> Result<(), ScriptError> {
    if word.is_empty() {
        return Err(ScriptError::EmptyInput);
    }
    for (index, ch) in word.chars().enumerate() {
        if !(is_devanagari(ch) || ch == ZWJ || ch == ZWNJ || is_common_punctuation(ch)) {
            return Err(ScriptError::NonDevanagariContent {
                word: word.to_owned(),
                ch,
                code: ch as u32,
                index,
            });
        }
    }
    Ok(())
}

/// Splits a word into orthographic syllables. Lossless: the syllables
/// concatenate back to the input.
pub fn split_syllables(word: &str) -> Result<Vec<Syllable>, ScriptError> {
    validate_devanagari(word)?;
    let chars: Vec<char> = word.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let start = i;
        let c = chars[i];
        i += 1;
        if is_consonant(c) {
            if chars.get(i) == Some(&NUKTA) {
                i += 1;
            }
            while chars.get(i) == Some(&VIRAMA) {
                i += 1;
                while matches!(chars.get(i), Some(&ZWJ) | Some(&ZWNJ)) {
                    i += 1;
                }
                match chars.get(i) {
                    Some(&next) if is_consonant(next) => {
                        i += 1;
                        if chars.get(i) == Some(&NUKTA) {
                            i += 1;
                        }
                    }
                    _ => break,
                }
            }
            while chars.get(i).is_some_and(|&c| is_vowel_sign(c) || c == NUKTA) {
                i += 1;
            }
            while chars.get(i).is_some_and(|&c| is_syllable_modifier(c)) {
                i += 1;
            }
        } else if is_independent_vowel(c) {
            while chars.get(i).is_some_and(|&c| is_syllable_modifier(c)) {
                i += 1;
            }
        }
        out.push(Syllable(chars[start..i].iter().collect()));
    }
    Ok(out)
}

/// Splits off trailing nasalization marks.
fn split_nasal(word: &str) -> (&str, &str) {
    let core = word.trim_end_matches(is_nasal_mark);
    (core, &word[core.len()..])
}

/// Category of the last vowel sign or codepoint, ignoring trailing
/// nasalization. Total on non-empty input.
pub fn ending_of(word: &str) -> Result<EndingCategory, ScriptError> {
    if word.is_empty() {
        return Err(ScriptError::EmptyInput);
    }
    let (core, _) = split_nasal(word);
    let mut rev = core.chars().rev();
    let cat = match rev.next() {
        None => EndingCategory::Other,
        Some(NUKTA) => match rev.next() {
            Some(c) if is_consonant(c) => EndingCategory::Consonant,
            _ => EndingCategory::Other,
        },
        // a halant-final word still ends in a consonant
        Some(VIRAMA) => match rev.next() {
            Some(c) if is_consonant(c) || c == NUKTA => EndingCategory::Consonant,
            _ => EndingCategory::Other,
        },
        Some(c) if is_consonant(c) => EndingCategory::Consonant,
        Some(c) => category_of_vowel(c),
    };
    Ok(cat)
}

/// Adjusts a nasal mark to sit next to `sign`.
pub(crate) fn nasal_after(sign: Option<char>, mark: char) -> char {
    match sign {
        Some(s) if mark == CANDRABINDU && is_above_headline(s) => ANUSVARA,
        _ => mark,
    }
}

/// Applies one ending rewrite. The rest of the word is untouched and any
/// trailing nasalization is carried over.
pub fn rewrite_ending(word: &str, rule: EndingRule) -> Result<String, ScriptError> {
    if word.is_empty() {
        return Err(ScriptError::EmptyInput);
    }
    let not_applicable = || ScriptError::RuleNotApplicable {
        word: word.to_owned(),
        rule: rule.to_string(),
    };
    let (core, nasal) = split_nasal(word);
    let last = core.chars().next_back().ok_or_else(not_applicable)?;
    let stem = &core[..core.len() - last.len_utf8()];
    let mut out = String::with_capacity(word.len() + 3);
    let new_last: Option<char> = match rule {
        EndingRule::DropFinalVowel => {
            if !is_vowel_sign(last) {
                return Err(not_applicable());
            }
            out.push_str(stem);
            None
        }
        EndingRule::ShortenFinalVowel => {
            let short = shortened(last).ok_or_else(not_applicable)?;
            out.push_str(stem);
            out.push(short);
            Some(short)
        }
        EndingRule::ReplaceWith(sign) => {
            if !is_vowel_sign(sign) {
                return Err(ScriptError::NotAVowelSign(sign));
            }
            if is_vowel_sign(last) {
                out.push_str(stem);
            } else if is_consonant(last) || last == NUKTA {
                out.push_str(core);
            } else {
                return Err(not_applicable());
            }
            out.push(sign);
            Some(sign)
        }
    };
    for mark in nasal.chars() {
        out.push(nasal_after(new_last, mark));
    }
    Ok(out)
}

/// Appends `tail` to `word`, letting a leading nasal mark on `tail`
/// replace any trailing one on `word`. `sign` is the vowel sign the nasal
/// will sit next to.
fn merge_nasal_tail(mut word: String, sign: Option<char>, tail: &str) -> String {
    match tail.chars().next() {
        Some(first) if is_nasal_mark(first) => {
            let keep = word.trim_end_matches(is_nasal_mark).len();
            word.truncate(keep);
            word.push(nasal_after(sign, first));
            word.push_str(&tail[first.len_utf8()..]);
        }
        _ => word.push_str(tail),
    }
    word
}

/// Realizes the independent vowel `vowel` as a dependent sign on the final
/// consonant (or in place of the final sign) of `word`, then appends `rest`.
pub(crate) fn attach_vowel(word: &str, vowel: char, rest: &str) -> Result<String, ScriptError> {
    let sign = matra_of(vowel).ok_or(ScriptError::NotAVowelSign(vowel))?;
    let rewritten = rewrite_ending(word, EndingRule::ReplaceWith(sign))?;
    Ok(merge_nasal_tail(rewritten, Some(sign), rest))
}

/// Replaces a word-final independent vowel with `vowel`, then appends `rest`.
pub(crate) fn replace_final_independent(
    word: &str,
    vowel: char,
    rest: &str,
) -> Result<String, ScriptError> {
    let (core, nasal) = split_nasal(word);
    match core.chars().next_back() {
        Some(last) if is_independent_vowel(last) => {
            let mut out = core[..core.len() - last.len_utf8()].to_owned();
            out.push(vowel);
            out.push_str(nasal);
            Ok(merge_nasal_tail(out, None, rest))
        }
        _ => Err(ScriptError::RuleNotApplicable {
            word: word.to_owned(),
            rule: format!("REPLACE_INDEPENDENT({vowel})"),
        }),
    }
}

/// Shortens a final long ī/ū if there is one; other words pass through.
pub(crate) fn shorten_if_long(word: &str) -> String {
    rewrite_ending(word, EndingRule::ShortenFinalVowel).unwrap_or_else(|_| word.to_owned())
}

/// Splits a suffix into its leading vowel (dependent signs are read as
/// their independent vowel) and the remainder. `None` when the suffix
/// starts with a consonant.
pub(crate) fn leading_vowel(suffix: &str) -> Option<(char, &str)> {
    let first = suffix.chars().next()?;
    let vowel = if is_independent_vowel(first) {
        first
    } else {
        independent_of(first)?
    };
    Some((vowel, &suffix[first.len_utf8()..]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syllables(w: &str) -> Vec<String> {
        split_syllables(&nfc(w))
            .unwrap()
            .into_iter()
            .map(|s| s.0)
            .collect()
    }

    fn nfcs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| nfc(s)).collect()
    }

    #[test]
    fn splits_basic_words() {
        assert_eq!(syllables("रात"), nfcs(&["रा", "त"]));
        assert_eq!(syllables("कुत्ता"), nfcs(&["कु", "त्ता"]));
        assert_eq!(syllables("लड़की"), nfcs(&["ल", "ड़", "की"]));
    }

    #[test]
    fn splits_nasal_and_independent_vowels() {
        assert_eq!(syllables("लड़कियाँ"), nfcs(&["ल", "ड़", "कि", "याँ"]));
        assert_eq!(syllables("आलू"), nfcs(&["आ", "लू"]));
        assert_eq!(syllables("भाइयों"), nfcs(&["भा", "इ", "यों"]));
        assert_eq!(syllables("स्त्री"), nfcs(&["स्त्री"]));
    }

    #[test]
    fn nukta_forms_segment_identically() {
        // precomposed U+095C and the NFC sequence ड + ़
        let pre = "ल\u{095C}की";
        let dec = "लड\u{093C}की";
        assert_eq!(split_syllables(pre).unwrap().len(), 3);
        assert_eq!(split_syllables(dec).unwrap().len(), 3);
        assert_eq!(nfc(pre), dec);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(split_syllables(""), Err(ScriptError::EmptyInput));
        assert!(matches!(
            split_syllables("कुत्ताx"),
            Err(ScriptError::NonDevanagariContent { ch: 'x', index: 6, .. })
        ));
        assert!(split_syllables("नमस्ते।").is_ok());
    }

    #[test]
    fn endings() {
        assert_eq!(ending_of("कुत्ता").unwrap(), EndingCategory::LongA);
        assert_eq!(ending_of(&nfc("लड़की")).unwrap(), EndingCategory::LongIi);
        assert_eq!(ending_of("रात").unwrap(), EndingCategory::Consonant);
        assert_eq!(ending_of("शक्ति").unwrap(), EndingCategory::ShortI);
        assert_eq!(ending_of("आलू").unwrap(), EndingCategory::LongUu);
        assert_eq!(ending_of("गुरु").unwrap(), EndingCategory::ShortU);
        assert_eq!(ending_of("भाई").unwrap(), EndingCategory::LongIi);
        assert_eq!(ending_of("माँ").unwrap(), EndingCategory::LongA);
        assert_eq!(ending_of(&nfc("पढ़")).unwrap(), EndingCategory::Consonant);
        assert_eq!(ending_of("ले").unwrap(), EndingCategory::E);
        assert_eq!(ending_of("सो").unwrap(), EndingCategory::O);
        assert_eq!(ending_of("दुःख").unwrap(), EndingCategory::Consonant);
        assert_eq!(ending_of("।").unwrap(), EndingCategory::Other);
        assert_eq!(ending_of(""), Err(ScriptError::EmptyInput));
    }

    #[test]
    fn rewrites() {
        assert_eq!(
            rewrite_ending("कुत्ता", EndingRule::ReplaceWith('े')).unwrap(),
            "कुत्ते"
        );
        assert_eq!(
            rewrite_ending(&nfc("लड़की"), EndingRule::ShortenFinalVowel).unwrap(),
            nfc("लड़कि")
        );
        assert!(matches!(
            rewrite_ending("रात", EndingRule::DropFinalVowel),
            Err(ScriptError::RuleNotApplicable { .. })
        ));
        assert!(matches!(
            rewrite_ending("रात", EndingRule::ShortenFinalVowel),
            Err(ScriptError::RuleNotApplicable { .. })
        ));
        assert_eq!(rewrite_ending("रात", EndingRule::ReplaceWith('े')).unwrap(), "राते");
        assert_eq!(rewrite_ending("माला", EndingRule::DropFinalVowel).unwrap(), "माल");
        assert_eq!(
            rewrite_ending("कुत्ता", EndingRule::ReplaceWith('x')),
            Err(ScriptError::NotAVowelSign('x'))
        );
    }

    #[test]
    fn rewrite_preserves_nasalization() {
        // chandrabindu becomes anusvara next to an above-headline sign
        assert_eq!(rewrite_ending("माँ", EndingRule::ReplaceWith('े')).unwrap(), "में");
        assert_eq!(rewrite_ending("माँ", EndingRule::DropFinalVowel).unwrap(), "मँ");
        assert_eq!(rewrite_ending("मूँ", EndingRule::ShortenFinalVowel).unwrap(), "मुँ");
    }

    #[test]
    fn matra_tables_are_inverse() {
        for v in "आइईउऊऋएऐओऔ".chars() {
            let m = matra_of(v).unwrap();
            assert_eq!(independent_of(m), Some(v));
        }
    }

    #[test]
    fn attaches_vowels_with_nasal_tail() {
        assert_eq!(attach_vowel("रात", 'ए', "ँ").unwrap(), "रातें");
        assert_eq!(attach_vowel("कुत्ता", 'ओ', "ं").unwrap(), "कुत्तों");
        assert_eq!(attach_vowel("चल", 'ऊ', "ँगा").unwrap(), "चलूँगा");
        assert_eq!(replace_final_independent("कुआँ", 'ए', "").unwrap(), "कुएँ");
        assert_eq!(replace_final_independent("कुआँ", 'ओ', "ं").unwrap(), "कुओं");
        assert_eq!(leading_vowel("ूँगा"), Some(('ऊ', "ँगा")));
        assert_eq!(leading_vowel("याँ"), None);
    }
}
