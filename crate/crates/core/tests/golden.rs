//! Paradigm generation against hand-curated noun and verb forms.

use morphinject::features::{Gender, Number, Person, TamSlot};
use morphinject::noun::{classify_noun, noun_paradigm, NounClass, NounLexEntry, SuffixTable};
use morphinject::script::nfc;
use morphinject::verb::{parse_verb_lexicon, verb_paradigm, FactorPattern, VerbFactors, VerbSuffixTable};

const NOUNS: &str = include_str!("fixtures/nouns_golden.tsv");
const VERBS: &str = include_str!("fixtures/verbs_golden.tsv");
const VERB_LEXICON: &str = include_str!("fixtures/verbs_lexicon.tsv");

fn rows(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').collect())
}

#[test]
fn noun_paradigms_match_fixture() {
    let table = SuffixTable::hindi_default();
    let mut mismatches = Vec::new();
    for r in rows(NOUNS) {
        let gender = Gender::from_code(r[2]).unwrap();
        let mut entry = NounLexEntry::new(r[1], gender).unwrap();
        if r[3] == "0" {
            entry = entry.uncountable();
        }
        if r[4] != "-" {
            entry = entry.with_class(r[4].parse().unwrap());
        }
        let class: NounClass = r[5].parse().unwrap();
        assert_eq!(classify_noun(&entry).unwrap(), class, "class of {}", r[1]);
        let got: Vec<String> = noun_paradigm(&entry, &table).unwrap().into_iter().map(|p| p.surface).collect();
        let want: Vec<String> = r[6..10].iter().map(|s| nfc(s)).collect();
        if got != want {
            mismatches.push(format!("{}: got {got:?}, want {want:?}", r[1]));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn fixture_covers_every_class() {
    for class in ["B", "C", "D", "E"] {
        let n = rows(NOUNS).filter(|r| r[5] == class).count();
        assert!(n >= 20, "class {class} has {n} nouns");
    }
}

fn cell(s: &str) -> VerbFactors {
    let p = FactorPattern::parse(s).unwrap();
    VerbFactors::new(
        p.tam,
        p.gender.unwrap_or(Gender::Masculine),
        p.number.unwrap_or(Number::Singular),
        p.person.unwrap_or(Person::Third),
    )
}

#[test]
fn verb_forms_match_fixture() {
    let table = VerbSuffixTable::hindi_default();
    let lexicon = parse_verb_lexicon(VERB_LEXICON).unwrap();
    let mut mismatches = Vec::new();
    let mut tams = std::collections::BTreeSet::new();
    for r in rows(VERBS) {
        let entry = lexicon.iter().find(|e| e.english_root == r[0]).expect("verb in lexicon");
        let factors = cell(r[1]);
        tams.insert(factors.tam);
        let paradigm = verb_paradigm(entry, &table).unwrap();
        let row = paradigm.iter().find(|p| p.factors == factors).expect("cell in grid");
        if row.surface != nfc(r[2]) {
            mismatches.push(format!("{} {}: got {}, want {}", r[0], r[1], row.surface, r[2]));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
    assert_eq!(tams.len(), TamSlot::ALL.len());
    assert!(lexicon.len() >= 10);
}
