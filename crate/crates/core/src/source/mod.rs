//! English source-side factors from dependency-parsed CoNLL-U.
//!
//! Nouns get number (from the POS tag) and case (from ordered rules over
//! typed dependencies). Verbs get number and person of their subject and a
//! TAM slot from POS tags and auxiliaries. Anything that cannot be resolved
//! takes the least-marked value (singular, third person, direct case) and
//! is recorded as a [`Defaulted`] diagnostic.

pub mod conllu;
pub mod english;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::features::{Case, Number, Person, TamSlot};
use crate::token::{FactoredToken, NULL_FACTOR};
use crate::tsv::{self, TsvError};

pub use conllu::{parse_conllu, ConlluError, ConlluToken, Sentence};
pub use english::{english_noun_surface, english_verb_surface};

const DEFAULT_PRONOUNS: &str = include_str!("../../data/pronouns.tsv");
const DEFAULT_ALIASES: &str = include_str!("../../data/deprel_aliases.tsv");
const DEFAULT_CASE_RULES: &str = include_str!("../../data/case_rules.tsv");
const DEFAULT_TAM_RULES: &str = include_str!("../../data/tam_rules.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceError {
    #[error("token {id} ({xpos}) is not a noun")]
    NotANoun { id: usize, xpos: String },
    #[error("token {id} ({xpos}) is not a verb")]
    NotAVerb { id: usize, xpos: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnglishNounFactors {
    pub number: Number,
    pub case: Case,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnglishVerbFactors {
    pub number: Number,
    pub person: Person,
    pub tam: TamSlot,
}

/// A feature that fell back to its default value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defaulted {
    pub line: usize,
    pub token: usize,
    pub feature: String,
    pub value: String,
}

impl fmt::Display for Defaulted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {} token {}: {} defaulted to {}",
            self.line, self.token, self.feature, self.value
        )
    }
}

/// Canonical dependency relations the rules look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Subject,
    PassiveSubject,
    DirectObject,
    PrepObject,
    CaseMarker,
    Preposition,
    Aux,
    Mark,
}

impl Relation {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "subject" => Relation::Subject,
            "passive_subject" => Relation::PassiveSubject,
            "direct_object" => Relation::DirectObject,
            "prep_object" => Relation::PrepObject,
            "case_marker" => Relation::CaseMarker,
            "preposition" => Relation::Preposition,
            "aux" => Relation::Aux,
            "mark" => Relation::Mark,
            _ => return None,
        })
    }
}

/// Maps parser-specific dependency labels to [`Relation`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationAliases(HashMap<String, Relation>);

impl RelationAliases {
    pub fn parse(text: &str) -> Result<Self, TsvError> {
        let mut map = HashMap::new();
        for rec in tsv::records(text) {
            let label = rec.field(0, "label")?;
            let rel_raw = rec.field(1, "relation")?;
            let rel = Relation::parse(rel_raw).ok_or_else(|| rec.error(format!("unknown relation {rel_raw:?}")))?;
            map.insert(label.to_owned(), rel);
        }
        Ok(RelationAliases(map))
    }

    pub fn relation(&self, label: &str) -> Option<Relation> {
        if let Some(r) = self.0.get(label) {
            return Some(*r);
        }
        if let Some((base, _)) = label.split_once(':') {
            if let Some(r) = self.0.get(base) {
                return Some(*r);
            }
        }
        if label.starts_with("prep_") || label.starts_with("prepc_") {
            return Some(Relation::PrepObject);
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseCondition {
    /// Object of a preposition: `pobj`, a collapsed `prep_*` label, or a
    /// nominal with a `case` dependent.
    PrepObject,
    /// Subject of a past-tense or past-participle verb (ergative context).
    SubjectPast,
    Subject,
    DirectObject,
    Default,
}

impl CaseCondition {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "prep_object" => CaseCondition::PrepObject,
            "subject_past" => CaseCondition::SubjectPast,
            "subject" => CaseCondition::Subject,
            "direct_object" => CaseCondition::DirectObject,
            "default" => CaseCondition::Default,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseRules(pub Vec<(CaseCondition, Case)>);

impl CaseRules {
    pub fn parse(text: &str) -> Result<Self, TsvError> {
        tsv::records(text)
            .map(|rec| {
                let cond_raw = rec.field(0, "condition")?;
                let cond = CaseCondition::parse(cond_raw)
                    .ok_or_else(|| rec.error(format!("unknown case condition {cond_raw:?}")))?;
                let case_raw = rec.field(1, "case")?;
                let case = Case::from_code(case_raw).ok_or_else(|| rec.error(format!("bad case {case_raw:?}")))?;
                Ok((cond, case))
            })
            .collect::<Result<_, _>>()
            .map(CaseRules)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TamRules {
    by_xpos: HashMap<String, TamSlot>,
    by_aux: HashMap<String, TamSlot>,
    by_modal: HashMap<String, TamSlot>,
    other_modal: TamSlot,
    default: TamSlot,
}

impl TamRules {
    pub fn parse(text: &str) -> Result<Self, TsvError> {
        let mut rules = TamRules {
            by_xpos: HashMap::new(),
            by_aux: HashMap::new(),
            by_modal: HashMap::new(),
            other_modal: TamSlot::ModalSubjunctive,
            default: TamSlot::PresentHabitual,
        };
        for rec in tsv::records(text) {
            let kind = rec.field(0, "kind")?;
            let key = rec.field(1, "key")?;
            let tam_raw = rec.field(2, "tam_slot")?;
            let tam = TamSlot::from_code(tam_raw).ok_or_else(|| rec.error(format!("unknown TAM slot {tam_raw:?}")))?;
            match (kind, key) {
                ("xpos", _) => {
                    rules.by_xpos.insert(key.to_owned(), tam);
                }
                ("aux", _) => {
                    rules.by_aux.insert(key.to_owned(), tam);
                }
                ("modal", "*") => rules.other_modal = tam,
                ("modal", _) => {
                    rules.by_modal.insert(key.to_lowercase(), tam);
                }
                ("default", _) => rules.default = tam,
                _ => return Err(rec.error(format!("unknown rule kind {kind:?}"))),
            }
        }
        Ok(rules)
    }

    fn modal(&self, form: &str) -> TamSlot {
        self.by_modal
            .get(&form.to_lowercase())
            .copied()
            .unwrap_or(self.other_modal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounTable(HashMap<String, (Person, Number)>);

impl PronounTable {
    pub fn parse(text: &str) -> Result<Self, TsvError> {
        let mut map = HashMap::new();
        for rec in tsv::records(text) {
            let word = rec.field(0, "pronoun")?.to_lowercase();
            let p = rec.field(1, "person")?;
            let person = Person::from_code(p).ok_or_else(|| rec.error(format!("bad person {p:?}")))?;
            let n = rec.field(2, "number")?;
            let number = Number::from_code(n).ok_or_else(|| rec.error(format!("bad number {n:?}")))?;
            map.insert(word, (person, number));
        }
        Ok(PronounTable(map))
    }

    pub fn lookup(&self, word: &str) -> Option<(Person, Number)> {
        self.0.get(&word.to_lowercase()).copied()
    }
}

/// Which words receive factors in an annotated corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorMode {
    Noun,
    Verb,
    #[default]
    Both,
}

impl FactorMode {
    /// Factor width of annotated tokens.
    pub fn width(self) -> usize {
        match self {
            FactorMode::Noun => 2,
            FactorMode::Verb | FactorMode::Both => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceAnnotation {
    pub tokens: Vec<FactoredToken>,
    pub defaults: Vec<Defaulted>,
}

/// The factor extractor with its rule tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotator {
    pub pronouns: PronounTable,
    pub aliases: RelationAliases,
    pub case_rules: CaseRules,
    pub tam_rules: TamRules,
}

impl Default for Annotator {
    fn default() -> Self {
        Annotator {
            pronouns: PronounTable::parse(DEFAULT_PRONOUNS).expect("shipped pronoun table"),
            aliases: RelationAliases::parse(DEFAULT_ALIASES).expect("shipped label aliases"),
            case_rules: CaseRules::parse(DEFAULT_CASE_RULES).expect("shipped case rules"),
            tam_rules: TamRules::parse(DEFAULT_TAM_RULES).expect("shipped TAM rules"),
        }
    }
}

pub fn is_noun(token: &ConlluToken) -> bool {
    token.xpos.starts_with("NN")
}

pub fn noun_number(token: &ConlluToken) -> Result<Number, SourceError> {
    match token.xpos.as_str() {
        "NN" | "NNP" => Ok(Number::Singular),
        "NNS" | "NNPS" => Ok(Number::Plural),
        _ => Err(SourceError::NotANoun {
            id: token.id,
            xpos: token.xpos.clone(),
        }),
    }
}

fn diag(defaults: &mut Vec<Defaulted>, sentence: &Sentence, token: &ConlluToken, feature: &str, value: impl fmt::Display) {
    defaults.push(Defaulted {
        line: sentence.line,
        token: token.id,
        feature: feature.to_owned(),
        value: value.to_string(),
    });
}

impl Annotator {
    fn relation(&self, token: &ConlluToken) -> Option<Relation> {
        self.aliases.relation(&token.deprel)
    }

    fn condition_holds(&self, cond: CaseCondition, token: &ConlluToken, sentence: &Sentence) -> bool {
        let rel = self.relation(token);
        match cond {
            CaseCondition::PrepObject => {
                rel == Some(Relation::PrepObject)
                    || sentence
                        .children(token)
                        .any(|c| self.relation(c) == Some(Relation::CaseMarker))
            }
            CaseCondition::SubjectPast => {
                rel == Some(Relation::Subject)
                    && sentence
                        .head_of(token)
                        .is_some_and(|h| h.xpos == "VBD" || h.xpos == "VBN")
            }
            CaseCondition::Subject => matches!(rel, Some(Relation::Subject | Relation::PassiveSubject)),
            CaseCondition::DirectObject => rel == Some(Relation::DirectObject),
            CaseCondition::Default => true,
        }
    }

    pub fn noun_case(&self, token: &ConlluToken, sentence: &Sentence) -> Result<Case, SourceError> {
        let mut sink = Vec::new();
        self.noun_case_traced(token, sentence, &mut sink)
    }

    fn noun_case_traced(
        &self,
        token: &ConlluToken,
        sentence: &Sentence,
        defaults: &mut Vec<Defaulted>,
    ) -> Result<Case, SourceError> {
        if !is_noun(token) {
            return Err(SourceError::NotANoun {
                id: token.id,
                xpos: token.xpos.clone(),
            });
        }
        for &(cond, case) in &self.case_rules.0 {
            if self.condition_holds(cond, token, sentence) {
                if cond == CaseCondition::Default {
                    diag(defaults, sentence, token, "case", case);
                }
                return Ok(case);
            }
        }
        diag(defaults, sentence, token, "case", Case::Direct);
        Ok(Case::Direct)
    }

    pub fn noun_factors(&self, token: &ConlluToken, sentence: &Sentence) -> Result<EnglishNounFactors, SourceError> {
        Ok(EnglishNounFactors {
            number: noun_number(token)?,
            case: self.noun_case(token, sentence)?,
        })
    }

    pub fn verb_factors(&self, verb: &ConlluToken, sentence: &Sentence) -> Result<EnglishVerbFactors, SourceError> {
        let mut sink = Vec::new();
        self.verb_factors_traced(verb, sentence, &mut sink)
    }

    fn verb_factors_traced(
        &self,
        verb: &ConlluToken,
        sentence: &Sentence,
        defaults: &mut Vec<Defaulted>,
    ) -> Result<EnglishVerbFactors, SourceError> {
        if !(verb.xpos.starts_with("VB") || verb.xpos == "MD") {
            return Err(SourceError::NotAVerb {
                id: verb.id,
                xpos: verb.xpos.clone(),
            });
        }
        let subject = sentence
            .children(verb)
            .find(|c| matches!(self.relation(c), Some(Relation::Subject | Relation::PassiveSubject)));

        let imperative = subject.is_none() && verb.xpos == "VB" && verb.head == 0 && {
            let has_aux = sentence.children(verb).any(|c| c.xpos == "MD" || c.xpos == "TO");
            let after_to = sentence.previous(verb).is_some_and(|p| p.form.eq_ignore_ascii_case("to"));
            !has_aux && !after_to
        };

        let (person, number) = match subject {
            Some(s) => match self.pronouns.lookup(&s.form) {
                Some(pn) => pn,
                None => {
                    let number = noun_number(s).unwrap_or_else(|_| {
                        diag(defaults, sentence, verb, "number", Number::Singular);
                        Number::Singular
                    });
                    (Person::Third, number)
                }
            },
            None if imperative => self
                .pronouns
                .lookup("you")
                .unwrap_or((Person::Second, Number::Plural)),
            None => {
                diag(defaults, sentence, verb, "number", Number::Singular);
                diag(defaults, sentence, verb, "person", Person::Third);
                (Person::Third, Number::Singular)
            }
        };

        let tam = self.tam_of(verb, sentence, imperative).unwrap_or_else(|| {
            diag(defaults, sentence, verb, "tam", self.tam_rules.default);
            self.tam_rules.default
        });
        Ok(EnglishVerbFactors { number, person, tam })
    }

    fn tam_of(&self, verb: &ConlluToken, sentence: &Sentence, imperative: bool) -> Option<TamSlot> {
        if verb.xpos == "MD" {
            return Some(self.tam_rules.modal(&verb.form));
        }
        if let Some(m) = sentence.children(verb).find(|c| c.xpos == "MD") {
            return Some(self.tam_rules.modal(&m.form));
        }
        let to_child = sentence.children(verb).any(|c| c.xpos == "TO");
        let after_to = sentence
            .previous(verb)
            .is_some_and(|p| p.form.eq_ignore_ascii_case("to") && p.xpos == "TO");
        if verb.xpos == "VB" && (to_child || after_to) {
            return Some(TamSlot::Infinitive);
        }
        if imperative {
            return Some(TamSlot::Imperative);
        }
        if let Some(t) = self.tam_rules.by_xpos.get(&verb.xpos) {
            return Some(*t);
        }
        sentence
            .children(verb)
            .filter(|c| self.relation(c) == Some(Relation::Aux))
            .find_map(|aux| self.tam_rules.by_aux.get(&aux.xpos).copied())
    }

    fn is_main_verb(&self, token: &ConlluToken) -> bool {
        token.xpos.starts_with("VB") && self.relation(token) != Some(Relation::Aux)
    }

    /// Factored tokens for one sentence, all of width `mode.width()`.
    /// Nouns and main verbs carry their lemma as surface; other tokens keep
    /// their form with `null` factors.
    pub fn annotate_sentence(&self, sentence: &Sentence, mode: FactorMode) -> SentenceAnnotation {
        let width = mode.width();
        let mut defaults = Vec::new();
        let mut tokens = Vec::with_capacity(sentence.tokens.len());
        for tok in &sentence.tokens {
            let lemma = if tok.lemma.is_empty() || tok.lemma == "_" {
                tok.form.to_lowercase()
            } else {
                tok.lemma.clone()
            };
            let mut factors: Vec<String> = Vec::new();
            let mut surface = tok.form.clone();
            if mode != FactorMode::Verb && is_noun(tok) {
                let number = noun_number(tok).unwrap_or_else(|_| {
                    diag(&mut defaults, sentence, tok, "number", Number::Singular);
                    Number::Singular
                });
                let case = self
                    .noun_case_traced(tok, sentence, &mut defaults)
                    .unwrap_or(Case::Direct);
                surface = lemma;
                factors = vec![number.factor().into(), case.factor().into()];
            } else if mode != FactorMode::Noun && self.is_main_verb(tok) {
                if let Ok(v) = self.verb_factors_traced(tok, sentence, &mut defaults) {
                    surface = lemma;
                    factors = vec![v.number.factor().into(), v.person.factor().into(), v.tam.factor().into()];
                }
            }
            factors.resize(width, NULL_FACTOR.into());
            let surface = escape_surface(&surface);
            let token = FactoredToken::new(surface, factors).expect("escaped surface and fixed factor values form a valid token");
            tokens.push(token);
        }
        SentenceAnnotation { tokens, defaults }
    }

    /// Annotates sentences in input order.
    pub fn annotate(&self, sentences: &[Sentence], mode: FactorMode, exec: Exec) -> Vec<SentenceAnnotation> {
        exec.map(sentences, |s| self.annotate_sentence(s, mode))
    }
}

/// Makes a word safe for the factored format: `|` becomes `&#124;` and
/// whitespace becomes `_`.
pub fn escape_surface(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '|' => out.push_str("&#124;"),
            c if c.is_whitespace() => out.push('_'),
            c => out.push(c),
        }
    }
    if out.is_empty() {
        out.push('_');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tok(id: usize, form: &str, xpos: &str, head: usize, deprel: &str) -> ConlluToken {
        ConlluToken::new(id, form, &form.to_lowercase(), xpos, head, deprel)
    }

    #[test]
    fn noun_numbers() {
        assert_eq!(noun_number(&tok(1, "dogs", "NNS", 0, "root")).unwrap(), Number::Plural);
        assert_eq!(noun_number(&tok(1, "dog", "NN", 0, "root")).unwrap(), Number::Singular);
        assert_eq!(noun_number(&tok(1, "Delhi", "NNP", 0, "root")).unwrap(), Number::Singular);
        assert!(matches!(
            noun_number(&tok(1, "ran", "VBD", 0, "root")),
            Err(SourceError::NotANoun { .. })
        ));
    }

    #[test]
    fn prepositional_object_is_oblique() {
        let a = Annotator::default();
        // legacy Stanford: the dog in the house
        let s = Sentence::new(vec![
            tok(1, "the", "DT", 2, "det"),
            tok(2, "dog", "NN", 0, "root"),
            tok(3, "in", "IN", 2, "prep"),
            tok(4, "the", "DT", 5, "det"),
            tok(5, "house", "NN", 3, "pobj"),
        ]);
        assert_eq!(a.noun_case(&s.tokens[4], &s).unwrap(), Case::Oblique);
        // UD: house --case--> in
        let ud = Sentence::new(vec![
            tok(1, "the", "DT", 2, "det"),
            tok(2, "dog", "NN", 0, "root"),
            tok(3, "in", "IN", 5, "case"),
            tok(4, "the", "DT", 5, "det"),
            tok(5, "house", "NN", 2, "nmod"),
        ]);
        assert_eq!(a.noun_case(&ud.tokens[4], &ud).unwrap(), Case::Oblique);
        // collapsed: prep_in
        let col = Sentence::new(vec![tok(1, "dog", "NN", 0, "root"), tok(2, "house", "NN", 1, "prep_in")]);
        assert_eq!(a.noun_case(&col.tokens[1], &col).unwrap(), Case::Oblique);
    }

    #[test]
    fn subject_cases() {
        let a = Annotator::default();
        let present = Sentence::new(vec![
            tok(1, "the", "DT", 2, "det"),
            tok(2, "dog", "NN", 3, "nsubj"),
            tok(3, "runs", "VBZ", 0, "root"),
        ]);
        assert_eq!(a.noun_case(&present.tokens[1], &present).unwrap(), Case::Direct);
        let past = Sentence::new(vec![
            tok(1, "boy", "NN", 2, "nsubj"),
            tok(2, "ate", "VBD", 0, "root"),
            tok(3, "apples", "NNS", 2, "dobj"),
        ]);
        assert_eq!(a.noun_case(&past.tokens[0], &past).unwrap(), Case::Oblique);
        assert_eq!(a.noun_case(&past.tokens[2], &past).unwrap(), Case::Direct);
        let isolated = Sentence::new(vec![tok(1, "dog", "NN", 0, "root")]);
        assert_eq!(a.noun_case(&isolated.tokens[0], &isolated).unwrap(), Case::Direct);
    }

    #[test]
    fn rule_order_is_configurable() {
        let a = Annotator {
            case_rules: CaseRules::parse("subject\tdir\nprep_object\tobl\ndefault\tdir\n").unwrap(),
            ..Annotator::default()
        };
        let s = Sentence::new(vec![
            tok(1, "boy", "NN", 2, "nsubj"),
            tok(2, "ate", "VBD", 0, "root"),
        ]);
        assert_eq!(a.noun_case(&s.tokens[0], &s).unwrap(), Case::Direct);
    }

    #[test]
    fn verb_factor_examples() {
        let a = Annotator::default();
        let i_walk = Sentence::new(vec![tok(1, "I", "PRP", 2, "nsubj"), tok(2, "walk", "VBP", 0, "root")]);
        assert_eq!(
            a.verb_factors(&i_walk.tokens[1], &i_walk).unwrap(),
            EnglishVerbFactors {
                number: Number::Singular,
                person: Person::First,
                tam: TamSlot::PresentHabitual
            }
        );
        let they = Sentence::new(vec![tok(1, "they", "PRP", 2, "nsubj"), tok(2, "walked", "VBD", 0, "root")]);
        assert_eq!(
            a.verb_factors(&they.tokens[1], &they).unwrap(),
            EnglishVerbFactors {
                number: Number::Plural,
                person: Person::Third,
                tam: TamSlot::PastPerfective
            }
        );
        let will = Sentence::new(vec![
            tok(1, "the", "DT", 2, "det"),
            tok(2, "dog", "NN", 4, "nsubj"),
            tok(3, "will", "MD", 4, "aux"),
            tok(4, "run", "VB", 0, "root"),
        ]);
        assert_eq!(
            a.verb_factors(&will.tokens[3], &will).unwrap(),
            EnglishVerbFactors {
                number: Number::Singular,
                person: Person::Third,
                tam: TamSlot::Future
            }
        );
        assert!(matches!(
            a.verb_factors(&will.tokens[1], &will),
            Err(SourceError::NotAVerb { .. })
        ));
    }

    #[test]
    fn other_tam_slots() {
        let a = Annotator::default();
        let imp = Sentence::new(vec![tok(1, "sit", "VB", 0, "root"), tok(2, "down", "RP", 1, "prt")]);
        let f = a.verb_factors(&imp.tokens[0], &imp).unwrap();
        assert_eq!((f.tam, f.person), (TamSlot::Imperative, Person::Second));
        let inf = Sentence::new(vec![
            tok(1, "I", "PRP", 2, "nsubj"),
            tok(2, "want", "VBP", 0, "root"),
            tok(3, "to", "TO", 4, "mark"),
            tok(4, "eat", "VB", 2, "xcomp"),
        ]);
        assert_eq!(a.verb_factors(&inf.tokens[3], &inf).unwrap().tam, TamSlot::Infinitive);
        let modal = Sentence::new(vec![
            tok(1, "we", "PRP", 3, "nsubj"),
            tok(2, "should", "MD", 3, "aux"),
            tok(3, "go", "VB", 0, "root"),
        ]);
        let f = a.verb_factors(&modal.tokens[2], &modal).unwrap();
        assert_eq!((f.tam, f.number, f.person), (TamSlot::ModalSubjunctive, Number::Plural, Person::First));
        let perfect = Sentence::new(vec![
            tok(1, "she", "PRP", 3, "nsubj"),
            tok(2, "has", "VBZ", 3, "aux"),
            tok(3, "eaten", "VBN", 0, "root"),
        ]);
        assert_eq!(a.verb_factors(&perfect.tokens[2], &perfect).unwrap().tam, TamSlot::PastPerfective);
        let progressive = Sentence::new(vec![
            tok(1, "boys", "NNS", 3, "nsubj"),
            tok(2, "are", "VBP", 3, "aux"),
            tok(3, "playing", "VBG", 0, "root"),
        ]);
        let f = a.verb_factors(&progressive.tokens[2], &progressive).unwrap();
        assert_eq!((f.tam, f.number), (TamSlot::PresentHabitual, Number::Plural));
    }

    #[test]
    fn annotation_is_total_and_records_defaults() {
        let a = Annotator::default();
        let s = Sentence {
            tokens: vec![
                tok(1, "the", "DT", 2, "det"),
                tok(2, "boys", "NNS", 3, "nsubj"),
                tok(3, "played", "VBD", 0, "root"),
                tok(4, "in", "IN", 6, "case"),
                tok(5, "the", "DT", 6, "det"),
                tok(6, "park", "NN", 3, "obl"),
                tok(7, "running", "VBG", 3, "advcl"),
            ],
            line: 7,
        };
        let ann = a.annotate_sentence(&s, FactorMode::Both);
        let line: Vec<String> = ann.tokens.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            line,
            [
                "the|null|null|null",
                "boys|plural|oblique|null",
                "played|plural|third|past_perfective",
                "in|null|null|null",
                "the|null|null|null",
                "park|singular|oblique|null",
                "running|singular|third|present_habitual",
            ]
        );
        assert!(ann.tokens.iter().all(|t| t.width() == 3));
        // the VBG has neither subject nor a mapped tag
        assert!(ann.defaults.iter().any(|d| d.token == 7 && d.feature == "tam"));
        assert!(ann.defaults.iter().all(|d| d.line == 7));

        let nouns = a.annotate_sentence(&s, FactorMode::Noun);
        assert_eq!(nouns.tokens[2].to_string(), "played|null|null");
    }

    #[test]
    fn escapes() {
        assert_eq!(escape_surface("a|b"), "a&#124;b");
        assert_eq!(escape_surface("New York"), "New_York");
    }

    #[test]
    fn results_do_not_depend_on_token_order() {
        let a = Annotator::default();
        let s = Sentence::new(vec![
            tok(1, "boy", "NN", 2, "nsubj"),
            tok(2, "ate", "VBD", 0, "root"),
            tok(3, "in", "IN", 4, "case"),
            tok(4, "house", "NN", 2, "obl"),
        ]);
        let mut rev = s.clone();
        rev.tokens.reverse();
        for t in &s.tokens {
            if is_noun(t) {
                let r = rev.get(t.id).unwrap();
                assert_eq!(a.noun_case(t, &s).unwrap(), a.noun_case(r, &rev).unwrap());
            }
        }
    }
}
