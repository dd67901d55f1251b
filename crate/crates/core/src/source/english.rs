//! English surface forms for the surface-only dictionary.

use crate::features::{Number, Person, TamSlot};

use super::EnglishVerbFactors;

const IRREGULAR_PLURALS: &[(&str, &str)] = &[
    ("child", "children"),
    ("man", "men"),
    ("woman", "women"),
    ("person", "people"),
    ("foot", "feet"),
    ("tooth", "teeth"),
    ("goose", "geese"),
    ("mouse", "mice"),
    ("louse", "lice"),
    ("ox", "oxen"),
    ("sheep", "sheep"),
    ("deer", "deer"),
    ("fish", "fish"),
    ("series", "series"),
    ("species", "species"),
    ("knife", "knives"),
    ("wife", "wives"),
    ("life", "lives"),
    ("leaf", "leaves"),
    ("wolf", "wolves"),
    ("half", "halves"),
    ("shelf", "shelves"),
    ("loaf", "loaves"),
    ("thief", "thieves"),
    ("calf", "calves"),
    ("potato", "potatoes"),
    ("tomato", "tomatoes"),
    ("hero", "heroes"),
    ("echo", "echoes"),
    ("criterion", "criteria"),
    ("phenomenon", "phenomena"),
    ("cactus", "cacti"),
    ("medium", "media"),
    ("datum", "data"),
];

/// (lemma, past, third-person singular present if irregular)
const IRREGULAR_VERBS: &[(&str, &str, Option<&str>)] = &[
    ("be", "was", Some("is")),
    ("have", "had", Some("has")),
    ("do", "did", Some("does")),
    ("go", "went", Some("goes")),
    ("eat", "ate", None),
    ("come", "came", None),
    ("see", "saw", None),
    ("run", "ran", None),
    ("write", "wrote", None),
    ("drink", "drank", None),
    ("sleep", "slept", None),
    ("sit", "sat", None),
    ("take", "took", None),
    ("give", "gave", None),
    ("make", "made", None),
    ("say", "said", None),
    ("read", "read", None),
    ("speak", "spoke", None),
    ("hear", "heard", None),
    ("know", "knew", None),
    ("find", "found", None),
    ("get", "got", None),
    ("stand", "stood", None),
    ("think", "thought", None),
    ("bring", "brought", None),
    ("buy", "bought", None),
    ("sing", "sang", None),
    ("swim", "swam", None),
    ("begin", "began", None),
    ("tell", "told", None),
    ("sell", "sold", None),
    ("leave", "left", None),
    ("feel", "felt", None),
    ("keep", "kept", None),
    ("meet", "met", None),
    ("put", "put", None),
    ("cut", "cut", None),
    ("let", "let", None),
    ("become", "became", None),
    ("break", "broke", None),
    ("choose", "chose", None),
    ("drive", "drove", None),
    ("fall", "fell", None),
    ("fly", "flew", None),
    ("forget", "forgot", None),
    ("grow", "grew", None),
    ("hold", "held", None),
    ("lose", "lost", None),
    ("pay", "paid", None),
    ("ride", "rode", None),
    ("rise", "rose", None),
    ("send", "sent", None),
    ("spend", "spent", None),
    ("steal", "stole", None),
    ("teach", "taught", None),
    ("throw", "threw", None),
    ("understand", "understood", None),
    ("wake", "woke", None),
    ("wear", "wore", None),
    ("win", "won", None),
];

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn ends_with_consonant_y(w: &str) -> bool {
    let mut rev = w.chars().rev();
    rev.next() == Some('y') && rev.next().is_some_and(|c| !is_vowel(c))
}

fn is_sibilant_final(w: &str) -> bool {
    ["s", "x", "z", "sh", "ch"].iter().any(|s| w.ends_with(s))
}

pub fn english_noun_surface(root: &str, number: Number) -> String {
    if number == Number::Singular {
        return root.to_owned();
    }
    if let Some((_, plural)) = IRREGULAR_PLURALS.iter().find(|(s, p)| *s == root || *p == root) {
        return (*plural).to_owned();
    }
    if is_sibilant_final(root) {
        format!("{root}es")
    } else if ends_with_consonant_y(root) {
        format!("{}ies", &root[..root.len() - 1])
    } else {
        format!("{root}s")
    }
}

fn third_singular(root: &str) -> String {
    if let Some((_, _, Some(s))) = IRREGULAR_VERBS.iter().find(|(l, _, _)| *l == root) {
        return (*s).to_owned();
    }
    if is_sibilant_final(root) || root.ends_with('o') {
        format!("{root}es")
    } else if ends_with_consonant_y(root) {
        format!("{}ies", &root[..root.len() - 1])
    } else {
        format!("{root}s")
    }
}

/// Short single-vowel verbs ending in one consonant double it: stop → stopped.
fn doubles_final_consonant(root: &str) -> bool {
    let chars: Vec<char> = root.chars().collect();
    let n = chars.len();
    if n < 3 || !chars.iter().all(|c| c.is_ascii_lowercase()) {
        return false;
    }
    let last = chars[n - 1];
    let vowel_groups = chars
        .iter()
        .zip(std::iter::once(&' ').chain(chars.iter()))
        .filter(|(c, prev)| is_vowel(**c) && !is_vowel(**prev))
        .count();
    vowel_groups == 1 && is_vowel(chars[n - 2]) && !is_vowel(chars[n - 3]) && !matches!(last, 'w' | 'x' | 'y') && !is_vowel(last)
}

fn past(root: &str) -> String {
    if let Some((_, p, _)) = IRREGULAR_VERBS.iter().find(|(l, p, _)| *l == root || *p == root) {
        return (*p).to_owned();
    }
    if root.ends_with("ed") {
        root.to_owned()
    } else if root.ends_with('e') {
        format!("{root}d")
    } else if ends_with_consonant_y(root) {
        format!("{}ied", &root[..root.len() - 1])
    } else if doubles_final_consonant(root) {
        let last = root.chars().last().unwrap_or_default();
        format!("{root}{last}ed")
    } else {
        format!("{root}ed")
    }
}

/// The English form for a verb lemma under the given factors. Multiword
/// forms (`will walk`, `to walk`) are space-separated.
pub fn english_verb_surface(root: &str, factors: &EnglishVerbFactors) -> String {
    match factors.tam {
        TamSlot::Infinitive => format!("to {root}"),
        TamSlot::PresentHabitual => {
            if root == "be" {
                return match (factors.person, factors.number) {
                    (Person::First, Number::Singular) => "am".into(),
                    (Person::Third, Number::Singular) => "is".into(),
                    _ => "are".into(),
                };
            }
            if factors.person == Person::Third && factors.number == Number::Singular {
                third_singular(root)
            } else {
                root.to_owned()
            }
        }
        TamSlot::PastPerfective => {
            if root == "be" && factors.number == Number::Plural || root == "be" && factors.person == Person::Second {
                "were".into()
            } else {
                past(root)
            }
        }
        TamSlot::Future => format!("will {root}"),
        TamSlot::ModalSubjunctive => format!("may {root}"),
        TamSlot::Imperative => root.to_owned(),
    }
}
