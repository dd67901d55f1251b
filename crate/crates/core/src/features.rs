//! Closed grammatical feature sets shared by the noun and verb paths.
//!
//! Every feature has two spellings: the factor value written into factored
//! tokens (`singular`, `oblique`, `past_perfective`) and the short code used
//! in the TSV data files (`sg`, `obl`, `m`, `3`).

use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! feature_enum {
    (
        $(#[$meta:meta])*
        $name:ident { $($variant:ident => $factor:literal, [$($code:literal),+]);+ $(;)? }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            /// Value as written in a factored token.
            pub fn factor(self) -> &'static str {
                match self {
                    $($name::$variant => $factor),+
                }
            }

            /// Parses a factor value.
            pub fn from_factor(s: &str) -> Option<Self> {
                match s {
                    $($factor => Some($name::$variant),)+
                    _ => None,
                }
            }

            /// Short code used in data files.
            pub fn code(self) -> &'static str {
                match self {
                    $($name::$variant => feature_enum!(@first $($code),+)),+
                }
            }

            /// Parses a data-file code. The long factor spelling is accepted too.
            pub fn from_code(s: &str) -> Option<Self> {
                match s {
                    $($($code)|+ => Some($name::$variant),)+
                    _ => Self::from_factor(s),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.factor())
            }
        }
    };
    (@first $first:literal $(, $rest:literal)*) => { $first };
}

feature_enum! {
    Number {
        Singular => "singular", ["sg"];
        Plural => "plural", ["pl"];
    }
}

feature_enum! {
    Case {
        Direct => "direct", ["dir"];
        Oblique => "oblique", ["obl"];
    }
}

feature_enum! {
    Gender {
        Masculine => "masculine", ["m"];
        Feminine => "feminine", ["f"];
    }
}

feature_enum! {
    Person {
        First => "first", ["1"];
        Second => "second", ["2"];
        Third => "third", ["3"];
    }
}

feature_enum! {
    /// Combined tense/aspect/modality slot.
    TamSlot {
        Infinitive => "infinitive", ["infinitive", "inf"];
        PresentHabitual => "present_habitual", ["present_habitual", "ph"];
        PastPerfective => "past_perfective", ["past_perfective", "pp"];
        Future => "future", ["future", "fut"];
        ModalSubjunctive => "modal_subjunctive", ["modal_subjunctive", "subj"];
        Imperative => "imperative", ["imperative", "imp"];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        for n in Number::ALL {
            assert_eq!(Number::from_code(n.code()), Some(*n));
            assert_eq!(Number::from_factor(n.factor()), Some(*n));
        }
        for t in TamSlot::ALL {
            assert_eq!(TamSlot::from_code(t.code()), Some(*t));
        }
        assert_eq!(Person::from_code("3"), Some(Person::Third));
        assert_eq!(Gender::from_code("feminine"), Some(Gender::Feminine));
        assert_eq!(Case::from_code("x"), None);
    }

    #[test]
    fn factor_vocabularies_are_disjoint() {
        // dictionary tokens are told apart by their factor values
        let case: Vec<_> = Case::ALL.iter().map(|c| c.factor()).collect();
        for p in Person::ALL {
            assert!(!case.contains(&p.factor()));
        }
    }
}
