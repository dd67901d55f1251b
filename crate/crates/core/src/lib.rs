//! Morphology injection for English-Hindi factored translation corpora.
//!
//! Nouns and verbs from a bilingual lexicon are expanded into every
//! inflected form, paired with factored English sources, and appended to a
//! training corpus so that no root/suffix combination is missing from it.

pub mod corpus;
pub mod dictionary;
pub mod eval;
pub mod exec;
pub mod features;
pub mod noun;
pub mod script;
pub mod source;
pub mod token;
pub mod verb;
mod tsv;

pub use corpus::{
    emit_factored_corpus, inject, parse_factored_corpus, ragged_tokens, CorpusError, InjectMode, InjectOptions,
    InjectionReport, ParallelCorpus, ParseOptions, Side,
};
pub use dictionary::{
    build_combined_dict, build_noun_dict, build_verb_dict, normalize_factors, strip_to_surface, DictBuild, DictEntry,
    DictError, FactorScheme, FactorStep, WordFormDictionary,
};
pub use eval::{
    bleu, bleu_with, oov_count, oov_reduction, sparsity_report, BleuScore, EvalError, OovMode, OovReport,
    SparsityReport, VocabSet,
};
pub use exec::Exec;
pub use features::{Case, Gender, Number, Person, TamSlot};
pub use noun::{classify_noun, join_noun, noun_paradigm, NounClass, NounError, NounLexEntry, SuffixTable};
pub use token::{FactoredToken, TokenError};
pub use tsv::TsvError;
pub use verb::{join_verb, paradigm_space, verb_paradigm, VerbError, VerbFactors, VerbLexEntry, VerbSuffixTable};
