//! OOV counts, factor-combination coverage and corpus BLEU.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ParallelCorpus, Side};
use crate::dictionary::{FactorScheme, FactorStep};
use crate::exec::Exec;
use crate::token::FactoredToken;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("baseline OOV count is zero")]
    ZeroBaseline,
    #[error("{candidates} candidate sentences but {references} references")]
    LengthMismatch { candidates: usize, references: usize },
    #[error("no sentences to score")]
    EmptyCorpus,
    #[error("{what} tokens have {found} factors, scheme expects {expected}")]
    WidthIncompatible {
        what: &'static str,
        found: usize,
        expected: usize,
    },
}

/// A set of exact strings.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VocabSet(pub BTreeSet<String>);

impl VocabSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, s: &str) -> bool {
        self.0.contains(s)
    }

    pub fn insert(&mut self, s: impl Into<String>) -> bool {
        self.0.insert(s.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Surfaces of all tokens on one side of a corpus.
    pub fn from_corpus(corpus: &ParallelCorpus, side: Side) -> Self {
        corpus.tokens(side).map(|t| t.surface().to_owned()).collect()
    }
}

impl<S: Into<String>> FromIterator<S> for VocabSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        VocabSet(iter.into_iter().map(Into::into).collect())
    }
}

/// What an OOV count measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OovMode {
    /// Source tokens the training source side never saw.
    SourceCoverage,
    /// Tokens of a system output missing from the training target side,
    /// i.e. words the decoder copied through untranslated.
    #[default]
    OutputPassthrough,
}

impl OovMode {
    /// Which training side holds the vocabulary for this mode.
    pub fn vocab_side(self) -> Side {
        match self {
            OovMode::SourceCoverage => Side::Source,
            OovMode::OutputPassthrough => Side::Target,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OovReport {
    pub total_tokens: usize,
    pub oov_tokens: usize,
    /// Distinct, sorted.
    pub oov_types: Vec<String>,
}

pub fn oov_count<S: AsRef<str>>(tokens: &[S], vocab: &VocabSet) -> OovReport {
    let mut types = BTreeSet::new();
    let mut oov_tokens = 0;
    for t in tokens {
        let t = t.as_ref();
        if !vocab.contains(t) {
            oov_tokens += 1;
            types.insert(t);
        }
    }
    OovReport {
        total_tokens: tokens.len(),
        oov_tokens,
        oov_types: types.into_iter().map(str::to_owned).collect(),
    }
}

/// Percentage drop from `baseline` to `augmented`: 100 (b − a) / b.
pub fn oov_reduction(baseline: u64, augmented: u64) -> Result<f64, EvalError> {
    if baseline == 0 {
        return Err(EvalError::ZeroBaseline);
    }
    Ok(100.0 * (baseline as f64 - augmented as f64) / baseline as f64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCoverage {
    pub step: String,
    pub seen: usize,
    pub unseen: usize,
    /// Projections absent from training, `|`-joined and sorted.
    pub unseen_list: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityReport {
    pub translation: Vec<StepCoverage>,
    pub generation: Vec<StepCoverage>,
}

impl SparsityReport {
    pub fn unseen_generation(&self) -> usize {
        self.generation.iter().map(|s| s.unseen).sum()
    }

    pub fn unseen_translation(&self) -> usize {
        self.translation.iter().map(|s| s.unseen).sum()
    }
}

fn project(token: &FactoredToken, positions: &[usize]) -> String {
    let mut out = String::new();
    for (i, &p) in positions.iter().enumerate() {
        if i > 0 {
            out.push('|');
        }
        out.push_str(token.piece(p).unwrap_or_default());
    }
    out
}

fn check_width(what: &'static str, found: Option<usize>, expected: usize) -> Result<(), EvalError> {
    match found {
        Some(found) if found != expected => Err(EvalError::WidthIncompatible { what, found, expected }),
        _ => Ok(()),
    }
}

fn coverage<'a>(
    step: &FactorStep,
    positions: &[usize],
    probes: impl Iterator<Item = &'a FactoredToken>,
    seen_in_train: &HashSet<String>,
) -> StepCoverage {
    let distinct: BTreeSet<String> = probes.map(|t| project(t, positions)).collect();
    let unseen_list: Vec<String> = distinct.iter().filter(|p| !seen_in_train.contains(*p)).cloned().collect();
    StepCoverage {
        step: step.to_string(),
        seen: distinct.len() - unseen_list.len(),
        unseen: unseen_list.len(),
        unseen_list,
    }
}

/// Which probe factor combinations never occur in training.
///
/// A translation step is unseen for a probe source token when its
/// projection onto the step's source factors appears on no source token of
/// a training pair with a non-empty target. A generation step is unseen
/// when the target projection onto the step's input factors appears on no
/// training target token.
pub fn sparsity_report(
    train: &ParallelCorpus,
    probe: &[(FactoredToken, FactoredToken)],
    scheme: &FactorScheme,
    exec: Exec,
) -> Result<SparsityReport, EvalError> {
    let sw = scheme.source_width();
    let tw = scheme.target_width();
    check_width("training source", train.width(Side::Source), sw)?;
    check_width("training target", train.width(Side::Target), tw)?;
    for (s, t) in probe {
        check_width("probe source", Some(s.width()), sw)?;
        check_width("probe target", Some(t.width()), tw)?;
    }

    let projections = |positions: &[usize], side: Side| -> HashSet<String> {
        let per_line = exec.map(&train.pairs, |(s, t)| {
            let (line, other) = match side {
                Side::Source => (s, t),
                Side::Target => (t, s),
            };
            if side == Side::Source && other.is_empty() {
                return Vec::new();
            }
            line.iter().map(|tok| project(tok, positions)).collect::<Vec<_>>()
        });
        per_line.into_iter().flatten().collect()
    };

    let translation = scheme
        .translation_steps
        .iter()
        .map(|step| {
            let pos = scheme.positions(false, &step.from);
            let seen = projections(&pos, Side::Source);
            coverage(step, &pos, probe.iter().map(|(s, _)| s), &seen)
        })
        .collect();
    let generation = scheme
        .generation_steps
        .iter()
        .map(|step| {
            let pos = scheme.positions(true, &step.from);
            let seen = projections(&pos, Side::Target);
            coverage(step, &pos, probe.iter().map(|(_, t)| t), &seen)
        })
        .collect();
    Ok(SparsityReport { translation, generation })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuScore {
    pub score: f64,
    pub precisions: [f64; 4],
    /// `exp(1 − r/c)` when the candidate is shorter, else 1; 0 for an
    /// empty candidate.
    pub brevity_penalty: f64,
    pub candidate_length: usize,
    pub reference_length: usize,
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w.iter().map(AsRef::as_ref).collect()).or_insert(0) += 1;
        }
    }
    counts
}

/// Corpus BLEU-4 against one reference per sentence, without smoothing.
pub fn bleu<S: AsRef<str>>(candidates: &[Vec<S>], references: &[Vec<S>]) -> Result<BleuScore, EvalError> {
    bleu_with(candidates, references, false)
}

/// As [`bleu`]; with `smoothing`, higher-order precisions use add-one
/// counts so a missing 4-gram does not zero the score.
pub fn bleu_with<S: AsRef<str>>(
    candidates: &[Vec<S>],
    references: &[Vec<S>],
    smoothing: bool,
) -> Result<BleuScore, EvalError> {
    if candidates.len() != references.len() {
        return Err(EvalError::LengthMismatch {
            candidates: candidates.len(),
            references: references.len(),
        });
    }
    if candidates.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut matches = [0u64; 4];
    let mut totals = [0u64; 4];
    let mut c_len = 0;
    let mut r_len = 0;
    for (cand, reference) in candidates.iter().zip(references) {
        c_len += cand.len();
        r_len += reference.len();
        for n in 1..=4 {
            let ref_counts = ngram_counts(reference, n);
            for (gram, count) in ngram_counts(cand, n) {
                let clip = ref_counts.get(&gram).copied().unwrap_or(0);
                matches[n - 1] += count.min(clip) as u64;
                totals[n - 1] += count as u64;
            }
        }
    }
    let mut precisions = [0.0; 4];
    for n in 0..4 {
        let (m, t) = if smoothing && n > 0 {
            (matches[n] + 1, totals[n] + 1)
        } else {
            (matches[n], totals[n])
        };
        precisions[n] = if t == 0 { 0.0 } else { m as f64 / t as f64 };
    }
    let brevity_penalty = if c_len == 0 {
        0.0
    } else if c_len < r_len {
        (1.0 - r_len as f64 / c_len as f64).exp()
    } else {
        1.0
    };
    let score = if precisions.contains(&0.0) {
        0.0
    } else {
        let log_mean = precisions.iter().map(|p| p.ln()).sum::<f64>() / 4.0;
        brevity_penalty * log_mean.exp()
    };
    Ok(BleuScore {
        score,
        precisions,
        brevity_penalty,
        candidate_length: c_len,
        reference_length: r_len,
    })
}
