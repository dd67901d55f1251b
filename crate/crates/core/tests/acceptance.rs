//! Acceptance criteria, one PASS/FAIL line each.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use morphinject::script::nfc;
use morphinject::verb::{parse_verb_lexicon, FactorPattern};
use morphinject::*;

const NOUNS: &str = include_str!("fixtures/nouns_golden.tsv");
const VERBS: &str = include_str!("fixtures/verbs_golden.tsv");
const VERB_LEXICON: &str = include_str!("fixtures/verbs_lexicon.tsv");

struct GoldenNoun {
    english: String,
    entry: NounLexEntry,
    class: NounClass,
    forms: [String; 4],
}

fn golden_nouns() -> Vec<GoldenNoun> {
    NOUNS
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let r: Vec<&str> = l.split('\t').collect();
            let mut entry = NounLexEntry::new(r[1], Gender::from_code(r[2]).unwrap()).unwrap();
            if r[3] == "0" {
                entry = entry.uncountable();
            }
            if r[4] != "-" {
                entry = entry.with_class(r[4].parse().unwrap());
            }
            GoldenNoun {
                english: r[0].to_owned(),
                entry,
                class: r[5].parse().unwrap(),
                forms: [nfc(r[6]), nfc(r[7]), nfc(r[8]), nfc(r[9])],
            }
        })
        .collect()
}

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn c1_dog_paradigm() -> Outcome {
    let table = SuffixTable::hindi_default();
    let dog = NounLexEntry::new("कुत्ता", Gender::Masculine).unwrap();
    let rows = noun_paradigm(&dog, &table).map_err(|e| e.to_string())?;
    let got: Vec<(Number, Case, Option<&str>, &str)> = rows
        .iter()
        .map(|r| (r.number, r.case, r.suffix.as_deref(), r.surface.as_str()))
        .collect();
    let want = vec![
        (Number::Singular, Case::Direct, None, "कुत्ता"),
        (Number::Singular, Case::Oblique, Some("ए"), "कुत्ते"),
        (Number::Plural, Case::Direct, Some("ए"), "कुत्ते"),
        (Number::Plural, Case::Oblique, Some("ओं"), "कुत्तों"),
    ];
    check(got == want, format!("rows {got:?}"))?;
    let runs = 200;
    let start = Instant::now();
    for _ in 0..runs {
        std::hint::black_box(noun_paradigm(&dog, &table).unwrap());
    }
    let per_call = start.elapsed() / runs;
    check(per_call < Duration::from_millis(1), format!("{per_call:?} per call"))?;
    Ok(format!("4 rows exact, {per_call:?} per call"))
}

fn c2_class_examples() -> Outcome {
    let examples: [(&str, Gender, bool, NounClass); 15] = [
        ("भूख", Gender::Feminine, false, NounClass::A),
        ("क्रोध", Gender::Masculine, false, NounClass::A),
        ("प्यार", Gender::Masculine, false, NounClass::A),
        ("लड़की", Gender::Feminine, true, NounClass::B),
        ("शक्ति", Gender::Feminine, true, NounClass::B),
        ("नदी", Gender::Feminine, true, NounClass::B),
        ("रात", Gender::Feminine, true, NounClass::C),
        ("माला", Gender::Feminine, true, NounClass::C),
        ("बहू", Gender::Feminine, true, NounClass::C),
        ("लड़का", Gender::Masculine, true, NounClass::D),
        ("धागा", Gender::Masculine, true, NounClass::D),
        ("भांजा", Gender::Masculine, true, NounClass::D),
        ("आलू", Gender::Masculine, true, NounClass::E),
        ("साधू", Gender::Masculine, true, NounClass::E),
        ("माली", Gender::Masculine, true, NounClass::E),
    ];
    for (root, gender, countable, want) in examples {
        let mut e = NounLexEntry::new(root, gender).unwrap();
        if !countable {
            e = e.uncountable();
        }
        let got = classify_noun(&e).map_err(|e| e.to_string())?;
        check(got == want, format!("{root}: {got} != {want}"))?;
    }
    Ok("15/15 example nouns".into())
}

fn c3_joiner_fixtures() -> Outcome {
    let table = SuffixTable::hindi_default();
    let nouns = golden_nouns();
    let mut per_class = [0usize; 5];
    for g in &nouns {
        check(classify_noun(&g.entry).ok() == Some(g.class), format!("class of {}", g.entry.hindi_root))?;
        let got: Vec<String> = noun_paradigm(&g.entry, &table)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|r| r.surface)
            .collect();
        check(got == g.forms, format!("{}: {got:?}", g.entry.hindi_root))?;
        per_class[NounClass::ALL.iter().position(|c| *c == g.class).unwrap()] += 1;
    }
    check(per_class[1..].iter().all(|&n| n >= 20), format!("class counts {per_class:?}"))?;

    let vtable = VerbSuffixTable::hindi_default();
    let lexicon = parse_verb_lexicon(VERB_LEXICON).map_err(|e| e.to_string())?;
    let mut cells = 0;
    for l in VERBS.lines().filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let r: Vec<&str> = l.split('\t').collect();
        let entry = lexicon.iter().find(|e| e.english_root == r[0]).ok_or("verb missing")?;
        let p = FactorPattern::parse(r[1])?;
        let f = VerbFactors::new(p.tam, p.gender.unwrap(), p.number.unwrap(), p.person.unwrap());
        let row = verb_paradigm(entry, &vtable)
            .map_err(|e| e.to_string())?
            .into_iter()
            .find(|row| row.factors == f)
            .ok_or("cell outside grid")?;
        check(row.surface == nfc(r[2]), format!("{} {}: {}", r[0], r[1], row.surface))?;
        cells += 1;
    }
    check(lexicon.len() >= 10, "fewer than 10 verbs")?;
    Ok(format!(
        "{} nouns (B..E: {:?}), {} verb cells over {} verbs, all exact",
        nouns.len(),
        &per_class[1..],
        cells,
        lexicon.len()
    ))
}

/// Counts probe pairs whose (root, suffix) occurs on no training target
/// token, by scanning every token.
fn brute_force_unseen(train: &ParallelCorpus, probe: &[(FactoredToken, FactoredToken)]) -> usize {
    let mut distinct: Vec<(String, String)> = Vec::new();
    for (_, t) in probe {
        let key = (t.factors()[0].clone(), t.factors()[1].clone());
        if !distinct.contains(&key) {
            distinct.push(key);
        }
    }
    distinct
        .iter()
        .filter(|(root, suffix)| {
            !train
                .pairs
                .iter()
                .flat_map(|(_, t)| t.iter())
                .any(|tok| tok.factors().len() >= 2 && &tok.factors()[0] == root && &tok.factors()[1] == suffix)
        })
        .count()
}

fn tok(s: &str) -> FactoredToken {
    FactoredToken::parse(s).unwrap()
}

fn c4_sparsity_closure() -> Outcome {
    let start = Instant::now();
    let nouns: Vec<GoldenNoun> = golden_nouns()
        .into_iter()
        .filter(|g| g.class != NounClass::A)
        .take(50)
        .collect();
    check(nouns.len() == 50, "need 50 nouns")?;
    let pl_obl_suffix = |c: NounClass| if c == NounClass::B { "यों" } else { "ओं" };
    let mut train = ParallelCorpus::default();
    let mut probe = Vec::new();
    for g in &nouns {
        let root = &g.entry.hindi_root;
        train.pairs.push((
            vec![tok(&format!("{}|singular|direct", g.english))],
            vec![tok(&format!("{}|{root}|null", g.forms[0]))],
        ));
        probe.push((
            tok(&format!("{}|plural|oblique", g.english)),
            tok(&format!("{}|{root}|{}", g.forms[3], pl_obl_suffix(g.class))),
        ));
    }
    let scheme = FactorScheme::noun();
    let before = sparsity_report(&train, &probe, &scheme, Exec::Sequential).map_err(|e| e.to_string())?;
    let oracle_before = brute_force_unseen(&train, &probe);
    let probe_words: Vec<&str> = probe.iter().map(|(_, t)| t.surface()).collect();
    let oov_before = oov_count(&probe_words, &VocabSet::from_corpus(&train, Side::Target)).oov_tokens;

    let lexicon: Vec<(String, NounLexEntry)> = nouns.iter().map(|g| (g.english.clone(), g.entry.clone())).collect();
    let built = build_noun_dict(&lexicon, &SuffixTable::hindi_default(), Exec::Parallel);
    check(built.failures.is_empty(), "build failures")?;
    let (augmented, _) = inject(&train, &built.dictionary, InjectOptions::default()).map_err(|e| e.to_string())?;
    let after = sparsity_report(&augmented, &probe, &scheme, Exec::Parallel).map_err(|e| e.to_string())?;
    let oracle_after = brute_force_unseen(&augmented, &probe);
    let oov_after = oov_count(&probe_words, &VocabSet::from_corpus(&augmented, Side::Target)).oov_tokens;

    let (ub, ua) = (before.unseen_generation(), after.unseen_generation());
    check(ub == 50 && oracle_before == 50, format!("unseen before {ub}, oracle {oracle_before}"))?;
    check(ua == 0 && oracle_after == 0, format!("unseen after {ua}, oracle {oracle_after}"))?;
    check(oov_before == 50 && oov_after == 0, format!("oov {oov_before} -> {oov_after}"))?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(5), format!("{elapsed:?}"))?;
    Ok(format!("unseen generation 50 -> 0, probe OOV 50 -> 0, {elapsed:?}"))
}

fn sample_corpus() -> ParallelCorpus {
    let src = include_str!("fixtures/corpus/nouns.en");
    let tgt = include_str!("fixtures/corpus/nouns.hi");
    parse_factored_corpus(src, tgt, ParseOptions::default()).unwrap()
}

fn sample_lexicon() -> Vec<(String, NounLexEntry)> {
    golden_nouns()
        .into_iter()
        .map(|g| (g.english, g.entry))
        .collect()
}

fn c5_injection_bookkeeping() -> Outcome {
    let corpus = sample_corpus();
    let (orig_src, orig_tgt) = corpus.to_strings();
    let dict = build_noun_dict(&sample_lexicon(), &SuffixTable::hindi_default(), Exec::Sequential).dictionary;
    let (once, r1) = inject(&corpus, &dict, InjectOptions::default()).map_err(|e| e.to_string())?;
    let (twice, r2) = inject(&once, &dict, InjectOptions::default()).map_err(|e| e.to_string())?;
    for r in [&r1, &r2] {
        check(
            r.entries_added + r.duplicates_skipped == r.entries_offered,
            format!("report arithmetic {r:?}"),
        )?;
    }
    check(r2.duplicates_skipped == r2.entries_offered, format!("second pass {r2:?}"))?;
    for c in [&once, &twice] {
        let (s, t) = c.to_strings();
        check(s.starts_with(&orig_src) && t.starts_with(&orig_tgt), "original prefix changed")?;
    }
    Ok(format!(
        "pass 1 added {} of {}, pass 2 skipped {} of {}",
        r1.entries_added, r1.entries_offered, r2.duplicates_skipped, r2.entries_offered
    ))
}

fn c6_width_invariant() -> Outcome {
    // a combined-width corpus (source 3, target 2) receiving a noun dictionary
    let corpus = parse_factored_corpus(
        "the|null|null|null dog|singular|direct|null runs|singular|third|present_habitual\n",
        "कुत्ता|कुत्ता|null दौड़ता|दौड़|ता है|null|null\n",
        ParseOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let dict = build_noun_dict(&sample_lexicon(), &SuffixTable::hindi_default(), Exec::Sequential).dictionary;
    let mut normalized = WordFormDictionary::new(FactorScheme::combined());
    for e in dict.entries() {
        let source = normalize_factors(&e.source, 3).map_err(|e| e.to_string())?;
        let target = normalize_factors(std::slice::from_ref(&e.target), 2).map_err(|e| e.to_string())?;
        normalized
            .push(DictEntry {
                source,
                target: target.into_iter().next().unwrap(),
            })
            .map_err(|e| e.to_string())?;
    }
    let (out, _) = inject(&corpus, &normalized, InjectOptions::default()).map_err(|e| e.to_string())?;
    let (s, t) = out.to_strings();
    let reparsed = parse_factored_corpus(&s, &t, ParseOptions::default()).map_err(|e| e.to_string())?;
    let ragged = ragged_tokens(&reparsed);
    check(ragged.is_empty(), format!("{} ragged tokens", ragged.len()))?;

    // unnormalized dictionary with the normalize flag takes the same path
    let (out2, r) = inject(&corpus, &dict, InjectOptions { normalize: true, ..Default::default() }).map_err(|e| e.to_string())?;
    check(r.normalization_applied && ragged_tokens(&out2).is_empty(), "flagged normalization")?;
    check(out2 == out, "normalize flag differs from explicit normalization")?;
    Ok(format!("{} lines validated, 0 ragged", out.len()))
}

fn c7_round_trip() -> Outcome {
    let fixtures = [
        (include_str!("fixtures/corpus/nouns.en"), include_str!("fixtures/corpus/nouns.hi")),
        (include_str!("fixtures/corpus/surface.en"), include_str!("fixtures/corpus/surface.hi")),
    ];
    for (src, tgt) in fixtures {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let c = parse_factored_corpus(src, tgt, ParseOptions { exec, ..Default::default() }).map_err(|e| e.to_string())?;
            let mut s = Vec::new();
            let mut t = Vec::new();
            emit_factored_corpus(&c, &mut s, &mut t).map_err(|e| e.to_string())?;
            check(s == src.as_bytes() && t == tgt.as_bytes(), "bytes differ")?;
        }
    }
    Ok(format!("{} fixture corpora byte-identical", fixtures.len()))
}

/// Modified n-gram precision counts by direct enumeration of sub-slices.
fn oracle_counts(cands: &[Vec<&str>], refs: &[Vec<&str>], n: usize) -> (usize, usize) {
    let mut matched = 0;
    let mut total = 0;
    for (c, r) in cands.iter().zip(refs) {
        if c.len() < n {
            continue;
        }
        let grams: Vec<&[&str]> = (0..=c.len() - n).map(|i| &c[i..i + n]).collect();
        total += grams.len();
        let mut done: Vec<&[&str]> = Vec::new();
        for g in &grams {
            if done.contains(g) {
                continue;
            }
            done.push(g);
            let in_cand = grams.iter().filter(|x| *x == g).count();
            let in_ref = if r.len() < n {
                0
            } else {
                (0..=r.len() - n).filter(|&i| &r[i..i + n] == *g).count()
            };
            matched += in_cand.min(in_ref);
        }
    }
    (matched, total)
}

fn c8_bleu() -> Outcome {
    fn split(s: &str) -> Vec<&str> {
        s.split(' ').collect()
    }
    let identity = vec![
        split("the cat is sitting on the mat today"),
        split("there is a dog in the big garden"),
    ];
    let id = bleu(&identity, &identity).map_err(|e| e.to_string())?;
    check(id.score == 1.0, format!("identity score {}", id.score))?;

    let cands = vec![split("the cat sat on the mat"), split("a dog is running in the park now")];
    let refs = vec![
        split("the cat is sitting on the mat"),
        split("the dog is running in the big park now"),
    ];
    let got = bleu(&cands, &refs).map_err(|e| e.to_string())?;
    let mut log_sum = 0.0;
    for n in 1..=4 {
        let (m, t) = oracle_counts(&cands, &refs, n);
        log_sum += (m as f64 / t as f64).ln();
    }
    let c: usize = cands.iter().map(Vec::len).sum();
    let r: usize = refs.iter().map(Vec::len).sum();
    let bp = if c < r { (1.0 - r as f64 / c as f64).exp() } else { 1.0 };
    let want = bp * (log_sum / 4.0).exp();
    check((got.score - want).abs() < 1e-9, format!("{} vs oracle {want}", got.score))?;

    let rc: Vec<_> = cands.iter().rev().cloned().collect();
    let rr: Vec<_> = refs.iter().rev().cloned().collect();
    let permuted = bleu(&rc, &rr).map_err(|e| e.to_string())?;
    check((permuted.score - got.score).abs() < 1e-12, "permutation changed the score")?;
    Ok(format!("identity 1.0, hand case {:.6} == oracle, permutation stable", got.score))
}

fn c9_oov_reduction() -> Outcome {
    let r = oov_reduction(2130, 1839).map_err(|e| e.to_string())?;
    check((r - 13.66).abs() <= 0.01, format!("{r}"))?;
    Ok(format!("{r:.4}%"))
}

/// build-dict -> inject -> sparsity -> oov, rendered to bytes.
fn pipeline(exec: Exec) -> Vec<u8> {
    let lexicon = sample_lexicon();
    let verbs = parse_verb_lexicon(VERB_LEXICON).unwrap();
    let built = build_combined_dict(
        &lexicon,
        &SuffixTable::hindi_default(),
        &verbs,
        &VerbSuffixTable::hindi_default(),
        exec,
    );
    let train = parse_factored_corpus(
        "the|null|null|null dog|singular|direct|null runs|singular|third|present_habitual\n",
        "कुत्ता|कुत्ता|null दौड़ता|दौड़|ता है|null|null\n",
        ParseOptions { exec, ..Default::default() },
    )
    .unwrap();
    let (augmented, report) = inject(&train, &built.dictionary, InjectOptions::default()).unwrap();
    let probe: Vec<(FactoredToken, FactoredToken)> = built
        .dictionary
        .entries()
        .iter()
        .map(|e| (e.source[0].clone(), e.target.clone()))
        .collect();
    let sparsity = sparsity_report(&train, &probe, &FactorScheme::combined(), exec).unwrap();
    let words: Vec<&str> = probe.iter().map(|(_, t)| t.surface()).collect();
    let oov = oov_count(&words, &VocabSet::from_corpus(&augmented, Side::Target));
    let (s, t) = augmented.to_strings();
    let mut out = built.dictionary.to_text().into_bytes();
    out.extend(s.bytes());
    out.extend(t.bytes());
    out.extend(serde_json::to_vec(&report).unwrap());
    out.extend(serde_json::to_vec(&sparsity).unwrap());
    out.extend(serde_json::to_vec(&oov).unwrap());
    out
}

fn c10_determinism() -> Outcome {
    let a = pipeline(Exec::Sequential);
    let b = pipeline(Exec::Sequential);
    let c = pipeline(Exec::Parallel);
    check(a == b, "two sequential runs differ")?;
    check(a == c, "parallel run differs from sequential")?;
    Ok(format!("{} output bytes identical across 3 runs", a.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let suite = Instant::now();
    let criteria: [Criterion; 10] = [
        ("dog paradigm", c1_dog_paradigm),
        ("noun class examples", c2_class_examples),
        ("joiner fixtures", c3_joiner_fixtures),
        ("sparsity closure", c4_sparsity_closure),
        ("injection bookkeeping", c5_injection_bookkeeping),
        ("factor-width invariant", c6_width_invariant),
        ("corpus round trip", c7_round_trip),
        ("BLEU", c8_bleu),
        ("OOV reduction", c9_oov_reduction),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    let elapsed = suite.elapsed();
    println!("acceptance: {}/{} passed in {elapsed:?}", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
