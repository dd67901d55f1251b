//! The `morphinject` command line.
//!
//! Each pipeline stage is its own subcommand. Data goes to files or stdout,
//! diagnostics to stderr. Exit status is 0 on success, 1 for bad input
//! (reported as `file:line: message`) and 2 when an internal check fails.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use morphinject::source::{parse_conllu, Annotator, CaseRules, FactorMode, PronounTable, RelationAliases, TamRules};
use morphinject::verb::parse_verb_lexicon;
use morphinject::*;

pub const SCHEMA_VERSION: u32 = 1;
pub const DATA_DIR_ENV: &str = "MORPHINJECT_DATA_DIR";

const FORMATS_HELP: &str = "\
File formats:
  Lexicons and rule tables are UTF-8 TSV; blank lines and lines starting
  with '#' are ignored.
  Factored corpus: one sentence per line, LF endings, tokens separated by a
  single space, factors by '|', e.g. `dog|singular|direct`. The absent
  factor is the word `null`.
  Dictionary: one entry per line, source and target tokens separated by a
  tab. Surface dictionaries may have several space-separated source words.";

#[derive(Debug, Parser)]
#[command(name = "morphinject", version, about = "Generate Hindi word forms and inject them into factored training corpora", after_help = FORMATS_HELP)]
pub struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for corpus-scale work. Output is identical for any value.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Directory with rule-table overrides (noun_suffixes.tsv,
    /// verb_suffixes.tsv, pronouns.tsv, deprel_aliases.tsv, case_rules.tsv,
    /// tam_rules.tsv). Missing files fall back to the built-in tables.
    #[arg(long, global = true, env = DATA_DIR_ENV, value_name = "DIR")]
    pub data_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Factored,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorModeArg {
    Noun,
    Verb,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Noun,
    Verb,
    Combined,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OovModeArg {
    SourceCoverage,
    OutputPassthrough,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assign inflection classes A-E to Hindi nouns.
    #[command(after_help = "Lexicon: hindi_root <TAB> m|f [<TAB> countable 1|0 [<TAB> class A-E]]")]
    Classify(ClassifyArgs),
    /// Print all forms of one noun or verb.
    #[command(after_help = "Noun rows: number, case, surface, root, suffix.\n\
Verb rows: tam, gender, number, person, surface, root, suffix.\n\
With --english the English source token is printed first.")]
    Paradigm(ParadigmArgs),
    /// Add English factors to a dependency-parsed CoNLL-U file.
    #[command(after_help = "Input: CoNLL-U (10 tab-separated columns, blank line between sentences,\n\
Penn tags in XPOS, typed dependencies in DEPREL).\n\
Output: one factored sentence per line; nouns and verbs carry their lemma and factors.")]
    Annotate(AnnotateArgs),
    /// Build a word-form dictionary from bilingual lexicons.
    #[command(after_help = "Noun lexicon: english_root <TAB> hindi_root <TAB> m|f [<TAB> 1|0 [<TAB> A-E]]\n\
Verb lexicon: english_root <TAB> hindi_stem [<TAB> tam[:g[:n[:p]]]=surface ...]\n\
Output: dictionary, one `source <TAB> target` entry per line.")]
    BuildDict(BuildDictArgs),
    /// Append dictionary entries to a parallel corpus as one-entry sentence pairs.
    #[command(after_help = FORMATS_HELP)]
    Inject(InjectArgs),
    /// Count probe factor combinations that training never saw.
    #[command(after_help = "Probe: dictionary format, one `source <TAB> target` pair per line.")]
    Sparsity(SparsityArgs),
    /// Count out-of-vocabulary tokens against a training corpus.
    #[command(after_help = "Tokens: whitespace-separated text; only the surface before the first '|' is used.")]
    Oov(OovArgs),
    /// Corpus BLEU-4 of a candidate file against one reference file.
    #[command(after_help = "Both files: one tokenized sentence per line, tokens separated by whitespace.")]
    Bleu(BleuArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Noun lexicon file.
    #[arg(long, conflicts_with = "root")]
    pub lexicon: Option<PathBuf>,
    /// A single Hindi root.
    pub root: Option<String>,
    /// Gender of the single root.
    #[arg(long, value_parser = ["m", "f"])]
    pub gender: Option<String>,
    #[arg(long)]
    pub uncountable: bool,
}

#[derive(Debug, Args)]
pub struct ParadigmArgs {
    /// Hindi noun root or verb stem.
    pub root: String,
    /// Treat the root as a verb stem.
    #[arg(long)]
    pub verb: bool,
    /// Noun gender.
    #[arg(long, value_parser = ["m", "f"])]
    pub gender: Option<String>,
    #[arg(long)]
    pub uncountable: bool,
    /// Force a noun class.
    #[arg(long, value_parser = ["A", "B", "C", "D", "E"])]
    pub class: Option<String>,
    /// English root, printed as a factored source token.
    #[arg(long)]
    pub english: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub noun_table: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub verb_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnnotateArgs {
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = FactorModeArg::Both)]
    pub mode: FactorModeArg,
    /// Write every defaulted feature decision here (line, token, feature, value).
    #[arg(long, value_name = "FILE")]
    pub diagnostics: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildDictArgs {
    #[arg(long, value_name = "FILE")]
    pub nouns: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub verbs: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Factored)]
    pub mode: ModeArg,
    #[arg(long, value_name = "FILE")]
    pub noun_table: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub verb_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Source side of the corpus.
    #[arg(long, value_name = "FILE")]
    pub src: PathBuf,
    /// Target side of the corpus.
    #[arg(long, value_name = "FILE")]
    pub tgt: PathBuf,
    /// Pad narrower tokens with `null` instead of rejecting ragged widths.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args)]
pub struct InjectArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_name = "FILE")]
    pub dict: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub out_src: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub out_tgt: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Factored)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct SparsityArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_name = "FILE")]
    pub probe: PathBuf,
    /// Factor layout; inferred from the probe's token widths when omitted.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
}

#[derive(Debug, Args)]
pub struct OovArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_name = "FILE")]
    pub tokens: PathBuf,
    #[arg(long, value_enum, default_value_t = OovModeArg::OutputPassthrough)]
    pub mode: OovModeArg,
    /// Baseline OOV count; reports the percentage reduction to this run.
    #[arg(long, value_name = "N")]
    pub baseline: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BleuArgs {
    #[arg(long, value_name = "FILE")]
    pub candidate: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub reference: PathBuf,
    /// Add-one smoothing of 2- to 4-gram precisions.
    #[arg(long)]
    pub smooth: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    fn at(path: &Path, line: Option<usize>, msg: impl std::fmt::Display) -> Self {
        match line {
            Some(l) => CliError::Input(format!("{}:{l}: {msg}", path.display())),
            None => CliError::Input(format!("{}: {msg}", path.display())),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn invariant(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Internal(what.to_owned()))
    }
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::at(path, None, "no such file"))
    }
}

fn require_output(path: &Path) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !parent.is_dir() {
        return Err(CliError::at(path, None, "output directory does not exist"));
    }
    if path.is_dir() {
        return Err(CliError::at(path, None, "output is a directory"));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::at(path, None, e))
}

/// Writes all files through temporaries and renames them into place only
/// once every one of them is complete.
fn write_atomic(files: &[(&Path, &[u8])]) -> Result<()> {
    let mut pending = Vec::new();
    for (path, bytes) in files {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::at(path, None, e))?;
        tmp.write_all(bytes)
            .and_then(|_| tmp.flush())
            .map_err(|e| CliError::at(path, None, e))?;
        pending.push((tmp, *path));
    }
    for (tmp, path) in pending {
        tmp.persist(path).map_err(|e| CliError::at(path, None, e.error))?;
    }
    Ok(())
}

struct Ctx<'a> {
    cli: &'a Cli,
    exec: Exec,
    out: Vec<u8>,
    err: Vec<u8>,
}

impl Ctx<'_> {
    /// A rule table: an explicit path, else the data directory, else built in.
    fn table_path(&self, explicit: &Option<PathBuf>, file: &str) -> Option<PathBuf> {
        if let Some(p) = explicit {
            return Some(p.clone());
        }
        let p = self.cli.data_dir.as_ref()?.join(file);
        p.is_file().then_some(p)
    }

    fn load<T>(&self, explicit: &Option<PathBuf>, file: &str, parse: fn(&str) -> std::result::Result<T, TsvError>, default: fn() -> T) -> Result<T> {
        match self.table_path(explicit, file) {
            None => Ok(default()),
            Some(p) => {
                require_file(&p)?;
                parse(&read(&p)?).map_err(|e| CliError::at(&p, Some(e.line), &e.message))
            }
        }
    }

    fn noun_table(&self, explicit: &Option<PathBuf>) -> Result<SuffixTable> {
        self.load(explicit, "noun_suffixes.tsv", SuffixTable::parse, SuffixTable::hindi_default)
    }

    fn verb_table(&self, explicit: &Option<PathBuf>) -> Result<VerbSuffixTable> {
        self.load(explicit, "verb_suffixes.tsv", VerbSuffixTable::parse, VerbSuffixTable::hindi_default)
    }

    fn annotator(&self) -> Result<Annotator> {
        Ok(Annotator {
            pronouns: self.load(&None, "pronouns.tsv", PronounTable::parse, || Annotator::default().pronouns)?,
            aliases: self.load(&None, "deprel_aliases.tsv", RelationAliases::parse, || Annotator::default().aliases)?,
            case_rules: self.load(&None, "case_rules.tsv", CaseRules::parse, || Annotator::default().case_rules)?,
            tam_rules: self.load(&None, "tam_rules.tsv", TamRules::parse, || Annotator::default().tam_rules)?,
        })
    }

    fn report<T: Serialize>(&mut self, command: &str, body: &T, text: impl FnOnce(&mut String)) -> Result<()> {
        match self.cli.format {
            Format::Json => {
                #[derive(Serialize)]
                struct Envelope<'a, T> {
                    schema_version: u32,
                    command: &'a str,
                    #[serde(flatten)]
                    body: &'a T,
                }
                let env = Envelope {
                    schema_version: SCHEMA_VERSION,
                    command,
                    body,
                };
                let json = serde_json::to_string_pretty(&env).map_err(|e| CliError::Internal(e.to_string()))?;
                self.out.extend_from_slice(json.as_bytes());
                self.out.push(b'\n');
            }
            Format::Text => {
                let mut s = String::new();
                text(&mut s);
                self.out.extend_from_slice(s.as_bytes());
            }
        }
        Ok(())
    }

    fn warn(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.err, "warning: {msg}");
    }

    fn corpus(&self, args: &CorpusArgs) -> Result<ParallelCorpus> {
        let src = read(&args.src)?;
        let tgt = read(&args.tgt)?;
        let opts = ParseOptions {
            auto_normalize: args.normalize,
            exec: self.exec,
        };
        parse_factored_corpus(&src, &tgt, opts).map_err(|e| {
            let path = match e.side() {
                Some(Side::Target) => &args.tgt,
                _ => &args.src,
            };
            CliError::at(path, e.line(), &e)
        })
    }
}

fn gender_of(code: &Option<String>) -> Result<Gender> {
    let raw = code
        .as_deref()
        .ok_or_else(|| CliError::Input("a noun needs --gender m|f".into()))?;
    Gender::from_code(raw).ok_or_else(|| CliError::Input(format!("bad gender {raw:?}")))
}

fn opt(s: Option<&str>) -> &str {
    s.unwrap_or(token::NULL_FACTOR)
}

#[derive(Serialize)]
struct ClassifiedNoun {
    root: String,
    gender: Gender,
    class: NounClass,
}

fn classify(ctx: &mut Ctx, a: &ClassifyArgs) -> Result<()> {
    let entries = match (&a.lexicon, &a.root) {
        (Some(path), _) => {
            require_file(path)?;
            noun::parse_noun_lexicon(&read(path)?).map_err(|e| CliError::at(path, Some(e.line), &e.message))?
        }
        (None, Some(root)) => {
            let mut e = NounLexEntry::new(root, gender_of(&a.gender)?).map_err(|e| CliError::Input(e.to_string()))?;
            if a.uncountable {
                e = e.uncountable();
            }
            vec![e]
        }
        (None, None) => return Err(CliError::Input("give a ROOT or --lexicon FILE".into())),
    };
    let nouns = entries
        .iter()
        .map(|e| {
            Ok(ClassifiedNoun {
                root: e.hindi_root.clone(),
                gender: e.gender,
                class: classify_noun(e).map_err(|err| CliError::Input(format!("{}: {err}", e.hindi_root)))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    #[derive(Serialize)]
    struct Body<'a> {
        nouns: &'a [ClassifiedNoun],
    }
    ctx.report("classify", &Body { nouns: &nouns }, |s| {
        for n in &nouns {
            let _ = writeln!(s, "{}\t{}", n.root, n.class);
        }
    })
}

#[derive(Serialize)]
struct ParadigmRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<String>,
    cells: Vec<String>,
    surface: String,
    root: String,
    suffix: Option<String>,
}

fn paradigm(ctx: &mut Ctx, a: &ParadigmArgs) -> Result<()> {
    let bad = |e: &dyn std::fmt::Display| CliError::Input(format!("{}: {e}", a.root));
    let rows: Vec<ParadigmRow> = if a.verb {
        let table = ctx.verb_table(&a.verb_table)?;
        let english = a.english.clone().unwrap_or_default();
        let entry = VerbLexEntry::new(&english, &a.root).map_err(|e| bad(&e))?;
        verb_paradigm(&entry, &table)
            .map_err(|e| bad(&e))?
            .into_iter()
            .map(|r| {
                let f = r.factors;
                ParadigmRow {
                    source: a
                        .english
                        .as_ref()
                        .map(|en| format!("{en}|{}|{}|{}", f.number.factor(), f.person.factor(), f.tam.factor())),
                    cells: vec![f.tam.factor().into(), f.gender.factor().into(), f.number.factor().into(), f.person.factor().into()],
                    surface: r.surface,
                    root: entry.hindi_root.clone(),
                    suffix: r.suffix,
                }
            })
            .collect()
    } else {
        let table = ctx.noun_table(&a.noun_table)?;
        let mut entry = NounLexEntry::new(&a.root, gender_of(&a.gender)?).map_err(|e| bad(&e))?;
        if a.uncountable {
            entry = entry.uncountable();
        }
        if let Some(c) = &a.class {
            entry = entry.with_class(c.parse().map_err(|e: String| bad(&e))?);
        }
        noun_paradigm(&entry, &table)
            .map_err(|e| bad(&e))?
            .into_iter()
            .map(|r| ParadigmRow {
                source: a
                    .english
                    .as_ref()
                    .map(|en| format!("{en}|{}|{}", r.number.factor(), r.case.factor())),
                cells: vec![r.number.factor().into(), r.case.factor().into()],
                surface: r.surface,
                root: entry.hindi_root.clone(),
                suffix: r.suffix,
            })
            .collect()
    };
    #[derive(Serialize)]
    struct Body<'a> {
        rows: &'a [ParadigmRow],
    }
    ctx.report("paradigm", &Body { rows: &rows }, |s| {
        for r in &rows {
            if let Some(src) = &r.source {
                let _ = write!(s, "{src}\t");
            }
            let _ = writeln!(s, "{}\t{}\t{}\t{}", r.cells.join("\t"), r.surface, r.root, opt(r.suffix.as_deref()));
        }
    })
}

fn annotate(ctx: &mut Ctx, a: &AnnotateArgs) -> Result<()> {
    require_file(&a.input)?;
    require_output(&a.output)?;
    if let Some(d) = &a.diagnostics {
        require_output(d)?;
    }
    let annotator = ctx.annotator()?;
    let sentences = parse_conllu(&read(&a.input)?).map_err(|e| CliError::at(&a.input, Some(e.line), &e.message))?;
    let mode = match a.mode {
        FactorModeArg::Noun => FactorMode::Noun,
        FactorModeArg::Verb => FactorMode::Verb,
        FactorModeArg::Both => FactorMode::Both,
    };
    let annotated = annotator.annotate(&sentences, mode, ctx.exec);
    let mut text = String::new();
    let mut diag = String::new();
    let mut tokens = 0;
    let mut defaulted = 0;
    for s in &annotated {
        text.push_str(&token::join_line(&s.tokens));
        text.push('\n');
        tokens += s.tokens.len();
        defaulted += s.defaults.len();
        for d in &s.defaults {
            let _ = writeln!(diag, "{}\t{}\t{}\t{}", d.line, d.token, d.feature, d.value);
        }
    }
    let mut files: Vec<(&Path, &[u8])> = vec![(&a.output, text.as_bytes())];
    if let Some(d) = &a.diagnostics {
        files.push((d, diag.as_bytes()));
    }
    write_atomic(&files)?;
    #[derive(Serialize)]
    struct Body {
        sentences: usize,
        tokens: usize,
        factor_width: usize,
        defaulted: usize,
    }
    let body = Body {
        sentences: annotated.len(),
        tokens,
        factor_width: mode.width(),
        defaulted,
    };
    ctx.report("annotate", &body, |s| {
        let _ = writeln!(s, "sentences\t{}\ntokens\t{}\nfactor_width\t{}\ndefaulted\t{}", body.sentences, body.tokens, body.factor_width, body.defaulted);
    })
}

fn build_dict(ctx: &mut Ctx, a: &BuildDictArgs) -> Result<()> {
    if a.nouns.is_none() && a.verbs.is_none() {
        return Err(CliError::Input("give --nouns FILE, --verbs FILE or both".into()));
    }
    for p in a.nouns.iter().chain(&a.verbs) {
        require_file(p)?;
    }
    require_output(&a.output)?;
    let nouns = match &a.nouns {
        Some(p) => noun::parse_bilingual_noun_lexicon(&read(p)?).map_err(|e| CliError::at(p, Some(e.line), &e.message))?,
        None => Vec::new(),
    };
    let verbs = match &a.verbs {
        Some(p) => parse_verb_lexicon(&read(p)?).map_err(|e| CliError::at(p, Some(e.line), &e.message))?,
        None => Vec::new(),
    };
    let nt = ctx.noun_table(&a.noun_table)?;
    let vt = ctx.verb_table(&a.verb_table)?;
    let built = match (&a.nouns, &a.verbs) {
        (Some(_), None) => build_noun_dict(&nouns, &nt, ctx.exec),
        (None, Some(_)) => build_verb_dict(&verbs, &vt, ctx.exec),
        _ => build_combined_dict(&nouns, &nt, &verbs, &vt, ctx.exec),
    };
    let noun_count = nouns.len();
    for f in &built.failures {
        let (path, idx) = if f.index < noun_count && a.nouns.is_some() && built.dictionary.scheme.name != "verb" {
            (a.nouns.as_ref(), f.index)
        } else {
            (a.verbs.as_ref(), f.index)
        };
        let path = path.map(|p| p.display().to_string()).unwrap_or_default();
        ctx.warn(format_args!("{path}: entry {} ({}) skipped: {}", idx + 1, f.entry, f.message));
    }
    let dict = match a.mode {
        ModeArg::Factored => built.dictionary,
        ModeArg::Surface => strip_to_surface(&built.dictionary),
    };
    write_atomic(&[(&a.output, dict.to_text().as_bytes())])?;
    #[derive(Serialize)]
    struct Body<'a> {
        scheme: &'a str,
        entries: usize,
        failures: &'a [dictionary::BuildFailure],
    }
    let body = Body {
        scheme: &dict.scheme.name,
        entries: dict.len(),
        failures: &built.failures,
    };
    ctx.report("build-dict", &body, |s| {
        let _ = writeln!(s, "scheme\t{}\nentries\t{}\nfailures\t{}", body.scheme, body.entries, body.failures.len());
    })
}

fn read_dict(path: &Path, scheme: Option<FactorScheme>) -> Result<WordFormDictionary> {
    let text = read(path)?;
    let parsed = match scheme {
        Some(s) => WordFormDictionary::parse(&text, s),
        None => WordFormDictionary::parse_inferred(&text),
    };
    parsed.map_err(|e| match e {
        DictError::Parse { line, message } => CliError::at(path, Some(line), message),
        other => CliError::at(path, None, other),
    })
}

fn inject_cmd(ctx: &mut Ctx, a: &InjectArgs) -> Result<()> {
    require_file(&a.corpus.src)?;
    require_file(&a.corpus.tgt)?;
    require_file(&a.dict)?;
    require_output(&a.out_src)?;
    require_output(&a.out_tgt)?;
    let corpus = ctx.corpus(&a.corpus)?;
    let dict = read_dict(&a.dict, None)?;
    let opts = InjectOptions {
        mode: match a.mode {
            ModeArg::Factored => InjectMode::Factored,
            ModeArg::Surface => InjectMode::Surface,
        },
        normalize: a.corpus.normalize,
    };
    let (out, report) = inject(&corpus, &dict, opts).map_err(|e| CliError::at(&a.dict, None, e))?;
    invariant(
        report.entries_added + report.duplicates_skipped == report.entries_offered,
        "injection report does not add up",
    )?;
    invariant(out.len() == corpus.len() + report.entries_added, "injected line count")?;
    if a.mode == ModeArg::Factored {
        invariant(ragged_tokens(&out).is_empty(), "injected corpus has ragged factor widths")?;
    }
    let (s, t) = out.to_strings();
    write_atomic(&[(&a.out_src, s.as_bytes()), (&a.out_tgt, t.as_bytes())])?;
    #[derive(Serialize)]
    struct Body<'a> {
        lines_in: usize,
        lines_out: usize,
        #[serde(flatten)]
        report: &'a InjectionReport,
    }
    let body = Body {
        lines_in: corpus.len(),
        lines_out: out.len(),
        report: &report,
    };
    ctx.report("inject", &body, |s| {
        let _ = writeln!(
            s,
            "lines_in\t{}\nlines_out\t{}\nentries_offered\t{}\nentries_added\t{}\nduplicates_skipped\t{}\nnormalization_applied\t{}",
            body.lines_in, body.lines_out, report.entries_offered, report.entries_added, report.duplicates_skipped, report.normalization_applied
        );
    })
}

fn sparsity_cmd(ctx: &mut Ctx, a: &SparsityArgs) -> Result<()> {
    require_file(&a.corpus.src)?;
    require_file(&a.corpus.tgt)?;
    require_file(&a.probe)?;
    let scheme = a.scheme.map(|s| match s {
        SchemeArg::Noun => FactorScheme::noun(),
        SchemeArg::Verb => FactorScheme::verb(),
        SchemeArg::Combined => FactorScheme::combined(),
        SchemeArg::Surface => FactorScheme::surface(),
    });
    let train = ctx.corpus(&a.corpus)?;
    let probe_dict = read_dict(&a.probe, scheme)?;
    let probe: Vec<(FactoredToken, FactoredToken)> = probe_dict
        .entries()
        .iter()
        .flat_map(|e| e.source.iter().map(|s| (s.clone(), e.target.clone())))
        .collect();
    let report = sparsity_report(&train, &probe, &probe_dict.scheme, ctx.exec).map_err(|e| CliError::at(&a.probe, None, e))?;
    for step in report.translation.iter().chain(&report.generation) {
        invariant(step.unseen == step.unseen_list.len(), "unseen list length")?;
    }
    #[derive(Serialize)]
    struct Body<'a> {
        scheme: &'a str,
        probe_pairs: usize,
        #[serde(flatten)]
        report: &'a SparsityReport,
    }
    let body = Body {
        scheme: &probe_dict.scheme.name,
        probe_pairs: probe.len(),
        report: &report,
    };
    ctx.report("sparsity", &body, |s| {
        let _ = writeln!(s, "scheme\t{}\nprobe_pairs\t{}", body.scheme, body.probe_pairs);
        for (kind, steps) in [("translation", &report.translation), ("generation", &report.generation)] {
            for st in steps {
                let _ = writeln!(s, "{kind}\t{}\tseen {}\tunseen {}", st.step, st.seen, st.unseen);
                for u in &st.unseen_list {
                    let _ = writeln!(s, "  unseen\t{u}");
                }
            }
        }
    })
}

fn oov_cmd(ctx: &mut Ctx, a: &OovArgs) -> Result<()> {
    require_file(&a.corpus.src)?;
    require_file(&a.corpus.tgt)?;
    require_file(&a.tokens)?;
    let train = ctx.corpus(&a.corpus)?;
    let mode = match a.mode {
        OovModeArg::SourceCoverage => OovMode::SourceCoverage,
        OovModeArg::OutputPassthrough => OovMode::OutputPassthrough,
    };
    let vocab = VocabSet::from_corpus(&train, mode.vocab_side());
    let text = read(&a.tokens)?;
    let tokens: Vec<&str> = text
        .split_whitespace()
        .map(|t| t.split(token::FACTOR_SEPARATOR).next().unwrap_or(t))
        .collect();
    let report = oov_count(&tokens, &vocab);
    invariant(report.oov_tokens <= report.total_tokens, "more OOV tokens than tokens")?;
    let reduction = match a.baseline {
        Some(b) => Some(oov_reduction(b, report.oov_tokens as u64).map_err(|e| CliError::Input(format!("--baseline: {e}")))?),
        None => None,
    };
    #[derive(Serialize)]
    struct Body<'a> {
        mode: OovMode,
        vocab_size: usize,
        #[serde(flatten)]
        report: &'a OovReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        baseline: Option<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        reduction_percent: Option<f64>,
    }
    let body = Body {
        mode,
        vocab_size: vocab.len(),
        report: &report,
        baseline: a.baseline,
        reduction_percent: reduction,
    };
    ctx.report("oov", &body, |s| {
        let _ = writeln!(s, "total_tokens\t{}\noov_tokens\t{}\noov_types\t{}", report.total_tokens, report.oov_tokens, report.oov_types.len());
        if let Some(r) = reduction {
            let _ = writeln!(s, "reduction_percent\t{r:.2}");
        }
    })
}

fn bleu_cmd(ctx: &mut Ctx, a: &BleuArgs) -> Result<()> {
    require_file(&a.candidate)?;
    require_file(&a.reference)?;
    let cand = read(&a.candidate)?;
    let refs = read(&a.reference)?;
    let split = |t: &str| -> Vec<Vec<String>> {
        t.lines()
            .map(|l| l.split_whitespace().map(str::to_owned).collect())
            .collect()
    };
    let score = bleu_with(&split(&cand), &split(&refs), a.smooth).map_err(|e| CliError::at(&a.candidate, None, e))?;
    invariant((0.0..=1.0).contains(&score.score), "BLEU outside [0, 1]")?;
    ctx.report("bleu", &score, |s| {
        let p = score.precisions;
        let _ = writeln!(
            s,
            "BLEU {:.4}\tprecisions {:.4}/{:.4}/{:.4}/{:.4}\tBP {:.4}\tlength {}/{}",
            score.score, p[0], p[1], p[2], p[3], score.brevity_penalty, score.candidate_length, score.reference_length
        );
    })
}

fn execute(ctx: &mut Ctx) -> Result<()> {
    match &ctx.cli.command {
        Command::Classify(a) => classify(ctx, a),
        Command::Paradigm(a) => paradigm(ctx, a),
        Command::Annotate(a) => annotate(ctx, a),
        Command::BuildDict(a) => build_dict(ctx, a),
        Command::Inject(a) => inject_cmd(ctx, a),
        Command::Sparsity(a) => sparsity_cmd(ctx, a),
        Command::Oov(a) => oov_cmd(ctx, a),
        Command::Bleu(a) => bleu_cmd(ctx, a),
    }
}

fn run_parsed(cli: &Cli) -> (Result<()>, Vec<u8>, Vec<u8>) {
    let jobs = cli.jobs.unwrap_or(1);
    let exec = if jobs > 1 { Exec::Parallel } else { Exec::Sequential };
    let go = || {
        let mut ctx = Ctx {
            cli,
            exec,
            out: Vec::new(),
            err: Vec::new(),
        };
        let r = execute(&mut ctx);
        (r, ctx.out, ctx.err)
    };
    if jobs > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(go),
            Err(e) => (Err(CliError::Internal(format!("thread pool: {e}"))), Vec::new(), Vec::new()),
        }
    } else {
        go()
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(stdout, "{}", e.render());
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        1
                    } else {
                        0
                    }
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| run_parsed(&cli)));
    let (result, out, err) = match outcome {
        Ok(r) => r,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            (Err(CliError::Internal(msg)), Vec::new(), Vec::new())
        }
    };
    let _ = stderr.write_all(&err);
    match result {
        Ok(()) => match stdout.write_all(&out).and_then(|_| stdout.flush()) {
            Ok(()) => 0,
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: writing output: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
