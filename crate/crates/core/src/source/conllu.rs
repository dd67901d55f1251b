//! CoNLL-U reader.
//!
//! Only the columns the factor extractor needs are kept. Multiword token
//! ranges (`3-4`) and empty nodes (`5.1`) are skipped.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ConlluError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConlluToken {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    /// 0 is the root.
    pub head: usize,
    pub deprel: String,
}

impl ConlluToken {
    /// Convenience constructor for tests and hand-built sentences.
    pub fn new(id: usize, form: &str, lemma: &str, xpos: &str, head: usize, deprel: &str) -> Self {
        ConlluToken {
            id,
            form: form.to_owned(),
            lemma: lemma.to_owned(),
            upos: "_".to_owned(),
            xpos: xpos.to_owned(),
            head,
            deprel: deprel.to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sentence {
    pub tokens: Vec<ConlluToken>,
    /// Line of the first token, for diagnostics.
    pub line: usize,
}

impl Sentence {
    pub fn new(tokens: Vec<ConlluToken>) -> Self {
        Sentence { tokens, line: 0 }
    }

    pub fn get(&self, id: usize) -> Option<&ConlluToken> {
        self.tokens.iter().find(|t| t.id == id)
    }

    pub fn head_of(&self, token: &ConlluToken) -> Option<&ConlluToken> {
        self.get(token.head)
    }

    pub fn children<'s>(&'s self, token: &'s ConlluToken) -> impl Iterator<Item = &'s ConlluToken> + 's {
        self.tokens.iter().filter(move |t| t.head == token.id && t.id != token.id)
    }

    /// The token directly before `token` in surface order.
    pub fn previous(&self, token: &ConlluToken) -> Option<&ConlluToken> {
        let pos = self.tokens.iter().position(|t| t.id == token.id)?;
        pos.checked_sub(1).map(|p| &self.tokens[p])
    }

    fn validate(&self) -> Result<(), ConlluError> {
        let mut ids: Vec<usize> = self.tokens.iter().map(|t| t.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(ConlluError {
                line: self.line,
                message: "duplicate token id in sentence".into(),
            });
        }
        for t in &self.tokens {
            if t.head != 0 && ids.binary_search(&t.head).is_err() {
                return Err(ConlluError {
                    line: self.line,
                    message: format!("token {} has head {} which is not in the sentence", t.id, t.head),
                });
            }
        }
        Ok(())
    }
}

pub fn parse_conllu(text: &str) -> Result<Vec<Sentence>, ConlluError> {
    let mut sentences = Vec::new();
    let mut current = Sentence::default();
    let flush = |current: &mut Sentence, sentences: &mut Vec<Sentence>| -> Result<(), ConlluError> {
        if !current.tokens.is_empty() {
            current.validate()?;
            sentences.push(std::mem::take(current));
        }
        Ok(())
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            flush(&mut current, &mut sentences)?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let err = |message: String| ConlluError {
            line: line_no,
            message,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(err(format!("expected 10 tab-separated columns, found {}", cols.len())));
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let id: usize = cols[0]
            .parse()
            .ok()
            .filter(|&id| id > 0)
            .ok_or_else(|| err(format!("bad token id {:?}", cols[0])))?;
        let head: usize = cols[6]
            .parse()
            .map_err(|_| err(format!("bad head {:?}", cols[6])))?;
        if current.tokens.is_empty() {
            current.line = line_no;
        }
        current.tokens.push(ConlluToken {
            id,
            form: cols[1].to_owned(),
            lemma: cols[2].to_owned(),
            upos: cols[3].to_owned(),
            xpos: cols[4].to_owned(),
            head,
            deprel: cols[7].to_owned(),
        });
    }
    flush(&mut current, &mut sentences)?;
    Ok(sentences)
}
