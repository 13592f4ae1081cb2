use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Deref;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textio;

/// A single non-empty, whitespace-free surface form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Token(String);

impl Token {
    /// Returns `None` for empty strings or strings containing whitespace.
    pub fn new(surface: impl Into<String>) -> Option<Token> {
        let surface = surface.into();
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            None
        } else {
            Some(Token(surface))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl Deref for Token {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered token sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sentence(Vec<Token>);

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Self {
        Sentence(tokens)
    }

    /// Splits already-tokenized text on whitespace.
    pub fn from_whitespace(text: &str) -> Self {
        Sentence(
            text.split_whitespace()
                .map(|w| Token(w.to_string()))
                .collect(),
        )
    }

    /// Builds a sentence from words, dropping any that are not valid tokens.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Sentence(words.into_iter().filter_map(Token::new).collect())
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn into_tokens(self) -> Vec<Token> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn words(&self) -> Vec<&str> {
        self.0.iter().map(Token::as_str).collect()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.0.iter()
    }

    /// Applies `f` to every token; tokens mapped to invalid surfaces are dropped.
    pub fn map_tokens(&self, mut f: impl FnMut(&str) -> String) -> Sentence {
        Sentence(self.0.iter().filter_map(|t| Token::new(f(t))).collect())
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, token) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(token)?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a Sentence {
    type Item = &'a Token;
    type IntoIter = std::slice::Iter<'a, Token>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<Token> for Sentence {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        Sentence(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentencePair {
    pub source: Sentence,
    pub target: Sentence,
    /// 1-based line number in the input files.
    pub line_number: usize,
}

impl SentencePair {
    pub fn new(source: Sentence, target: Sentence, line_number: usize) -> Self {
        SentencePair {
            source,
            target,
            line_number,
        }
    }

    pub fn swapped(&self) -> SentencePair {
        SentencePair {
            source: self.target.clone(),
            target: self.source.clone(),
            line_number: self.line_number,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelCorpus {
    pub pairs: Vec<SentencePair>,
    pub source_lang: String,
    pub target_lang: String,
}

impl ParallelCorpus {
    pub fn new(pairs: Vec<SentencePair>, source_lang: &str, target_lang: &str) -> Self {
        ParallelCorpus {
            pairs,
            source_lang: source_lang.to_string(),
            target_lang: target_lang.to_string(),
        }
    }

    /// Builds a corpus from pre-tokenized line pairs, numbering lines from 1.
    /// Pairs with an empty side are skipped.
    pub fn from_lines<S: AsRef<str>>(lines: &[(S, S)], source_lang: &str, target_lang: &str) -> Self {
        let pairs = lines
            .iter()
            .enumerate()
            .filter_map(|(i, (s, t))| {
                let source = Sentence::from_whitespace(s.as_ref());
                let target = Sentence::from_whitespace(t.as_ref());
                (!source.is_empty() && !target.is_empty())
                    .then(|| SentencePair::new(source, target, i + 1))
            })
            .collect();
        ParallelCorpus::new(pairs, source_lang, target_lang)
    }

    /// Reads two parallel files of pre-tokenized text. Returns the corpus and
    /// the line numbers of pairs dropped because one side was empty.
    pub fn read_tokenized(
        source_path: &Path,
        target_path: &Path,
        source_lang: &str,
        target_lang: &str,
    ) -> Result<(ParallelCorpus, Vec<usize>)> {
        Self::read_with(source_path, target_path, source_lang, target_lang, |line| {
            Sentence::from_whitespace(line)
        })
    }

    /// Reads two parallel files of raw text and tokenizes both sides.
    pub fn read_raw(
        source_path: &Path,
        target_path: &Path,
        source_lang: &str,
        target_lang: &str,
    ) -> Result<(ParallelCorpus, Vec<usize>)> {
        Self::read_with(source_path, target_path, source_lang, target_lang, |line| {
            super::tokenize(line)
        })
    }

    fn read_with(
        source_path: &Path,
        target_path: &Path,
        source_lang: &str,
        target_lang: &str,
        parse: impl Fn(&str) -> Sentence,
    ) -> Result<(ParallelCorpus, Vec<usize>)> {
        let source_lines = textio::read_lines(source_path)?;
        let target_lines = textio::read_lines(target_path)?;
        if source_lines.len() != target_lines.len() {
            return Err(Error::LineCountMismatch {
                source_lines: source_lines.len(),
                target_lines: target_lines.len(),
            });
        }
        let mut pairs = Vec::with_capacity(source_lines.len());
        let mut dropped = Vec::new();
        for (i, (s, t)) in source_lines.iter().zip(&target_lines).enumerate() {
            let source = parse(s);
            let target = parse(t);
            if source.is_empty() || target.is_empty() {
                dropped.push(i + 1);
            } else {
                pairs.push(SentencePair::new(source, target, i + 1));
            }
        }
        Ok((ParallelCorpus::new(pairs, source_lang, target_lang), dropped))
    }

    pub fn write(&self, source_path: &Path, target_path: &Path) -> Result<()> {
        textio::write_lines(source_path, self.pairs.iter().map(|p| p.source.to_string()))?;
        textio::write_lines(target_path, self.pairs.iter().map(|p| p.target.to_string()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn source_side(&self) -> impl Iterator<Item = &Sentence> {
        self.pairs.iter().map(|p| &p.source)
    }

    pub fn target_side(&self) -> impl Iterator<Item = &Sentence> {
        self.pairs.iter().map(|p| &p.target)
    }

    /// The same corpus translated in the opposite direction.
    pub fn reversed(&self) -> ParallelCorpus {
        ParallelCorpus {
            pairs: self.pairs.iter().map(SentencePair::swapped).collect(),
            source_lang: self.target_lang.clone(),
            target_lang: self.source_lang.clone(),
        }
    }
}

/// Surface forms with dense ids in first-occurrence order and occurrence counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    index: HashMap<String, u32>,
    entries: Vec<(String, u64)>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sentences<'a, I>(sentences: I) -> Self
    where
        I: IntoIterator<Item = &'a Sentence>,
    {
        let mut vocab = Vocabulary::new();
        for sentence in sentences {
            for token in sentence {
                vocab.add(token, 1);
            }
        }
        vocab
    }

    /// Builds a vocabulary from explicit `(form, count)` pairs.
    pub fn from_counts<I, S>(counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut vocab = Vocabulary::new();
        for (form, count) in counts {
            vocab.add(form.as_ref(), count);
        }
        vocab
    }

    /// Adds `count` occurrences of `form`, returning its id.
    pub fn add(&mut self, form: &str, count: u64) -> u32 {
        match self.index.get(form) {
            Some(&id) => {
                self.entries[id as usize].1 += count;
                id
            }
            None => {
                let id = self.entries.len() as u32;
                self.index.insert(form.to_string(), id);
                self.entries.push((form.to_string(), count));
                id
            }
        }
    }

    pub fn id(&self, form: &str) -> Option<u32> {
        self.index.get(form).copied()
    }

    pub fn count(&self, form: &str) -> u64 {
        self.id(form).map_or(0, |id| self.entries[id as usize].1)
    }

    pub fn form(&self, id: u32) -> Option<&str> {
        self.entries.get(id as usize).map(|(f, _)| f.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_count(&self) -> u64 {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    /// `(form, id, count)` in id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u32, u64)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, (f, c))| (f.as_str(), i as u32, *c))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub sentences: usize,
    pub source_tokens: usize,
    pub target_tokens: usize,
    pub source_vocab: usize,
    pub target_vocab: usize,
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sentences\t{}", self.sentences)?;
        writeln!(f, "source_tokens\t{}", self.source_tokens)?;
        writeln!(f, "target_tokens\t{}", self.target_tokens)?;
        writeln!(f, "source_vocab\t{}", self.source_vocab)?;
        write!(f, "target_vocab\t{}", self.target_vocab)
    }
}

pub fn corpus_stats(corpus: &ParallelCorpus) -> CorpusStats {
    let mut source_forms = HashSet::new();
    let mut target_forms = HashSet::new();
    let mut stats = CorpusStats {
        sentences: corpus.len(),
        ..CorpusStats::default()
    };
    for pair in &corpus.pairs {
        stats.source_tokens += pair.source.len();
        stats.target_tokens += pair.target.len();
        source_forms.extend(pair.source.iter().map(Token::as_str));
        target_forms.extend(pair.target.iter().map(Token::as_str));
    }
    stats.source_vocab = source_forms.len();
    stats.target_vocab = target_forms.len();
    stats
}
