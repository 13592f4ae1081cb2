use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::types::{Sentence, Token};
use crate::error::{Error, Result};
use crate::textio;

/// Most frequent casing of each word, learned from non-sentence-initial
/// positions only.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TruecaseModel {
    best_form: BTreeMap<String, String>,
    counts: BTreeMap<String, u64>,
}

impl TruecaseModel {
    pub fn train<'a, I>(sentences: I) -> Self
    where
        I: IntoIterator<Item = &'a Sentence>,
    {
        let mut counts = BTreeMap::new();
        for sentence in sentences {
            for token in sentence.iter().skip(1) {
                *counts.entry(token.to_string()).or_insert(0u64) += 1;
            }
        }
        Self::from_counts(counts)
    }

    fn from_counts(counts: BTreeMap<String, u64>) -> Self {
        let mut best: BTreeMap<String, (&str, u64)> = BTreeMap::new();
        // BTreeMap iteration is lexicographic, so keeping the first maximum
        // breaks ties toward the lexicographically smallest cased form.
        for (form, &count) in &counts {
            let slot = best.entry(form.to_lowercase()).or_insert((form, count));
            if count > slot.1 {
                *slot = (form, count);
            }
        }
        let best_form = best
            .into_iter()
            .map(|(lower, (form, _))| (lower, form.to_string()))
            .collect();
        TruecaseModel { best_form, counts }
    }

    pub fn best_form(&self, lowercased: &str) -> Option<&str> {
        self.best_form.get(lowercased).map(String::as_str)
    }

    pub fn count(&self, cased: &str) -> u64 {
        self.counts.get(cased).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Recases the sentence-initial token; the rest is left alone.
    pub fn apply(&self, sentence: &Sentence) -> Sentence {
        let mut tokens = sentence.tokens().to_vec();
        if let Some(first) = tokens.first_mut() {
            let lower = first.to_lowercase();
            let form = self.best_form(&lower).map(str::to_string).unwrap_or(lower);
            if let Some(t) = Token::new(form) {
                *first = t;
            }
        }
        Sentence::new(tokens)
    }

    /// Tab-separated `form<TAB>count`, one cased form per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (form, count) in &self.counts {
            let _ = writeln!(out, "{form}\t{count}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (form, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse("truecase model", i + 1, "expected form<TAB>count"))?;
            let count = count
                .parse::<u64>()
                .map_err(|e| Error::parse("truecase model", i + 1, e.to_string()))?;
            counts.insert(form.to_string(), count);
        }
        Ok(Self::from_counts(counts))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        textio::write_string(path, &self.to_text())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&textio::read_string(path)?)
    }
}
