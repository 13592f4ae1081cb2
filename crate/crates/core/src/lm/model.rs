use std::collections::HashMap;
use std::fmt;

use super::vocab::{LmVocab, BOS_ID, EOS_ID};
use super::MAX_ORDER;
use crate::corpus::Sentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Smoothing {
    KneserNeyInterpolated,
    WittenBell,
    Uniform,
}

impl Smoothing {
    pub fn name(self) -> &'static str {
        match self {
            Smoothing::KneserNeyInterpolated => "kn",
            Smoothing::WittenBell => "wb",
            Smoothing::Uniform => "uniform",
        }
    }

    pub fn parse(name: &str) -> Option<Smoothing> {
        match name {
            "kn" | "kneser-ney" | "kneser_ney_interpolated" => Some(Smoothing::KneserNeyInterpolated),
            "wb" | "witten-bell" | "witten_bell" => Some(Smoothing::WittenBell),
            "uniform" => Some(Smoothing::Uniform),
            _ => None,
        }
    }
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// log10 probability of an n-gram and the log10 backoff weight of the
/// n-gram used as a history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Entry {
    pub logprob: f64,
    pub logbow: f64,
}

/// Value stored for `<s>`, which is never predicted.
pub(crate) const BOS_LOGPROB: f64 = -99.0;

#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel {
    pub(crate) order: usize,
    pub(crate) smoothing: Smoothing,
    pub(crate) vocab: LmVocab,
    pub(crate) tables: Vec<HashMap<Vec<u32>, Entry>>,
}

impl NGramModel {
    /// Order-1 model assigning `1/|V|` to every predictable word, where `V`
    /// holds `words`, `<unk>` and `</s>`.
    pub fn uniform<'a, I>(words: I) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut vocab = LmVocab::new();
        for w in words {
            vocab.intern(w);
        }
        let size = vocab.predictable().count() as f64;
        let mut unigrams = HashMap::new();
        for id in 0..vocab.len() as u32 {
            let logprob = if id == BOS_ID { BOS_LOGPROB } else { -size.log10() };
            unigrams.insert(vec![id], Entry { logprob, logbow: 0.0 });
        }
        NGramModel {
            order: 1,
            smoothing: Smoothing::Uniform,
            vocab,
            tables: vec![unigrams],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    pub fn vocab(&self) -> &LmVocab {
        &self.vocab
    }

    /// Number of stored n-grams at order `k`.
    pub fn len_at(&self, k: usize) -> usize {
        self.tables.get(k - 1).map_or(0, HashMap::len)
    }

    /// Word id, with out-of-vocabulary words mapped to `<unk>`.
    pub fn id(&self, word: &str) -> u32 {
        self.vocab.id(word)
    }

    pub fn bos(&self) -> u32 {
        BOS_ID
    }

    pub fn eos(&self) -> u32 {
        EOS_ID
    }

    #[cfg(test)]
    pub(crate) fn entry(&self, gram: &[u32]) -> Option<&Entry> {
        self.tables.get(gram.len().checked_sub(1)?)?.get(gram)
    }

    /// log10 P(word | history) over ids. Only the last `order - 1` history
    /// ids are used.
    pub fn logprob_ids(&self, history: &[u32], word: u32) -> f64 {
        let keep = history.len().min(self.order - 1);
        let context = &history[history.len() - keep..];
        let mut key = [0u32; MAX_ORDER];
        let mut backoff = 0.0;
        for start in 0..=context.len() {
            let h = &context[start..];
            let n = h.len() + 1;
            key[..h.len()].copy_from_slice(h);
            key[h.len()] = word;
            if let Some(e) = self.tables[n - 1].get(&key[..n]) {
                return backoff + e.logprob;
            }
            if !h.is_empty() {
                if let Some(e) = self.tables[h.len() - 1].get(h) {
                    backoff += e.logbow;
                }
            }
        }
        // Every predictable id has a unigram entry; only foreign ids land here.
        backoff + self.tables[0][&vec![super::vocab::UNK_ID]].logprob
    }

    /// log10 P(word | history); unknown words are scored as `<unk>`.
    pub fn logprob(&self, word: &str, history: &[&str]) -> f64 {
        let history: Vec<u32> = history.iter().map(|w| self.id(w)).collect();
        self.logprob_ids(&history, self.id(word))
    }

    /// Sum of log10 probabilities of all words of `sentence` and `</s>`,
    /// starting from `<s>`. Returns the sum and the number of predictions.
    pub fn sentence_logprob<S: AsRef<str>>(&self, words: &[S]) -> (f64, usize) {
        let mut history = Vec::with_capacity(words.len() + 2);
        history.push(BOS_ID);
        let mut total = 0.0;
        for w in words {
            let id = self.id(w.as_ref());
            total += self.logprob_ids(&history, id);
            history.push(id);
        }
        total += self.logprob_ids(&history, EOS_ID);
        (total, words.len() + 1)
    }

    /// `10^(-(sum of log10 probabilities) / N)` with `N` counting every
    /// predicted token including each `</s>`.
    pub fn perplexity<'a, I>(&self, sentences: I) -> f64
    where
        I: IntoIterator<Item = &'a Sentence>,
    {
        let mut total = 0.0;
        let mut n = 0usize;
        for s in sentences {
            let (lp, count) = self.sentence_logprob(&s.words());
            total += lp;
            n += count;
        }
        if n == 0 {
            return f64::NAN;
        }
        10f64.powf(-total / n as f64)
    }

    /// Largest deviation from 1 of `sum_w P(w | history)` over the given
    /// histories, summing over every predictable word.
    pub fn max_normalization_error(&self, histories: &[Vec<u32>]) -> f64 {
        histories
            .iter()
            .map(|h| {
                let sum: f64 = self
                    .vocab
                    .predictable()
                    .map(|w| 10f64.powf(self.logprob_ids(h, w)))
                    .sum();
                (sum - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Every stored history (n-grams below the top order not ending in `</s>`),
    /// plus the empty history.
    pub fn stored_histories(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for table in &self.tables[..self.order - 1] {
            let mut grams: Vec<_> = table
                .keys()
                .filter(|g| *g.last().unwrap() != EOS_ID)
                .cloned()
                .collect();
            grams.sort();
            out.extend(grams);
        }
        out
    }
}
