use std::collections::HashMap;

use rayon::prelude::*;

use super::vocab::{LmVocab, BOS_ID, EOS_ID, UNK_ID};
use super::MAX_ORDER;
use crate::corpus::Sentence;

pub(crate) type GramMap<V> = HashMap<Vec<u32>, V>;

/// Raw n-gram counts for orders `1..=order` plus continuation counts
/// (number of distinct left extensions) for orders below `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramCounts {
    pub(crate) order: usize,
    pub(crate) vocab: LmVocab,
    pub(crate) counts: Vec<GramMap<u64>>,
    pub(crate) continuation: Vec<GramMap<u64>>,
}

impl NGramCounts {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab(&self) -> &LmVocab {
        &self.vocab
    }

    fn ids(&self, gram: &[&str]) -> Option<Vec<u32>> {
        gram.iter().map(|w| self.vocab.get(w)).collect()
    }

    /// Occurrence count of an n-gram given as words (`<s>`/`</s>` allowed).
    pub fn count(&self, gram: &[&str]) -> u64 {
        if gram.is_empty() || gram.len() > self.order {
            return 0;
        }
        self.ids(gram)
            .and_then(|ids| self.counts[ids.len() - 1].get(&ids).copied())
            .unwrap_or(0)
    }

    /// Number of distinct words observed immediately before `gram`.
    pub fn continuation_count(&self, gram: &[&str]) -> u64 {
        if gram.is_empty() || gram.len() >= self.order {
            return 0;
        }
        self.ids(gram)
            .and_then(|ids| self.continuation[ids.len() - 1].get(&ids).copied())
            .unwrap_or(0)
    }

    /// Number of distinct n-grams stored at order `k`.
    pub fn distinct(&self, k: usize) -> usize {
        self.counts.get(k - 1).map_or(0, HashMap::len)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(HashMap::is_empty)
    }

    /// `(gram, count)` pairs at order `k`, as words.
    pub fn grams(&self, k: usize) -> Vec<(Vec<&str>, u64)> {
        let mut out: Vec<_> = self.counts[k - 1]
            .iter()
            .map(|(g, &c)| (g.iter().map(|&id| self.vocab.word(id)).collect(), c))
            .collect();
        out.sort();
        out
    }
}

fn add_sentence(ids: &[u32], order: usize, counts: &mut [GramMap<u64>]) {
    for start in 0..ids.len() {
        for k in 1..=order.min(ids.len() - start) {
            *counts[k - 1].entry(ids[start..start + k].to_vec()).or_insert(0) += 1;
        }
    }
}

fn merge_into(into: &mut [GramMap<u64>], from: Vec<GramMap<u64>>) {
    for (dst, src) in into.iter_mut().zip(from) {
        for (g, c) in src {
            *dst.entry(g).or_insert(0) += c;
        }
    }
}

/// Counts all n-grams up to `order` over padded sentences.
pub fn count_ngrams<'a, I>(sentences: I, order: usize) -> NGramCounts
where
    I: IntoIterator<Item = &'a Sentence>,
{
    count_ngrams_with_floor(sentences, order, 1)
}

/// Like [`count_ngrams`], but words seen fewer than `min_count` times are
/// counted as `<unk>`.
pub fn count_ngrams_with_floor<'a, I>(sentences: I, order: usize, min_count: u64) -> NGramCounts
where
    I: IntoIterator<Item = &'a Sentence>,
{
    assert!(
        (1..=MAX_ORDER).contains(&order),
        "order must be in 1..={MAX_ORDER}"
    );
    let sentences: Vec<&Sentence> = sentences.into_iter().collect();

    let mut frequency: HashMap<&str, u64> = HashMap::new();
    if min_count > 1 {
        for s in &sentences {
            for t in s.iter() {
                *frequency.entry(t.as_str()).or_insert(0) += 1;
            }
        }
    }
    let keep = |w: &str| min_count <= 1 || frequency.get(w).copied().unwrap_or(0) >= min_count;

    let mut vocab = LmVocab::new();
    let encoded: Vec<Vec<u32>> = sentences
        .iter()
        .map(|s| {
            let mut ids = Vec::with_capacity(s.len() + 2);
            ids.push(BOS_ID);
            ids.extend(
                s.iter()
                    .map(|t| if keep(t) { vocab.intern(t) } else { UNK_ID }),
            );
            ids.push(EOS_ID);
            ids
        })
        .collect();

    // Shards are merged by integer addition, so the result does not depend
    // on how rayon splits the work.
    let counts = encoded
        .par_chunks(4096)
        .map(|chunk| {
            let mut local = vec![GramMap::new(); order];
            for ids in chunk {
                add_sentence(ids, order, &mut local);
            }
            local
        })
        .reduce(
            || vec![GramMap::new(); order],
            |mut a, b| {
                merge_into(&mut a, b);
                a
            },
        );

    let mut continuation = vec![GramMap::new(); order.saturating_sub(1)];
    for k in 1..order {
        for gram in counts[k].keys() {
            *continuation[k - 1].entry(gram[1..].to_vec()).or_insert(0) += 1;
        }
    }

    NGramCounts {
        order,
        vocab,
        counts,
        continuation,
    }
}
