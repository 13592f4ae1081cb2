use std::cmp::Ordering;

use crate::corpus::{Sentence, Vocabulary};

/// Compare `a^(1/p)` with `b^(1/q)` for non-negative integers.
fn cmp_geo(a: u64, p: u32, b: u64, q: u32) -> Ordering {
    match ((a as u128).checked_pow(q), (b as u128).checked_pow(p)) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => {
            let (x, y) = ((a as f64).ln() / p as f64, (b as f64).ln() / q as f64);
            x.partial_cmp(&y).unwrap_or(Ordering::Equal)
        }
    }
}

fn segmentations(chars: &[char], start: usize, parts_left: usize, min_len: usize, vocab: &Vocabulary, cur: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
    let rest = chars.len() - start;
    if rest == 0 {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        return;
    }
    if parts_left == 0 {
        return;
    }
    for end in (start + min_len..=chars.len()).rev() {
        if end - start == chars.len() {
            continue;
        }
        let part: String = chars[start..end].iter().collect();
        if vocab.count(&part) == 0 {
            continue;
        }
        cur.push(part);
        segmentations(chars, end, parts_left - 1, min_len, vocab, cur, out);
        cur.pop();
    }
}

/// Splits `word` when the geometric mean of its best segmentation's part
/// frequencies strictly exceeds the word's own frequency. Returns `[word]`
/// when no split applies.
pub fn compound_split(word: &str, vocab: &Vocabulary, min_part_len: usize, max_parts: usize) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    let mut candidates = Vec::new();
    if max_parts >= 2 && min_part_len >= 1 {
        segmentations(&chars, 0, max_parts, min_part_len, vocab, &mut Vec::new(), &mut candidates);
    }
    let product = |parts: &[String]| -> u64 {
        parts
            .iter()
            .fold(1u64, |acc, p| acc.saturating_mul(vocab.count(p)))
    };
    // candidates arrive leftmost-longest first; later equal ones never win
    let best = candidates.into_iter().reduce(|best, cand| {
        let ord = cmp_geo(product(&cand), cand.len() as u32, product(&best), best.len() as u32)
            .then_with(|| best.len().cmp(&cand.len()));
        if ord == Ordering::Greater {
            cand
        } else {
            best
        }
    });
    match best {
        Some(parts) if cmp_geo(product(&parts), parts.len() as u32, vocab.count(word), 1) == Ordering::Greater => parts,
        _ => vec![word.to_string()],
    }
}

/// Compound splitting over whole sentences with a fixed vocabulary.
#[derive(Debug, Clone)]
pub struct CompoundSplitter {
    pub vocab: Vocabulary,
    pub min_part_len: usize,
    pub max_parts: usize,
}

impl CompoundSplitter {
    pub fn new(vocab: Vocabulary) -> Self {
        CompoundSplitter {
            vocab,
            min_part_len: 3,
            max_parts: 2,
        }
    }

    pub fn split(&self, word: &str) -> Vec<String> {
        compound_split(word, &self.vocab, self.min_part_len, self.max_parts)
    }

    pub fn split_sentence(&self, sentence: &Sentence) -> Sentence {
        Sentence::from_words(sentence.iter().flat_map(|t| self.split(t)))
    }
}
