//! Direct-formula n-gram probabilities computed from raw string counts.

use std::collections::{BTreeSet, HashMap};

pub struct LmOracle {
    order: usize,
    kneser_ney: bool,
    counts: HashMap<Vec<String>, u64>,
    left_extensions: HashMap<Vec<String>, BTreeSet<String>>,
    pub vocab: BTreeSet<String>,
}

impl LmOracle {
    pub fn new(sentences: &[Vec<String>], order: usize, kneser_ney: bool) -> Self {
        let mut counts = HashMap::new();
        let mut left_extensions: HashMap<Vec<String>, BTreeSet<String>> = HashMap::new();
        let mut vocab = BTreeSet::new();
        vocab.insert("<unk>".to_string());
        vocab.insert("</s>".to_string());
        for s in sentences {
            let mut padded = vec!["<s>".to_string()];
            padded.extend(s.iter().cloned());
            padded.push("</s>".to_string());
            vocab.extend(s.iter().cloned());
            for i in 0..padded.len() {
                for j in i + 1..=padded.len().min(i + order) {
                    *counts.entry(padded[i..j].to_vec()).or_insert(0) += 1;
                    if i > 0 {
                        left_extensions
                            .entry(padded[i..j].to_vec())
                            .or_default()
                            .insert(padded[i - 1].clone());
                    }
                }
            }
        }
        LmOracle {
            order,
            kneser_ney,
            counts,
            left_extensions,
            vocab,
        }
    }

    fn effective(&self, gram: &[String]) -> u64 {
        let raw = self.counts.get(gram).copied().unwrap_or(0);
        if raw == 0 {
            return 0;
        }
        if self.kneser_ney && gram.len() < self.order && gram[0] != "<s>" {
            self.left_extensions.get(gram).map_or(0, |s| s.len() as u64)
        } else {
            raw
        }
    }

    /// Discount at order k, or None when Witten-Bell applies.
    fn discount(&self, k: usize) -> Option<f64> {
        if !self.kneser_ney {
            return None;
        }
        let mut n1 = 0u64;
        let mut n2 = 0u64;
        for g in self.counts.keys() {
            if g.len() != k || (k == 1 && g[0] == "<s>") {
                continue;
            }
            match self.effective(g) {
                1 => n1 += 1,
                2 => n2 += 1,
                _ => {}
            }
        }
        (n1 > 0 && n2 > 0).then(|| n1 as f64 / (n1 as f64 + 2.0 * n2 as f64))
    }

    fn prob_at(&self, k: usize, word: &str, history: &[String]) -> f64 {
        if k == 0 {
            return 1.0 / self.vocab.len() as f64;
        }
        let h = &history[history.len() - (k - 1)..];
        let lower = self.prob_at(k - 1, word, history);
        let mut total = 0u64;
        let mut types = 0u64;
        for v in &self.vocab {
            let mut g = h.to_vec();
            g.push(v.clone());
            let e = self.effective(&g);
            total += e;
            types += (e > 0) as u64;
        }
        if total == 0 {
            return lower;
        }
        let mut g = h.to_vec();
        g.push(word.to_string());
        let e = self.effective(&g) as f64;
        let (a, t) = (total as f64, types as f64);
        match self.discount(k) {
            Some(d) => (e - d).max(0.0) / a + d * t / a * lower,
            None => (e + t * lower) / (a + t),
        }
    }

    /// P(word | history) with history truncated to `order - 1` words and
    /// unknown words mapped to `<unk>`. History words are kept verbatim.
    pub fn prob(&self, word: &str, history: &[&str]) -> f64 {
        let word = if self.vocab.contains(word) { word } else { "<unk>" };
        let keep = history.len().min(self.order - 1);
        let h: Vec<String> = history[history.len() - keep..]
            .iter()
            .map(|w| {
                if *w == "<s>" || self.vocab.contains(*w) {
                    w.to_string()
                } else {
                    "<unk>".to_string()
                }
            })
            .collect();
        // Lower orders use shorter suffixes of the history.
        let k = h.len() + 1;
        self.prob_at(k, word, &h)
    }
}
