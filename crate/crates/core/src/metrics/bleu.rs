use std::collections::HashMap;

use super::{check_corpus, ngram_counts};
use crate::corpus::Sentence;
use crate::error::Result;

/// Clipped n-gram matches and totals for n = 1..=max_n, with the
/// candidate length and the closest reference length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NGramMatchStats {
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl NGramMatchStats {
    pub fn new(max_n: usize) -> Self {
        NGramMatchStats {
            matches: vec![0; max_n],
            totals: vec![0; max_n],
            hyp_len: 0,
            ref_len: 0,
        }
    }

    pub fn add(&mut self, other: &NGramMatchStats) {
        for (a, b) in self.matches.iter_mut().zip(&other.matches) {
            *a += b;
        }
        for (a, b) in self.totals.iter_mut().zip(&other.totals) {
            *a += b;
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
    }

    /// BLEU in [0, 100]: geometric mean of the precisions times the
    /// brevity penalty; 0 when any precision is 0.
    pub fn score(&self) -> f64 {
        if self.matches.iter().any(|&m| m == 0) {
            return 0.0;
        }
        let n = self.matches.len() as f64;
        let log_p: f64 = self
            .matches
            .iter()
            .zip(&self.totals)
            .map(|(&m, &t)| (m as f64 / t as f64).ln())
            .sum::<f64>()
            / n;
        let bp = if self.hyp_len < self.ref_len {
            1.0 - self.ref_len as f64 / self.hyp_len as f64
        } else {
            0.0
        };
        100.0 * (log_p + bp).exp()
    }
}

/// Statistics of one hypothesis against its references.
pub fn bleu_stats(hyp: &Sentence, refs: &[Sentence], max_n: usize) -> NGramMatchStats {
    let h = hyp.words();
    let refs: Vec<Vec<&str>> = refs.iter().map(|r| r.words()).collect();
    let mut st = NGramMatchStats::new(max_n);
    st.hyp_len = h.len() as u64;
    // closest reference length, shorter on ties
    st.ref_len = refs
        .iter()
        .map(|r| r.len())
        .min_by_key(|&l| (l.abs_diff(h.len()), l))
        .unwrap_or(0) as u64;
    for n in 1..=max_n {
        let hc = ngram_counts(&h, n);
        let mut max_ref: HashMap<&[&str], u64> = HashMap::new();
        let ref_counts: Vec<_> = refs.iter().map(|r| ngram_counts(r, n)).collect();
        for rc in &ref_counts {
            for (g, &c) in rc {
                let e = max_ref.entry(g.as_slice()).or_insert(0);
                *e = (*e).max(c);
            }
        }
        for (g, &c) in &hc {
            st.matches[n - 1] += c.min(max_ref.get(g.as_slice()).copied().unwrap_or(0));
            st.totals[n - 1] += c;
        }
    }
    st
}

/// Corpus BLEU with uniform weights over n = 1..=max_n.
pub fn bleu(hyps: &[Sentence], refs: &[Vec<Sentence>], max_n: usize) -> Result<f64> {
    check_corpus(hyps, refs)?;
    let mut total = NGramMatchStats::new(max_n);
    for (h, r) in hyps.iter().zip(refs) {
        total.add(&bleu_stats(h, r, max_n));
    }
    Ok(total.score())
}
