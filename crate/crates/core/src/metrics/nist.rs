use std::collections::HashMap;

use super::{check_corpus, ngram_counts};
use crate::corpus::Sentence;
use crate::error::Result;

/// Corpus NIST score with information weights from pooled reference counts.
pub fn nist(hyps: &[Sentence], refs: &[Vec<Sentence>], max_n: usize) -> Result<f64> {
    check_corpus(hyps, refs)?;
    let ref_words: Vec<Vec<Vec<&str>>> = refs.iter().map(|rs| rs.iter().map(|r| r.words()).collect()).collect();
    // pooled counts for orders 1..=max_n, plus the token total
    let mut pooled: HashMap<Vec<&str>, u64> = HashMap::new();
    let mut ref_tokens = 0u64;
    for rs in &ref_words {
        for r in rs {
            ref_tokens += r.len() as u64;
            for n in 1..=max_n {
                for (g, c) in ngram_counts(r, n) {
                    *pooled.entry(g).or_insert(0) += c;
                }
            }
        }
    }
    let info = |g: &[&str]| -> f64 {
        let c = pooled[g] as f64;
        let context = if g.len() == 1 { ref_tokens as f64 } else { pooled[&g[..g.len() - 1]] as f64 };
        (context / c).log2()
    };
    let mut matched = vec![0.0; max_n];
    let mut totals = vec![0u64; max_n];
    let (mut hyp_len, mut ref_len) = (0.0, 0.0);
    for (h, rs) in hyps.iter().zip(&ref_words) {
        let h = h.words();
        hyp_len += h.len() as f64;
        ref_len += rs.iter().map(|r| r.len()).sum::<usize>() as f64 / rs.len() as f64;
        for n in 1..=max_n {
            let hc = ngram_counts(&h, n);
            let rcs: Vec<_> = rs.iter().map(|r| ngram_counts(r, n)).collect();
            for (g, c) in &hc {
                totals[n - 1] += c;
                let best = rcs.iter().map(|rc| rc.get(g).copied().unwrap_or(0)).max().unwrap_or(0);
                let m = (*c).min(best);
                if m > 0 {
                    matched[n - 1] += m as f64 * info(g);
                }
            }
        }
    }
    let score: f64 = matched
        .iter()
        .zip(&totals)
        .filter(|(_, &t)| t > 0)
        .map(|(&m, &t)| m / t as f64)
        .sum();
    Ok(score * brevity(hyp_len, ref_len))
}

/// `exp(β·ln²(min(c/r, 1)))` with β chosen so the factor is 0.5 at 2/3.
fn brevity(hyp_len: f64, ref_len: f64) -> f64 {
    if ref_len == 0.0 || hyp_len == 0.0 {
        return if hyp_len == 0.0 { 0.0 } else { 1.0 };
    }
    let beta = 0.5f64.ln() / 1.5f64.ln().powi(2);
    let ratio = (hyp_len / ref_len).min(1.0);
    (beta * ratio.ln().powi(2)).exp()
}
