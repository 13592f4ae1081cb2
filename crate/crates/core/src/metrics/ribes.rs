use std::fmt;
use std::str::FromStr;

use super::check_corpus;
use crate::corpus::Sentence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correlation {
    Kendall,
    Spearman,
}

impl fmt::Display for Correlation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Correlation::Kendall => "kendall",
            Correlation::Spearman => "spearman",
        })
    }
}

impl FromStr for Correlation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kendall" => Ok(Correlation::Kendall),
            "spearman" => Ok(Correlation::Spearman),
            _ => Err(Error::InvalidArgument(format!("unknown correlation {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RibesOptions {
    pub alpha: f64,
    pub beta: f64,
    pub correlation: Correlation,
}

impl Default for RibesOptions {
    fn default() -> Self {
        RibesOptions {
            alpha: 0.25,
            beta: 0.10,
            correlation: Correlation::Kendall,
        }
    }
}

fn count(haystack: &[&str], needle: &[&str]) -> usize {
    if needle.len() > haystack.len() {
        return 0;
    }
    haystack.windows(needle.len()).filter(|w| *w == needle).count()
}

fn find(haystack: &[&str], needle: &[&str]) -> Option<usize> {
    haystack.windows(needle.len()).position(|w| w == needle)
}

/// Reference positions of hypothesis words, in hypothesis order. Unique
/// words align directly; others are disambiguated by growing left or right
/// context until the n-gram is unique on both sides. Each reference
/// position is used at most once.
fn word_alignment(h: &[&str], r: &[&str]) -> Vec<usize> {
    let mut used = vec![false; r.len()];
    let mut out = Vec::new();
    let mut take = |pos: usize, out: &mut Vec<usize>| {
        if !used[pos] {
            used[pos] = true;
            out.push(pos);
        }
    };
    for (i, w) in h.iter().enumerate() {
        let (hc, rc) = (count(h, &[w]), count(r, &[w]));
        if rc == 0 {
            continue;
        }
        if hc == 1 && rc == 1 {
            take(find(r, &[w]).expect("counted"), &mut out);
            continue;
        }
        for window in 1..(i + 1).max(h.len() - i + 1) {
            if window <= i {
                let g = &h[i - window..=i];
                if count(h, g) == 1 && count(r, g) == 1 {
                    take(find(r, g).expect("counted") + window, &mut out);
                    break;
                }
            }
            if i + window < h.len() {
                let g = &h[i..=i + window];
                if count(h, g) == 1 && count(r, g) == 1 {
                    take(find(r, g).expect("counted"), &mut out);
                    break;
                }
            }
        }
    }
    out
}

fn correlation(positions: &[usize], kind: Correlation) -> f64 {
    let n = positions.len();
    match kind {
        Correlation::Kendall => {
            let mut concordant = 0usize;
            for i in 0..n {
                for j in i + 1..n {
                    if positions[i] < positions[j] {
                        concordant += 1;
                    }
                }
            }
            concordant as f64 / (n * (n - 1) / 2) as f64
        }
        Correlation::Spearman => {
            let mut sorted: Vec<usize> = positions.to_vec();
            sorted.sort_unstable();
            let d2: f64 = positions
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let rank = sorted.binary_search(p).expect("present");
                    (i as f64 - rank as f64).powi(2)
                })
                .sum();
            let nf = n as f64;
            let rho = 1.0 - 6.0 * d2 / (nf * (nf * nf - 1.0));
            (rho + 1.0) / 2.0
        }
    }
}

/// Sentence RIBES in [0, 100].
pub fn ribes(hyp: &Sentence, reference: &Sentence, opts: &RibesOptions) -> f64 {
    let (h, r) = (hyp.words(), reference.words());
    if h.is_empty() || r.is_empty() {
        return 0.0;
    }
    let positions = word_alignment(&h, &r);
    let nc = match positions.len() {
        0 => return 0.0,
        // a lone match only counts for one-word sentences
        1 if h.len() == 1 && r.len() == 1 => 1.0,
        1 => return 0.0,
        _ => correlation(&positions, opts.correlation),
    };
    let precision = positions.len() as f64 / h.len() as f64;
    let bp = (1.0 - r.len() as f64 / h.len() as f64).exp().min(1.0);
    100.0 * nc * precision.powf(opts.alpha) * bp.powf(opts.beta)
}

/// Mean over sentences of the best score against any reference.
pub fn ribes_corpus(hyps: &[Sentence], refs: &[Vec<Sentence>], opts: &RibesOptions) -> Result<f64> {
    check_corpus(hyps, refs)?;
    let total: f64 = hyps
        .iter()
        .zip(refs)
        .map(|(h, rs)| rs.iter().map(|r| ribes(h, r, opts)).fold(0.0, f64::max))
        .sum();
    Ok(total / hyps.len() as f64)
}
