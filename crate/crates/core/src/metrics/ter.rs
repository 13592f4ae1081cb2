use rayon::prelude::*;

use super::check_corpus;
use crate::corpus::Sentence;
use crate::error::Result;

/// Longest block considered for a shift.
pub const MAX_SHIFT_LEN: usize = 10;

/// Word-level Levenshtein distance with unit costs.
pub fn edit_distance(h: &[&str], r: &[&str]) -> usize {
    let mut prev: Vec<usize> = (0..=r.len()).collect();
    let mut cur = vec![0; r.len() + 1];
    for i in 1..=h.len() {
        cur[0] = i;
        for j in 1..=r.len() {
            let sub = prev[j - 1] + usize::from(h[i - 1] != r[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[r.len()]
}

/// Hyp positions that are exact matches on one optimal edit path.
fn matched_positions(h: &[&str], r: &[&str]) -> Vec<bool> {
    let (n, m) = (h.len(), r.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=m {
        d[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = d[i - 1][j - 1] + usize::from(h[i - 1] != r[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    let mut out = vec![false; n];
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 {
        let same = h[i - 1] == r[j - 1];
        if d[i][j] == d[i - 1][j - 1] + usize::from(!same) {
            out[i - 1] = same;
            i -= 1;
            j -= 1;
        } else if d[i][j] == d[i - 1][j] + 1 {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    out
}

fn occurs_in(block: &[&str], r: &[&str]) -> bool {
    block.len() <= r.len() && r.windows(block.len()).any(|w| w == block)
}

fn shifted<'a>(h: &[&'a str], start: usize, len: usize, dest: usize) -> Vec<&'a str> {
    let mut rest: Vec<&str> = Vec::with_capacity(h.len());
    rest.extend_from_slice(&h[..start]);
    rest.extend_from_slice(&h[start + len..]);
    let mut out = Vec::with_capacity(h.len());
    out.extend_from_slice(&rest[..dest]);
    out.extend_from_slice(&h[start..start + len]);
    out.extend_from_slice(&rest[dest..]);
    out
}

/// Greedy shift search followed by edit distance. Returns (shifts, edits).
pub fn ter_edits(hyp: &Sentence, reference: &Sentence) -> (usize, usize) {
    let r = reference.words();
    let mut h = hyp.words();
    let mut shifts = 0;
    loop {
        let cost = edit_distance(&h, &r);
        if cost == 0 {
            return (shifts, 0);
        }
        let matched = matched_positions(&h, &r);
        // (gain, len, start, dest) with the best shift so far
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for start in 0..h.len() {
            for len in 1..=MAX_SHIFT_LEN.min(h.len() - start) {
                let block = &h[start..start + len];
                if !occurs_in(block, &r) {
                    break;
                }
                if matched[start..start + len].iter().all(|&m| m) {
                    continue;
                }
                for dest in 0..=h.len() - len {
                    if dest == start {
                        continue;
                    }
                    let cand = shifted(&h, start, len, dest);
                    let d = edit_distance(&cand, &r);
                    if d >= cost {
                        continue;
                    }
                    let gain = cost - d;
                    let better = match best {
                        None => true,
                        Some((g, l, _, _)) => gain > g || (gain == g && len > l),
                    };
                    if better {
                        best = Some((gain, len, start, dest));
                    }
                }
            }
        }
        match best {
            Some((_, len, start, dest)) => {
                h = shifted(&h, start, len, dest);
                shifts += 1;
            }
            None => return (shifts, cost),
        }
    }
}

/// Sentence TER in percent of the reference length.
pub fn ter(hyp: &Sentence, reference: &Sentence) -> f64 {
    let (s, e) = ter_edits(hyp, reference);
    rate((s + e) as f64, reference.len() as f64)
}

fn rate(edits: f64, len: f64) -> f64 {
    if len == 0.0 {
        if edits == 0.0 {
            0.0
        } else {
            100.0
        }
    } else {
        100.0 * edits / len
    }
}

/// Corpus TER: fewest edits over the references per sentence, divided by
/// the summed average reference lengths.
pub fn ter_corpus(hyps: &[Sentence], refs: &[Vec<Sentence>]) -> Result<f64> {
    check_corpus(hyps, refs)?;
    let per_sentence: Vec<(usize, f64)> = hyps
        .par_iter()
        .zip(refs)
        .map(|(h, rs)| {
            let edits = rs
                .iter()
                .map(|r| {
                    let (s, e) = ter_edits(h, r);
                    s + e
                })
                .min()
                .expect("references checked non-empty");
            let len = rs.iter().map(|r| r.len()).sum::<usize>() as f64 / rs.len() as f64;
            (edits, len)
        })
        .collect();
    let edits: usize = per_sentence.iter().map(|p| p.0).sum();
    let len: f64 = per_sentence.iter().map(|p| p.1).sum();
    Ok(rate(edits as f64, len))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Sentence {
        Sentence::from_whitespace(x)
    }

    #[test]
    fn fixtures() {
        assert_eq!(ter(&s("a b c d"), &s("a b c d")), 0.0);
        assert_eq!(ter(&s("a c b d"), &s("a b c d")), 25.0);
        assert_eq!(ter(&s(""), &s("a b c d")), 100.0);
        assert_eq!(ter_edits(&s("c d a b"), &s("a b c d")), (1, 0));
    }

    #[test]
    fn shifting_never_hurts() {
        for (h, r) in [("x a b y c", "a b c"), ("d c b a", "a b c d"), ("the cat sat", "sat the cat")] {
            let (shifts, e) = ter_edits(&s(h), &s(r));
            assert!(shifts + e <= edit_distance(&s(h).words(), &s(r).words()));
        }
    }
}
