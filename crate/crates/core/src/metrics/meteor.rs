use super::check_corpus;
use crate::corpus::{stem, Sentence};
use crate::error::Result;

/// Prefix length used by the stem-matching stage.
pub const METEOR_STEM_LEN: usize = 6;

/// Search budget for the exhaustive fewest-chunks matching of one stage.
const EXHAUSTIVE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MeteorStats {
    pub matches: u64,
    pub hyp_len: u64,
    pub ref_len: u64,
    pub chunks: u64,
}

impl MeteorStats {
    pub fn add(&mut self, o: &MeteorStats) {
        self.matches += o.matches;
        self.hyp_len += o.hyp_len;
        self.ref_len += o.ref_len;
        self.chunks += o.chunks;
    }

    /// `100·Fmean·(1 − 0.5·(chunks/m)³)` with `Fmean = 10PR/(R+9P)`.
    pub fn score(&self) -> f64 {
        if self.matches == 0 {
            return 0.0;
        }
        let m = self.matches as f64;
        let p = m / self.hyp_len as f64;
        let r = m / self.ref_len as f64;
        let fmean = 10.0 * p * r / (r + 9.0 * p);
        let penalty = 0.5 * (self.chunks as f64 / m).powi(3);
        100.0 * fmean * (1.0 - penalty)
    }
}

/// Number of chunks of an alignment given as hyp position → ref position.
fn count_chunks(align: &[Option<usize>]) -> u64 {
    let mut chunks = 0;
    let mut prev: Option<usize> = None;
    for a in align {
        match (*a, prev) {
            (Some(r), Some(p)) if r == p + 1 => {}
            (Some(_), _) => chunks += 1,
            (None, _) => {}
        }
        prev = *a;
    }
    chunks
}

/// Adds one matching stage: a maximum one-to-one matching between still
/// unmatched words with equal keys, preferring fewer chunks overall.
fn stage(align: &mut [Option<usize>], ref_used: &mut [bool], hkeys: &[String], rkeys: &[String]) {
    // candidate reference positions per unmatched hyp word
    let cands: Vec<(usize, Vec<usize>)> = (0..hkeys.len())
        .filter(|&i| align[i].is_none())
        .map(|i| {
            let c: Vec<usize> = (0..rkeys.len()).filter(|&j| !ref_used[j] && rkeys[j] == hkeys[i]).collect();
            (i, c)
        })
        .filter(|(_, c)| !c.is_empty())
        .collect();
    if cands.is_empty() {
        return;
    }
    // the maximum matching size is Σ over keys of min(hyp count, ref count)
    let mut per_key: std::collections::BTreeMap<&str, (usize, usize)> = Default::default();
    for (i, _) in &cands {
        per_key.entry(hkeys[*i].as_str()).or_default().0 += 1;
    }
    for (j, k) in rkeys.iter().enumerate() {
        if !ref_used[j] {
            if let Some(e) = per_key.get_mut(k.as_str()) {
                e.1 += 1;
            }
        }
    }
    let target: usize = per_key.values().map(|&(h, r)| h.min(r)).sum();
    let space: f64 = cands.iter().map(|(_, c)| (c.len() + 1) as f64).product();
    if space <= EXHAUSTIVE_LIMIT as f64 {
        let mut best: Option<(u64, Vec<Option<usize>>)> = None;
        let mut cur = align.to_vec();
        let mut used = ref_used.to_vec();
        search(&cands, 0, 0, target, &mut cur, &mut used, &mut best);
        if let Some((_, b)) = best {
            for (i, a) in b.iter().enumerate() {
                if let Some(r) = a {
                    ref_used[*r] = true;
                }
                align[i] = *a;
            }
        }
    } else {
        // greedy: extend the previous word's run when possible
        for (i, c) in &cands {
            let prev = if *i > 0 { align[*i - 1] } else { None };
            let pick = c
                .iter()
                .copied()
                .filter(|&j| !ref_used[j])
                .find(|&j| prev.is_some_and(|p| j == p + 1))
                .or_else(|| c.iter().copied().find(|&j| !ref_used[j]));
            if let Some(j) = pick {
                align[*i] = Some(j);
                ref_used[j] = true;
            }
        }
    }
}

fn search(
    cands: &[(usize, Vec<usize>)],
    k: usize,
    matched: usize,
    target: usize,
    cur: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    best: &mut Option<(u64, Vec<Option<usize>>)>,
) {
    let remaining = cands.len() - k;
    if matched + remaining < target {
        return;
    }
    if k == cands.len() {
        if matched < target {
            return;
        }
        let ch = count_chunks(cur);
        if best.as_ref().is_none_or(|(b, _)| ch < *b) {
            *best = Some((ch, cur.clone()));
        }
        return;
    }
    let (i, c) = &cands[k];
    for &j in c {
        if !used[j] {
            used[j] = true;
            cur[*i] = Some(j);
            search(cands, k + 1, matched + 1, target, cur, used, best);
            cur[*i] = None;
            used[j] = false;
        }
    }
    search(cands, k + 1, matched, target, cur, used, best);
}

/// Exact-then-stem alignment statistics of one sentence pair.
pub fn meteor_stats(hyp: &Sentence, reference: &Sentence) -> MeteorStats {
    let (h, r) = (hyp.words(), reference.words());
    let mut align = vec![None; h.len()];
    let mut used = vec![false; r.len()];
    let exact = |ws: &[&str]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>();
    stage(&mut align, &mut used, &exact(&h), &exact(&r));
    let stems = |ws: &[&str]| ws.iter().map(|w| stem(w, METEOR_STEM_LEN)).collect::<Vec<_>>();
    stage(&mut align, &mut used, &stems(&h), &stems(&r));
    MeteorStats {
        matches: align.iter().filter(|a| a.is_some()).count() as u64,
        hyp_len: h.len() as u64,
        ref_len: r.len() as u64,
        chunks: count_chunks(&align),
    }
}

/// Sentence-level METEOR in [0, 100].
pub fn meteor(hyp: &Sentence, reference: &Sentence) -> f64 {
    meteor_stats(hyp, reference).score()
}

/// Corpus METEOR from summed statistics; each hypothesis uses its
/// best-scoring reference.
pub fn meteor_corpus(hyps: &[Sentence], refs: &[Vec<Sentence>]) -> Result<f64> {
    check_corpus(hyps, refs)?;
    let mut total = MeteorStats::default();
    for (h, rs) in hyps.iter().zip(refs) {
        let best = rs
            .iter()
            .map(|r| meteor_stats(h, r))
            .reduce(|a, b| if b.score() > a.score() { b } else { a })
            .expect("references checked non-empty");
        total.add(&best);
    }
    Ok(total.score())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Sentence {
        Sentence::from_whitespace(x)
    }

    #[test]
    fn fixtures() {
        let six = s("a b c d e f");
        let expect = 100.0 * (1.0 - 0.5 * (1.0f64 / 6.0).powi(3));
        assert!((meteor(&six, &six) - expect).abs() < 1e-12);
        assert!((meteor(&six, &six) - 99.77).abs() < 0.005);
        assert!((meteor(&s("b a"), &s("a b")) - 50.0).abs() < 1e-12);
        assert_eq!(meteor(&s("x y"), &s("a b")), 0.0);
    }

    #[test]
    fn prefers_fewer_chunks() {
        // "a" could match either reference "a"; picking the second keeps one chunk
        let st = meteor_stats(&s("a b"), &s("a x a b"));
        assert_eq!((st.matches, st.chunks), (2, 1));
    }

    #[test]
    fn stem_stage_matches_inflections() {
        let st = meteor_stats(&s("samochodem jedzie"), &s("samochodu jedzie"));
        assert_eq!(st.matches, 2);
        assert_eq!(st.chunks, 1);
    }
}
