//! Brute-force metric references.

/// Textbook Levenshtein distance over words.
pub fn levenshtein(a: &[&str], b: &[&str]) -> usize {
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 0..=a.len() {
        d[i][0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = if a[i - 1] == b[j - 1] { 0 } else { 1 };
            d[i][j] = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
        }
    }
    d[a.len()][b.len()]
}

/// Every sequence obtained from `h` by moving one contiguous block.
fn single_moves<'a>(h: &[&'a str]) -> Vec<Vec<&'a str>> {
    let mut out = Vec::new();
    for i in 0..h.len() {
        for j in i + 1..=h.len() {
            let block = &h[i..j];
            let rest: Vec<&str> = h[..i].iter().chain(&h[j..]).copied().collect();
            for k in 0..=rest.len() {
                if k == i {
                    continue;
                }
                let mut v = rest[..k].to_vec();
                v.extend_from_slice(block);
                v.extend_from_slice(&rest[k..]);
                out.push(v);
            }
        }
    }
    out
}

/// Fewest (shifts + edits) over every sequence of at most two unrestricted
/// block moves followed by edit distance.
pub fn ter_two_shift_optimum(h: &[&str], r: &[&str]) -> usize {
    let mut best = levenshtein(h, r);
    for one in single_moves(h) {
        best = best.min(1 + levenshtein(&one, r));
        for two in single_moves(&one) {
            best = best.min(2 + levenshtein(&two, r));
        }
    }
    best
}

/// BLEU with one reference per sentence, spelled out from n-gram lists.
pub fn bleu_single_ref(hyps: &[Vec<&str>], refs: &[Vec<&str>], max_n: usize) -> f64 {
    let mut log_p = 0.0;
    for n in 1..=max_n {
        let (mut matched, mut total) = (0usize, 0usize);
        for (h, r) in hyps.iter().zip(refs) {
            let hg: Vec<&[&str]> = if h.len() >= n { h.windows(n).collect() } else { vec![] };
            let mut rg: Vec<&[&str]> = if r.len() >= n { r.windows(n).collect() } else { vec![] };
            total += hg.len();
            for g in hg {
                if let Some(pos) = rg.iter().position(|x| *x == g) {
                    rg.remove(pos);
                    matched += 1;
                }
            }
        }
        if matched == 0 {
            return 0.0;
        }
        log_p += (matched as f64 / total as f64).ln() / max_n as f64;
    }
    let c: usize = hyps.iter().map(Vec::len).sum();
    let r: usize = refs.iter().map(Vec::len).sum();
    let bp = if c < r { (1.0 - r as f64 / c as f64).exp() } else { 1.0 };
    100.0 * bp * log_p.exp()
}
