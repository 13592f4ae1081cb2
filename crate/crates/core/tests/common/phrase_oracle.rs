//! Brute-force phrase extraction: every box is checked against every link.

pub fn consistent_boxes(n: usize, m: usize, links: &[(usize, usize)], max_len: usize) -> Vec<((usize, usize), (usize, usize))> {
    let mut out = Vec::new();
    for s0 in 0..n {
        for s1 in s0 + 1..=n {
            for t0 in 0..m {
                for t1 in t0 + 1..=m {
                    if s1 - s0 > max_len || t1 - t0 > max_len {
                        continue;
                    }
                    let inside = |&(s, t): &(usize, usize)| s0 <= s && s < s1 && t0 <= t && t < t1;
                    let touches = |&(s, t): &(usize, usize)| (s0 <= s && s < s1) || (t0 <= t && t < t1);
                    if links.iter().any(inside) && links.iter().filter(|l| touches(l)).all(inside) {
                        out.push(((s0, s1), (t0, t1)));
                    }
                }
            }
        }
    }
    out.sort();
    out
}
