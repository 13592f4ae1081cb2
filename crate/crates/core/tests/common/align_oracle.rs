//! Literal scan-to-fixpoint symmetrization over link lists.

pub fn symmetrize(n: usize, m: usize, fwd: &[(usize, usize)], bwd: &[(usize, usize)], heuristic: &str) -> Vec<(usize, usize)> {
    let union: Vec<(usize, usize)> = {
        let mut u: Vec<_> = fwd.iter().chain(bwd).copied().collect();
        u.sort();
        u.dedup();
        u
    };
    let mut a: Vec<(usize, usize)> = fwd.iter().filter(|p| bwd.contains(p)).copied().collect();
    match heuristic {
        "intersection" => {}
        "union" => a = union.clone(),
        _ => {
            let diag = heuristic != "grow";
            let mut nbrs = vec![(-1i64, 0i64), (0, -1), (1, 0), (0, 1)];
            if diag {
                nbrs.extend([(-1, -1), (-1, 1), (1, -1), (1, 1)]);
            }
            let src_aligned = |a: &Vec<(usize, usize)>, s: usize| a.iter().any(|p| p.0 == s);
            let tgt_aligned = |a: &Vec<(usize, usize)>, t: usize| a.iter().any(|p| p.1 == t);
            loop {
                let mut changed = false;
                for s in 0..n {
                    for t in 0..m {
                        if !a.contains(&(s, t)) {
                            continue;
                        }
                        for &(ds, dt) in &nbrs {
                            let (ns, nt) = (s as i64 + ds, t as i64 + dt);
                            if ns < 0 || nt < 0 || ns >= n as i64 || nt >= m as i64 {
                                continue;
                            }
                            let p = (ns as usize, nt as usize);
                            if union.contains(&p)
                                && !a.contains(&p)
                                && (!src_aligned(&a, p.0) || !tgt_aligned(&a, p.1))
                            {
                                a.push(p);
                                changed = true;
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            if heuristic == "grow-diag-final" || heuristic == "grow-diag-final-and" {
                let and = heuristic == "grow-diag-final-and";
                for s in 0..n {
                    for t in 0..m {
                        let p = (s, t);
                        if !union.contains(&p) || a.contains(&p) {
                            continue;
                        }
                        let (su, tu) = (!src_aligned(&a, s), !tgt_aligned(&a, t));
                        if if and { su && tu } else { su || tu } {
                            a.push(p);
                        }
                    }
                }
            }
        }
    }
    a.sort();
    a
}
