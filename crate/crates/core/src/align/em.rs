use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::lexical::{Interner, LexicalTable, NULL_ID};
use crate::corpus::ParallelCorpus;
use crate::error::{Error, Result};

/// Id-encoded training data: each pair is (generated ids, conditioning ids).
pub(crate) struct Encoded {
    pub pairs: Vec<(Vec<u32>, Vec<u32>)>,
    pub generated: Interner,
    pub conditioning: Interner,
}

/// Source words are generated from target words.
pub(crate) fn encode(corpus: &ParallelCorpus) -> Result<Encoded> {
    if corpus.is_empty() {
        return Err(Error::InvalidArgument("alignment training needs a non-empty corpus".into()));
    }
    let mut generated = Interner::default();
    let mut conditioning = Interner::with_null();
    let pairs = corpus
        .pairs
        .iter()
        .map(|p| {
            let f = p.source.iter().map(|t| generated.intern(t)).collect();
            let e = p.target.iter().map(|t| conditioning.intern(t)).collect();
            (f, e)
        })
        .collect();
    Ok(Encoded {
        pairs,
        generated,
        conditioning,
    })
}

/// Uniform `t(f|e)` over the generated words co-occurring with `e`.
pub(crate) fn initial_table(enc: &Encoded) -> LexicalTable {
    let mut cooc: HashMap<u32, std::collections::HashSet<u32>> = HashMap::new();
    for (f, e) in &enc.pairs {
        for &ew in e.iter().chain(std::iter::once(&NULL_ID)) {
            let set = cooc.entry(ew).or_default();
            set.extend(f.iter().copied());
        }
    }
    let mut table = LexicalTable::new(enc.generated.clone(), enc.conditioning.clone());
    for (e, fs) in cooc {
        let p = 1.0 / fs.len() as f64;
        for f in fs {
            table.set_ids(e, f, p);
        }
    }
    table
}

/// Diagonal alignment prior for generated position `j` (0-based) of `n`
/// over `m` conditioning positions. Fills `out` with link probabilities and
/// returns the null probability.
pub(crate) fn diagonal_prior(j: usize, n: usize, m: usize, tension: f64, p_null: f64, out: &mut Vec<f64>) -> f64 {
    out.clear();
    let mut z = 0.0;
    for i in 0..m {
        let w = (-tension * feature(i, j, m, n)).exp();
        out.push(w);
        z += w;
    }
    for w in out.iter_mut() {
        *w *= (1.0 - p_null) / z;
    }
    p_null
}

pub(crate) fn feature(i: usize, j: usize, m: usize, n: usize) -> f64 {
    ((i + 1) as f64 / m as f64 - (j + 1) as f64 / n as f64).abs()
}

#[derive(Clone, Copy)]
pub(crate) enum Prior {
    Uniform,
    Diagonal { tension: f64, p_null: f64 },
}

#[derive(Default)]
pub(crate) struct Expectations {
    pub counts: HashMap<u64, f64>,
    pub totals: HashMap<u32, f64>,
    pub loglik: f64,
    pub tokens: usize,
    /// Σ posterior · |i/m − j/n| over non-null links.
    pub empirical_feature: f64,
    /// Non-null posterior mass per (m, n) and generated position.
    pub link_mass: BTreeMap<(usize, usize), Vec<f64>>,
}

impl Expectations {
    fn merge(&mut self, other: Expectations) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0.0) += v;
        }
        for (k, v) in other.totals {
            *self.totals.entry(k).or_insert(0.0) += v;
        }
        self.loglik += other.loglik;
        self.tokens += other.tokens;
        self.empirical_feature += other.empirical_feature;
        for (k, v) in other.link_mass {
            let slot = self.link_mass.entry(k).or_insert_with(|| vec![0.0; v.len()]);
            for (a, b) in slot.iter_mut().zip(v) {
                *a += b;
            }
        }
    }
}

const SHARDS: usize = 32;

/// One E-step. Shards depend only on the corpus size and are merged in
/// shard order, so results do not depend on the thread count.
pub(crate) fn expectations(enc: &Encoded, table: &LexicalTable, prior: Prior) -> Expectations {
    let shard = enc.pairs.len().div_ceil(SHARDS).max(1);
    let parts: Vec<Expectations> = enc
        .pairs
        .par_chunks(shard)
        .map(|chunk| {
            let mut ex = Expectations::default();
            let mut weights = Vec::new();
            for (f, e) in chunk {
                accumulate(&mut ex, table, f, e, prior, &mut weights);
            }
            ex
        })
        .collect();
    let mut total = Expectations::default();
    for p in parts {
        total.merge(p);
    }
    total
}

fn accumulate(ex: &mut Expectations, table: &LexicalTable, f: &[u32], e: &[u32], prior: Prior, weights: &mut Vec<f64>) {
    let (n, m) = (f.len(), e.len());
    if n == 0 {
        return;
    }
    let mut mass = match prior {
        Prior::Diagonal { .. } => Some(vec![0.0; n]),
        Prior::Uniform => None,
    };
    for (j, &fw) in f.iter().enumerate() {
        let null_prior = match prior {
            Prior::Uniform => {
                weights.clear();
                weights.resize(m, 1.0 / (m + 1) as f64);
                1.0 / (m + 1) as f64
            }
            Prior::Diagonal { tension, p_null } => diagonal_prior(j, n, m, tension, p_null, weights),
        };
        for (i, &ew) in e.iter().enumerate() {
            weights[i] *= table.get_ids(ew, fw);
        }
        let null_w = null_prior * table.get_ids(NULL_ID, fw);
        let z: f64 = weights.iter().sum::<f64>() + null_w;
        if z <= 0.0 {
            continue;
        }
        ex.loglik += z.ln();
        ex.tokens += 1;
        let key = |e: u32| ((e as u64) << 32) | fw as u64;
        for (i, &ew) in e.iter().enumerate() {
            let post = weights[i] / z;
            *ex.counts.entry(key(ew)).or_insert(0.0) += post;
            *ex.totals.entry(ew).or_insert(0.0) += post;
            if let Some(mass) = mass.as_mut() {
                mass[j] += post;
                ex.empirical_feature += post * feature(i, j, m, n);
            }
        }
        let post = null_w / z;
        *ex.counts.entry(key(NULL_ID)).or_insert(0.0) += post;
        *ex.totals.entry(NULL_ID).or_insert(0.0) += post;
    }
    if let Some(mass) = mass {
        let slot = ex.link_mass.entry((m, n)).or_insert_with(|| vec![0.0; n]);
        for (a, b) in slot.iter_mut().zip(mass) {
            *a += b;
        }
    }
}

/// M-step: renormalize expected counts per conditioning word.
pub(crate) fn maximize(enc: &Encoded, ex: &Expectations) -> LexicalTable {
    let mut table = LexicalTable::new(enc.generated.clone(), enc.conditioning.clone());
    for (&k, &c) in &ex.counts {
        let e = (k >> 32) as u32;
        let total = ex.totals[&e];
        if total > 0.0 {
            table.probs.insert(k, c / total);
        }
    }
    table
}

/// Asserts that a log-likelihood trace does not decrease.
pub(crate) fn assert_non_decreasing(trace: &[f64]) {
    for w in trace.windows(2) {
        let tol = 1e-9 * w[0].abs().max(1.0);
        assert!(
            w[1] >= w[0] - tol,
            "EM log-likelihood decreased: {} -> {}",
            w[0],
            w[1]
        );
    }
}
