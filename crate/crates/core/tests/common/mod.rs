//! Independent reference implementations shared by the integration and
//! acceptance suites. Everything here is deliberately naive.
#![allow(dead_code)]

pub mod lm_oracle;
pub mod align_oracle;
pub mod phrase_oracle;
pub mod decode_oracle;
pub mod metric_oracle;
pub mod synthetic;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random sentences over a small alphabet, at most `max_tokens` tokens overall.
pub fn random_corpus(rng: &mut ChaCha8Rng, alphabet: &[&str], max_tokens: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut used = 0;
    while used < max_tokens {
        let len = rng.random_range(1..=6).min(max_tokens - used);
        let s: Vec<String> = (0..len)
            .map(|_| alphabet[rng.random_range(0..alphabet.len())].to_string())
            .collect();
        used += len;
        out.push(s);
    }
    out
}
