use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::types::ParallelCorpus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSplit {
    pub train: ParallelCorpus,
    pub dev: ParallelCorpus,
    pub test: ParallelCorpus,
}

/// Unbiased draw from `0..n` by rejection: values below `2^64 mod n` are
/// redrawn, the rest are reduced modulo `n`.
fn uniform_below(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    let threshold = n.wrapping_neg() % n;
    loop {
        let x = rng.next_u64();
        if x >= threshold {
            return x % n;
        }
    }
}

/// Carves disjoint dev and test samples out of a corpus.
///
/// The sample is a partial Fisher-Yates shuffle of the indices `0..N` driven
/// by ChaCha8 seeded through `seed_from_u64(seed)`: for `i` in
/// `0..n_dev + n_test`, swap position `i` with `i + uniform_below(N - i)`.
/// The first `n_dev` shuffled indices form dev, the next `n_test` form test;
/// both are emitted in original corpus order, as is the remaining train part.
pub fn split_corpus(
    corpus: &ParallelCorpus,
    n_dev: usize,
    n_test: usize,
    seed: u64,
) -> Result<CorpusSplit> {
    let size = corpus.len();
    let held_out = n_dev + n_test;
    if size <= held_out {
        return Err(Error::CorpusTooSmall {
            size,
            needed: held_out,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..size).collect();
    for i in 0..held_out {
        let j = i + uniform_below(&mut rng, (size - i) as u64) as usize;
        order.swap(i, j);
    }
    // 0 = train, 1 = dev, 2 = test
    let mut part = vec![0u8; size];
    for &i in &order[..n_dev] {
        part[i] = 1;
    }
    for &i in &order[n_dev..held_out] {
        part[i] = 2;
    }
    let pick = |which: u8| {
        let pairs = corpus
            .pairs
            .iter()
            .zip(&part)
            .filter(|(_, &p)| p == which)
            .map(|(pair, _)| pair.clone())
            .collect();
        ParallelCorpus::new(pairs, &corpus.source_lang, &corpus.target_lang)
    };
    Ok(CorpusSplit {
        train: pick(0),
        dev: pick(1),
        test: pick(2),
    })
}
