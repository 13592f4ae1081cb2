use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::features::Models;
use super::search::{decode_corpus, Decoder, DecoderConfig};
use super::weights::Weights;
use crate::corpus::{ParallelCorpus, Sentence};
use crate::error::{Error, Result};
use crate::metrics::bleu;

/// Multipliers tried for each weight. A zero weight tries `±g` instead.
pub const GRID: [f64; 7] = [0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TuneOptions {
    pub restarts: usize,
    /// Maximum coordinate-ascent rounds per restart.
    pub iterations: usize,
    pub seed: u64,
    pub bleu_max_n: usize,
}

impl Default for TuneOptions {
    fn default() -> Self {
        TuneOptions {
            restarts: 8,
            iterations: 30,
            seed: 1,
            bleu_max_n: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub weights: Weights,
    pub bleu: f64,
    pub initial_bleu: f64,
}

struct Dev<'a> {
    sources: Vec<&'a Sentence>,
    refs: Vec<Vec<Sentence>>,
    models: Models<'a>,
    config: DecoderConfig,
    max_n: usize,
}

impl Dev<'_> {
    fn score(&self, w: &Weights) -> Result<f64> {
        let decoder = Decoder::new(self.models, w.clone(), self.config)?;
        let out = decode_corpus(&decoder, self.sources.par_iter().copied())?;
        let hyps: Vec<Sentence> = out.into_iter().map(|t| t.output).collect();
        bleu(&hyps, &self.refs, self.max_n)
    }
}

fn candidates(w: &Weights, k: usize) -> Vec<Weights> {
    let current = w.0[k];
    let values: Vec<f64> = if current == 0.0 {
        GRID.iter().flat_map(|&g| [g, -g]).collect()
    } else {
        GRID.iter().filter(|&&g| g != 1.0).map(|&g| current * g).collect()
    };
    values
        .into_iter()
        .map(|v| {
            let mut c = w.clone();
            c.0[k] = v;
            c
        })
        .collect()
}

/// Coordinate ascent from `start`. Returns the final weights and their BLEU.
fn ascend(dev: &Dev, start: Weights, start_bleu: f64, active: &[usize], rounds: usize) -> Result<(Weights, f64)> {
    let (mut w, mut best) = (start, start_bleu);
    for _ in 0..rounds {
        let mut improved = false;
        for &k in active {
            let cands = candidates(&w, k);
            let scores: Vec<f64> = cands.par_iter().map(|c| dev.score(c)).collect::<Result<_>>()?;
            // first strictly best candidate in grid order
            let mut pick = None;
            for (i, &s) in scores.iter().enumerate() {
                if s > pick.map_or(best, |(_, b)| b) {
                    pick = Some((i, s));
                }
            }
            if let Some((i, s)) = pick {
                w = cands[i].clone();
                best = s;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    Ok((w, best))
}

/// Grid coordinate ascent on dev-set BLEU with seeded random restarts.
///
/// Restart 0 starts from `initial`; later restarts multiply each active
/// non-zero weight by a factor drawn from U(0.5, 2) and replace active zero
/// weights by draws from U(-0.5, 0.5). The best restart wins, earlier ones on
/// ties, and the result is never worse than `initial`.
pub fn tune_weights(
    dev: &ParallelCorpus,
    models: Models,
    initial: &Weights,
    config: DecoderConfig,
    opts: &TuneOptions,
) -> Result<TuneResult> {
    if dev.is_empty() {
        return Err(Error::InvalidArgument("tuning needs a non-empty dev set".into()));
    }
    let dev = Dev {
        sources: dev.pairs.iter().map(|p| &p.source).collect(),
        refs: dev.pairs.iter().map(|p| vec![p.target.clone()]).collect(),
        models,
        config,
        max_n: opts.bleu_max_n,
    };
    let active = Weights::active_features(models.reordering.map(|r| r.scheme));
    let initial_bleu = dev.score(initial)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut best_w, mut best) = (initial.clone(), initial_bleu);
    for restart in 0..opts.restarts.max(1) {
        let (start, start_bleu) = if restart == 0 {
            (initial.clone(), initial_bleu)
        } else {
            let mut w = initial.clone();
            for &k in &active {
                w.0[k] = if w.0[k] == 0.0 {
                    rng.random_range(-0.5..0.5)
                } else {
                    w.0[k] * rng.random_range(0.5..2.0)
                };
            }
            let b = dev.score(&w)?;
            (w, b)
        };
        let (w, b) = ascend(&dev, start, start_bleu, &active, opts.iterations)?;
        log::debug!("restart {restart}: dev BLEU {b:.4}");
        if b > best {
            best_w = w;
            best = b;
        }
    }
    Ok(TuneResult {
        weights: best_w,
        bleu: best,
        initial_bleu,
    })
}
