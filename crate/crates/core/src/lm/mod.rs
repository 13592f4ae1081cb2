//! Backoff n-gram language models.
//!
//! Sentences are padded with one `<s>` (context only, never predicted) and
//! one `</s>` (predicted). Probabilities are stored as log10 values in an
//! ARPA-style backoff layout: a stored n-gram carries its full smoothed
//! probability, a stored history carries the weight applied when backing off.

mod counts;
mod estimate;
mod format;
mod model;
mod vocab;

pub use counts::{count_ngrams, count_ngrams_with_floor, NGramCounts};
pub use estimate::{
    estimate_kneser_ney, estimate_kneser_ney_with, estimate_witten_bell, KneserNeyOptions,
};
pub use model::{NGramModel, Smoothing};
pub use vocab::{LmVocab, BOS, EOS, UNK};

/// Longest supported n-gram order.
pub const MAX_ORDER: usize = 15;
