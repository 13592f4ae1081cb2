//! Stack-based phrase decoder over a log-linear model, exact derivation
//! scoring, and a grid coordinate-ascent weight tuner.

mod features;
mod search;
mod tune;
mod weights;

pub use features::{derivation_features, derivation_steps, score_derivation, AppliedPhrase, Models};
pub use search::{decode_corpus, Decoder, DecoderConfig, Translation};
pub use tune::{tune_weights, TuneOptions, TuneResult, GRID};
pub use weights::{FeatureVector, Weights, FEATURE_NAMES, NUM_FEATURES};
