//! A self-contained phrase-based statistical machine translation toolkit.
//!
//! The pipeline mirrors a classic Moses-style setup at desk scale:
//!
//! * [`corpus`]: ingestion, cleaning, normalization, tokenization, truecasing, splitting
//! * [`lm`]: order-n language models with interpolated Kneser-Ney or Witten-Bell smoothing
//! * [`align`]: IBM Model 1 and fast-align style word alignment plus symmetrization
//! * [`phrase`]: phrase extraction, phrase-table scoring, lexicalized reordering, compound splitting
//! * [`decode`]: stack-based beam search over a log-linear model and a grid tuner
//! * [`metrics`]: BLEU, NIST, METEOR, RIBES and TER
//! * [`harness`]: experiment configs, cached stages and score tables

pub mod align;
pub mod corpus;
pub mod decode;
pub mod error;
pub mod harness;
pub mod lm;
pub mod metrics;
pub mod phrase;
pub mod textio;

pub use error::{Error, Result};
