//! Parallel corpus ingestion and preparation.
//!
//! Corpora arrive as two UTF-8 files with one sentence per line, line `i` of
//! the source file aligned with line `i` of the target file.

mod clean;
mod split;
mod tokenize;
mod truecase;
mod types;

pub use clean::{
    clean_pair, collapse_adjacent_duplicates, filter_noise, CleanConfig, CleanDecision,
    DropReason, NoiseDecision, Script, DEFAULT_NOISE_THRESHOLD,
};
pub use split::{split_corpus, CorpusSplit};
pub use tokenize::{normalize_punctuation, stem, tokenize};
pub use truecase::TruecaseModel;
pub use types::{
    corpus_stats, CorpusStats, ParallelCorpus, Sentence, SentencePair, Token, Vocabulary,
};
