//! Corpus-level BLEU, NIST, METEOR, TER and RIBES, and the five-column
//! evaluation report.

mod bleu;
mod meteor;
mod nist;
mod report;
mod ribes;
mod ter;

pub use bleu::{bleu, bleu_stats, NGramMatchStats};
pub use meteor::{meteor, meteor_corpus, meteor_stats, MeteorStats, METEOR_STEM_LEN};
pub use nist::nist;
pub use report::{
    evaluate, evaluate_files, sentence_breakdown, sentence_breakdown_files, EvaluateOptions, EvaluationReport, Metric,
};
pub use ribes::{ribes, ribes_corpus, Correlation, RibesOptions};
pub use ter::{edit_distance, ter, ter_corpus, ter_edits, MAX_SHIFT_LEN};

use crate::corpus::Sentence;
use crate::error::{Error, Result};

pub(crate) fn check_corpus(hyps: &[Sentence], refs: &[Vec<Sentence>]) -> Result<()> {
    if hyps.is_empty() {
        return Err(Error::InvalidArgument("no hypotheses to score".into()));
    }
    if hyps.len() != refs.len() {
        return Err(Error::LineCountMismatch {
            source_lines: hyps.len(),
            target_lines: refs.len(),
        });
    }
    if refs.iter().any(Vec::is_empty) {
        return Err(Error::InvalidArgument("every hypothesis needs at least one reference".into()));
    }
    Ok(())
}

/// n-gram counts of a token sequence.
pub(crate) fn ngram_counts<'a>(words: &[&'a str], n: usize) -> std::collections::HashMap<Vec<&'a str>, u64> {
    let mut out = std::collections::HashMap::new();
    if words.len() >= n {
        for w in words.windows(n) {
            *out.entry(w.to_vec()).or_insert(0) += 1;
        }
    }
    out
}
