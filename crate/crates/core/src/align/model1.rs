use super::em::{self, Prior};
use super::lexical::LexicalTable;
use crate::corpus::ParallelCorpus;
use crate::error::{Error, Result};

/// A trained Model 1 table with the corpus log-likelihood seen at each
/// E-step, plus one final entry for the returned table.
#[derive(Debug, Clone)]
pub struct Model1Training {
    pub table: LexicalTable,
    pub log_likelihoods: Vec<f64>,
}

/// IBM Model 1 EM producing `t(source | target)`.
pub fn train_model1(corpus: &ParallelCorpus, iterations: usize) -> Result<LexicalTable> {
    Ok(train_model1_traced(corpus, iterations, |_, _| {})?.table)
}

/// Like [`train_model1`], calling `observer(k, table)` after iteration `k`
/// (1-based).
pub fn train_model1_traced(
    corpus: &ParallelCorpus,
    iterations: usize,
    mut observer: impl FnMut(usize, &LexicalTable),
) -> Result<Model1Training> {
    if iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be at least 1".into()));
    }
    let enc = em::encode(corpus)?;
    let mut table = em::initial_table(&enc);
    let mut log_likelihoods = Vec::with_capacity(iterations + 1);
    for k in 1..=iterations {
        let ex = em::expectations(&enc, &table, Prior::Uniform);
        log_likelihoods.push(ex.loglik);
        table = em::maximize(&enc, &ex);
        observer(k, &table);
    }
    log_likelihoods.push(em::expectations(&enc, &table, Prior::Uniform).loglik);
    em::assert_non_decreasing(&log_likelihoods);
    Ok(Model1Training {
        table,
        log_likelihoods,
    })
}
