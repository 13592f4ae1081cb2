use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::fast_align::{train_fast_align, FastAlignOptions};
use super::links::AlignmentLinks;
use super::model1::train_model1;
use super::symmetrize::{symmetrize, SymmetrizationHeuristic};
use super::viterbi::{viterbi_align, AlignmentModel, Direction};
use crate::corpus::{stem, ParallelCorpus, SentencePair};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Model1,
    FastAlign,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Model1 => "model1",
            ModelKind::FastAlign => "fast_align",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "model1" => Ok(ModelKind::Model1),
            "fast_align" | "fast-align" => Ok(ModelKind::FastAlign),
            _ => Err(Error::InvalidArgument(format!("unknown alignment model {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignConfig {
    pub model: ModelKind,
    pub heuristic: SymmetrizationHeuristic,
    pub stem_k: Option<usize>,
    /// Model 1 iterations; fast-align uses `fast_align.iterations`.
    pub iterations: usize,
    pub fast_align: FastAlignOptions,
}

impl Default for AlignConfig {
    fn default() -> Self {
        AlignConfig {
            model: ModelKind::Model1,
            heuristic: SymmetrizationHeuristic::GrowDiagFinalAnd,
            stem_k: None,
            iterations: 5,
            fast_align: FastAlignOptions::default(),
        }
    }
}

/// Both directional models and the symmetrized links, one per pair.
#[derive(Debug, Clone)]
pub struct AlignedCorpus {
    /// Generates source words from target words.
    pub forward: AlignmentModel,
    /// Generates target words from source words.
    pub backward: AlignmentModel,
    pub links: Vec<AlignmentLinks>,
}

impl AlignedCorpus {
    pub fn to_pharaoh(&self) -> String {
        let mut out = String::new();
        for l in &self.links {
            out.push_str(&l.to_pharaoh());
            out.push('\n');
        }
        out
    }
}

/// Corpus with every token replaced by its `k`-prefix stem.
pub fn stem_corpus(corpus: &ParallelCorpus, k: usize) -> ParallelCorpus {
    ParallelCorpus {
        pairs: corpus
            .pairs
            .iter()
            .map(|p| SentencePair {
                source: p.source.map_tokens(|t| stem(t, k)),
                target: p.target.map_tokens(|t| stem(t, k)),
                line_number: p.line_number,
            })
            .collect(),
        source_lang: corpus.source_lang.clone(),
        target_lang: corpus.target_lang.clone(),
    }
}

fn train(corpus: &ParallelCorpus, config: &AlignConfig) -> Result<AlignmentModel> {
    Ok(match config.model {
        ModelKind::Model1 => train_model1(corpus, config.iterations)?.into(),
        ModelKind::FastAlign => train_fast_align(corpus, &config.fast_align)?.into(),
    })
}

/// Trains both directions, aligns every pair and symmetrizes. With
/// `stem_k` set, training and alignment see stemmed tokens; indices are
/// unchanged since stemming is token-to-token.
pub fn align_corpus(corpus: &ParallelCorpus, config: &AlignConfig) -> Result<AlignedCorpus> {
    if config.stem_k == Some(0) {
        return Err(Error::InvalidArgument("stem_k must be at least 1".into()));
    }
    let stemmed;
    let work = match config.stem_k {
        Some(k) => {
            stemmed = stem_corpus(corpus, k);
            &stemmed
        }
        None => corpus,
    };
    let (forward, backward) = rayon::join(|| train(work, config), || train(&work.reversed(), config));
    let (forward, backward) = (forward?, backward?);
    let links = work
        .pairs
        .par_iter()
        .map(|p| {
            let f = viterbi_align(&forward, p, Direction::Forward);
            let b = viterbi_align(&backward, p, Direction::Backward);
            symmetrize(&f, &b, config.heuristic)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlignedCorpus {
        forward,
        backward,
        links,
    })
}
