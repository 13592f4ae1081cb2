use std::fmt;

use super::weights::{self, FeatureVector, Weights, NUM_FEATURES};
use crate::corpus::Sentence;
use crate::error::{Error, Result};
use crate::lm::NGramModel;
use crate::phrase::{classify_next_orientation, classify_orientation, PhraseSpan, PhraseTable, ReorderingModel, Span};

/// The models a decoder reads.
#[derive(Debug, Clone, Copy)]
pub struct Models<'a> {
    pub table: &'a PhraseTable,
    pub lm: &'a NGramModel,
    pub reordering: Option<&'a ReorderingModel>,
}

/// One step of a derivation: a source span translated by a target phrase,
/// or copied through when `oov` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AppliedPhrase {
    pub source_span: Span,
    pub target_span: Span,
    pub source: String,
    pub target: String,
    pub oov: bool,
}

impl AppliedPhrase {
    pub fn spans(&self) -> PhraseSpan {
        PhraseSpan::new(self.source_span, self.target_span)
    }
}

impl fmt::Display for AppliedPhrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ||| {} => {}", self.source_span, self.source, self.target)?;
        if self.oov {
            f.write_str(" (oov)")?;
        }
        Ok(())
    }
}

/// ln of the four phrase scores, or zeros for a copied word.
fn phrase_log_scores(table: &PhraseTable, source: &str, target: &str, oov: bool) -> Result<[f64; 4]> {
    if oov {
        return Ok([0.0; 4]);
    }
    let sc = table
        .get(source, target)
        .ok_or_else(|| Error::InvalidArgument(format!("no phrase-table entry {source:?} => {target:?}")))?;
    Ok(sc.as_array().map(f64::ln))
}

/// ln of the reordering probability of `o` in `dist` (scheme order).
pub(crate) fn reordering_ln(model: &ReorderingModel, dist: &[f64], o: crate::phrase::Orientation) -> f64 {
    model.scheme.index(o).map_or(0.0, |i| dist[i].ln())
}

/// Per-step feature contributions of a derivation. The LM end-of-sentence
/// term and the final next-orientation belong to the last step; the next
/// orientation of phrase i is charged to step i.
pub fn derivation_steps(sentence: &Sentence, derivation: &[AppliedPhrase], models: Models) -> Result<Vec<FeatureVector>> {
    let n = sentence.len();
    let words = sentence.words();
    let mut covered = vec![false; n];
    let mut t = 0;
    for d in derivation {
        let s = d.source_span;
        if s.is_empty() || s.end > n {
            return Err(Error::InvalidArgument(format!("span {s} outside a {n}-word sentence")));
        }
        if words[s.start..s.end].join(" ") != d.source {
            return Err(Error::InvalidArgument(format!("span {s} does not read {:?}", d.source)));
        }
        if d.oov && (s.len() != 1 || d.target != d.source) {
            return Err(Error::InvalidArgument("copied phrases must be single source words".into()));
        }
        let len = d.target.split_whitespace().count();
        if d.target_span != Span::new(t, t + len) {
            return Err(Error::InvalidArgument(format!("target span {} is not contiguous with its predecessor", d.target_span)));
        }
        t += len;
        for c in &mut covered[s.start..s.end] {
            if *c {
                return Err(Error::InvalidArgument(format!("span {s} overlaps an earlier phrase")));
            }
            *c = true;
        }
    }
    if covered.iter().any(|c| !c) {
        return Err(Error::InvalidArgument("derivation does not cover the sentence".into()));
    }

    let lm = models.lm;
    let mut history = vec![lm.bos()];
    let mut prev_end = 0usize;
    let spans: Vec<PhraseSpan> = derivation.iter().map(AppliedPhrase::spans).collect();
    let mut steps = Vec::with_capacity(derivation.len());
    for (i, d) in derivation.iter().enumerate() {
        let mut h = [0.0; NUM_FEATURES];
        h[..4].copy_from_slice(&phrase_log_scores(models.table, &d.source, &d.target, d.oov)?);
        h[weights::DISTORTION] = -(d.source_span.start.abs_diff(prev_end) as f64);
        prev_end = d.source_span.end;
        let mut words = 0;
        for w in d.target.split_whitespace() {
            let id = lm.id(w);
            h[weights::LM] += lm.logprob_ids(&history, id);
            history.push(id);
            words += 1;
        }
        h[weights::WORD_PENALTY] = words as f64;
        h[weights::PHRASE_PENALTY] = 1.0;
        h[weights::OOV] = if d.oov { -1.0 } else { 0.0 };
        if let Some(r) = models.reordering {
            let (prev_dist, next_dist) = r.distributions(&d.source, &d.target);
            let o = classify_orientation(&spans[..i], &spans[i], r.scheme)?;
            h[weights::reo_prev(o)] += reordering_ln(r, prev_dist, o);
            let o = classify_next_orientation(spans.get(i + 1), &spans[i], n, r.scheme)?;
            h[weights::reo_next(o)] += reordering_ln(r, next_dist, o);
        }
        if i + 1 == derivation.len() {
            h[weights::LM] += lm.logprob_ids(&history, lm.eos());
        }
        steps.push(h);
    }
    Ok(steps)
}

/// Total feature vector of a complete derivation.
pub fn derivation_features(sentence: &Sentence, derivation: &[AppliedPhrase], models: Models) -> Result<FeatureVector> {
    let mut total = [0.0; NUM_FEATURES];
    for h in derivation_steps(sentence, derivation, models)? {
        for (t, v) in total.iter_mut().zip(h) {
            *t += v;
        }
    }
    Ok(total)
}

/// Σ_k w_k·h_k over the derivation's features.
pub fn score_derivation(sentence: &Sentence, derivation: &[AppliedPhrase], models: Models, weights: &Weights) -> Result<f64> {
    Ok(weights.dot(&derivation_features(sentence, derivation, models)?))
}
