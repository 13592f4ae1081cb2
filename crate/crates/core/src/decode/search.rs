use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;

use super::features::{derivation_features, reordering_ln, AppliedPhrase, Models};
use super::weights::{self, FeatureVector, Weights};
use crate::corpus::Sentence;
use crate::error::{Error, Result};
use crate::phrase::{classify_next_orientation, classify_orientation, PhraseSpan, ReorderingScheme, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoderConfig {
    pub beam_size: usize,
    /// Maximum jump between consecutive source spans; `None` is unlimited
    /// and `Some(0)` is monotone.
    pub distortion_limit: Option<usize>,
    pub max_phrase_len: usize,
    pub recombination: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            beam_size: 100,
            distortion_limit: Some(6),
            max_phrase_len: 7,
            recombination: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Translation {
    pub output: Sentence,
    pub derivation: Vec<AppliedPhrase>,
    pub score: f64,
    pub features: FeatureVector,
    /// Set when search found no complete hypothesis and the source was
    /// copied word by word.
    pub fallback: bool,
}

impl Translation {
    /// One `span ||| phrase ||| features` line per step.
    pub fn trace(&self, sentence: &Sentence, models: Models) -> Result<Vec<String>> {
        let steps = super::features::derivation_steps(sentence, &self.derivation, models)?;
        Ok(self
            .derivation
            .iter()
            .zip(steps)
            .map(|(d, h)| {
                let feats: Vec<String> = weights::FEATURE_NAMES
                    .iter()
                    .zip(h)
                    .filter(|(_, v)| *v != 0.0)
                    .map(|(n, v)| format!("{n}={v}"))
                    .collect();
                format!("{d} ||| {}", feats.join(" "))
            })
            .collect())
    }
}

struct TableOption<'a> {
    target: &'a str,
    log_scores: [f64; 4],
}

struct SpanOption {
    span: Span,
    source: String,
    target: String,
    target_ids: Vec<u32>,
    oov: bool,
    /// Weighted phrase, word, phrase-count and OOV features.
    static_score: f64,
    /// ln P per orientation slot, previous and next direction.
    reo_prev: [f64; 5],
    reo_next: [f64; 5],
}

#[derive(Clone)]
struct Hyp {
    coverage: Vec<u64>,
    covered: usize,
    tail: Vec<u32>,
    last: Option<usize>,
    last_span: Span,
    score: f64,
    future: f64,
    parent: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct RecombKey {
    coverage: Vec<u64>,
    tail: Vec<u32>,
    last_end: usize,
    /// Start and option of the last phrase, when reordering needs them.
    last: Option<(usize, usize)>,
}

fn is_set(c: &[u64], i: usize) -> bool {
    c[i / 64] >> (i % 64) & 1 == 1
}

fn set(c: &mut [u64], i: usize) {
    c[i / 64] |= 1 << (i % 64);
}

pub struct Decoder<'a> {
    models: Models<'a>,
    weights: Weights,
    config: DecoderConfig,
    index: HashMap<&'a str, Vec<TableOption<'a>>>,
}

impl<'a> Decoder<'a> {
    pub fn new(models: Models<'a>, weights: Weights, config: DecoderConfig) -> Result<Self> {
        if config.beam_size == 0 {
            return Err(Error::InvalidArgument("beam size must be at least 1".into()));
        }
        if config.max_phrase_len == 0 {
            return Err(Error::InvalidArgument("max phrase length must be at least 1".into()));
        }
        let mut index: HashMap<&str, Vec<TableOption>> = HashMap::new();
        for ((s, t), sc) in &models.table.entries {
            index.entry(s.as_str()).or_default().push(TableOption {
                target: t.as_str(),
                log_scores: sc.as_array().map(f64::ln),
            });
        }
        Ok(Decoder {
            models,
            weights,
            config,
            index,
        })
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.config
    }

    fn options(&self, words: &[&str]) -> Vec<SpanOption> {
        let w = &self.weights.0;
        let lm = self.models.lm;
        let mut out = Vec::new();
        let mut push = |span: Span, source: &str, target: &str, log_scores: [f64; 4], oov: bool| {
            let target_ids: Vec<u32> = target.split_whitespace().map(|t| lm.id(t)).collect();
            let mut static_score = target_ids.len() as f64 * w[weights::WORD_PENALTY] + w[weights::PHRASE_PENALTY];
            static_score += (0..4).map(|k| w[k] * log_scores[k]).sum::<f64>();
            if oov {
                static_score -= w[weights::OOV];
            }
            let (mut reo_prev, mut reo_next) = ([0.0; 5], [0.0; 5]);
            if let Some(r) = self.models.reordering {
                let (p, n) = r.distributions(source, target);
                for &o in r.scheme.orientations() {
                    reo_prev[weights::orientation_slot(o)] = reordering_ln(r, p, o);
                    reo_next[weights::orientation_slot(o)] = reordering_ln(r, n, o);
                }
            }
            out.push(SpanOption {
                span,
                source: source.to_string(),
                target: target.to_string(),
                target_ids,
                oov,
                static_score,
                reo_prev,
                reo_next,
            });
        };
        for start in 0..words.len() {
            for end in start + 1..=words.len().min(start + self.config.max_phrase_len) {
                let source = words[start..end].join(" ");
                let found = self.index.get(source.as_str());
                if let Some(opts) = found {
                    for o in opts {
                        push(Span::new(start, end), &source, o.target, o.log_scores, false);
                    }
                }
                if end == start + 1 && found.is_none() {
                    push(Span::new(start, end), &source, &source, [0.0; 4], true);
                }
            }
        }
        out
    }

    /// Best-case score for covering each span, ignoring reordering and
    /// distortion; the LM part uses unigram estimates.
    fn future_costs(&self, n: usize, options: &[SpanOption]) -> Vec<Vec<f64>> {
        let lm = self.models.lm;
        let w_lm = self.weights.0[weights::LM];
        let mut fc = vec![vec![f64::NEG_INFINITY; n + 1]; n + 1];
        for o in options {
            let lm_est: f64 = o.target_ids.iter().map(|&id| lm.logprob_ids(&[], id)).sum();
            let est = o.static_score + w_lm * lm_est;
            let cell = &mut fc[o.span.start][o.span.end];
            if est > *cell {
                *cell = est;
            }
        }
        for len in 2..=n {
            for i in 0..=n - len {
                let j = i + len;
                for k in i + 1..j {
                    let v = fc[i][k] + fc[k][j];
                    if v > fc[i][j] {
                        fc[i][j] = v;
                    }
                }
            }
        }
        fc
    }

    fn future_of(&self, coverage: &[u64], n: usize, fc: &[Vec<f64>]) -> f64 {
        let mut total = 0.0;
        let mut i = 0;
        while i < n {
            if is_set(coverage, i) {
                i += 1;
                continue;
            }
            let mut j = i;
            while j < n && !is_set(coverage, j) {
                j += 1;
            }
            total += fc[i][j];
            i = j;
        }
        total
    }

    pub fn decode(&self, sentence: &Sentence) -> Result<Translation> {
        let words = sentence.words();
        let n = words.len();
        if n == 0 {
            return Ok(Translation {
                output: Sentence::default(),
                derivation: Vec::new(),
                score: 0.0,
                features: [0.0; weights::NUM_FEATURES],
                fallback: false,
            });
        }
        let options = self.options(&words);
        let fc = self.future_costs(n, &options);
        let lm = self.models.lm;
        let w = &self.weights.0;
        let keep = lm.order().saturating_sub(1);
        let blocks = n.div_ceil(64);
        let limit = self.config.distortion_limit;

        let mut arena: Vec<Hyp> = vec![Hyp {
            coverage: vec![0; blocks],
            covered: 0,
            tail: vec![lm.bos()],
            last: None,
            last_span: Span::new(0, 0),
            score: 0.0,
            future: fc[0][n],
            parent: None,
        }];
        let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        let mut keys: Vec<HashMap<RecombKey, usize>> = vec![HashMap::new(); n + 1];
        stacks[0].push(0);

        for k in 0..n {
            let mut stack = std::mem::take(&mut stacks[k]);
            stack.sort_by(|&a, &b| {
                let (a, b) = (&arena[a], &arena[b]);
                (b.score + b.future).total_cmp(&(a.score + a.future))
            });
            stack.truncate(self.config.beam_size);
            for &hi in &stack {
                for (oi, opt) in options.iter().enumerate() {
                    let h = &arena[hi];
                    let s = opt.span;
                    if (s.start..s.end).any(|i| is_set(&h.coverage, i)) {
                        continue;
                    }
                    let jump = s.start.abs_diff(h.last_span.end);
                    if limit.is_some_and(|l| jump > l) {
                        continue;
                    }
                    let mut coverage = h.coverage.clone();
                    for i in s.start..s.end {
                        set(&mut coverage, i);
                    }
                    let covered = h.covered + s.len();
                    if let Some(l) = limit {
                        if covered < n {
                            let first_gap = (0..n).find(|&i| !is_set(&coverage, i)).unwrap_or(n);
                            if first_gap.abs_diff(s.end) > l {
                                continue;
                            }
                        }
                    }
                    let mut score = h.score + opt.static_score - w[weights::DISTORTION] * jump as f64;
                    let mut tail = h.tail.clone();
                    let mut lm_delta = 0.0;
                    for &id in &opt.target_ids {
                        lm_delta += lm.logprob_ids(&tail, id);
                        tail.push(id);
                        if tail.len() > keep {
                            tail.remove(0);
                        }
                    }
                    if let Some(r) = self.models.reordering {
                        let cur = PhraseSpan::new(s, Span::new(0, 0));
                        let history: Vec<PhraseSpan> = match h.last {
                            None => Vec::new(),
                            Some(_) => {
                                let (mut a, mut b) = (h.last_span.start, h.last_span.end);
                                while a > 0 && is_set(&h.coverage, a - 1) {
                                    a -= 1;
                                }
                                while b < n && is_set(&h.coverage, b) {
                                    b += 1;
                                }
                                let block = match r.scheme {
                                    ReorderingScheme::Msd => h.last_span,
                                    ReorderingScheme::HierMslr => Span::new(a, b),
                                };
                                vec![PhraseSpan::new(block, Span::new(0, 0))]
                            }
                        };
                        let o = classify_orientation(&history, &cur, r.scheme)?;
                        score += w[weights::reo_prev(o)] * opt.reo_prev[weights::orientation_slot(o)];
                        if let Some(li) = h.last {
                            let last = PhraseSpan::new(h.last_span, Span::new(0, 0));
                            let o = classify_next_orientation(Some(&cur), &last, n, r.scheme)?;
                            score += w[weights::reo_next(o)] * options[li].reo_next[weights::orientation_slot(o)];
                        }
                        if covered == n {
                            let o = classify_next_orientation(None, &cur, n, r.scheme)?;
                            score += w[weights::reo_next(o)] * opt.reo_next[weights::orientation_slot(o)];
                        }
                    }
                    if covered == n {
                        lm_delta += lm.logprob_ids(&tail, lm.eos());
                    }
                    score += w[weights::LM] * lm_delta;
                    let future = if covered == n { 0.0 } else { self.future_of(&coverage, n, &fc) };
                    let hyp = Hyp {
                        coverage,
                        covered,
                        tail,
                        last: Some(oi),
                        last_span: s,
                        score,
                        future,
                        parent: Some(hi),
                    };
                    if self.config.recombination {
                        let key = RecombKey {
                            coverage: hyp.coverage.clone(),
                            tail: hyp.tail.clone(),
                            last_end: s.end,
                            last: self.models.reordering.map(|_| (s.start, oi)),
                        };
                        if let Some(&pos) = keys[covered].get(&key) {
                            let old = stacks[covered][pos];
                            if better(&arena, &options, &hyp, &arena[old]) == Ordering::Greater {
                                arena.push(hyp);
                                stacks[covered][pos] = arena.len() - 1;
                            }
                            continue;
                        }
                        keys[covered].insert(key, stacks[covered].len());
                    }
                    arena.push(hyp);
                    stacks[covered].push(arena.len() - 1);
                }
            }
        }

        let best = stacks[n].iter().copied().reduce(|a, b| {
            if better(&arena, &options, &arena[b], &arena[a]) == Ordering::Greater {
                b
            } else {
                a
            }
        });
        match best {
            Some(b) => {
                let derivation = derivation_of(&arena, &options, b);
                let output = Sentence::from_words(derivation.iter().flat_map(|d| d.target.split_whitespace()));
                let features = derivation_features(sentence, &derivation, self.models)?;
                Ok(Translation {
                    output,
                    derivation,
                    score: arena[b].score,
                    features,
                    fallback: false,
                })
            }
            None => self.fallback(sentence),
        }
    }

    /// Monotone word-by-word copy of the source.
    fn fallback(&self, sentence: &Sentence) -> Result<Translation> {
        let derivation: Vec<AppliedPhrase> = sentence
            .words()
            .iter()
            .enumerate()
            .map(|(i, w)| AppliedPhrase {
                source_span: Span::new(i, i + 1),
                target_span: Span::new(i, i + 1),
                source: w.to_string(),
                target: w.to_string(),
                oov: true,
            })
            .collect();
        let features = derivation_features(sentence, &derivation, self.models)?;
        Ok(Translation {
            output: sentence.clone(),
            score: self.weights.dot(&features),
            derivation,
            features,
            fallback: true,
        })
    }
}

fn chain(arena: &[Hyp], mut i: usize) -> Vec<usize> {
    let mut out = Vec::new();
    while let (Some(p), Some(o)) = (arena[i].parent, arena[i].last) {
        out.push(o);
        i = p;
    }
    out.reverse();
    out
}

fn derivation_of(arena: &[Hyp], options: &[SpanOption], i: usize) -> Vec<AppliedPhrase> {
    let mut t = 0;
    chain(arena, i)
        .into_iter()
        .map(|o| {
            let opt = &options[o];
            let len = opt.target_ids.len();
            let d = AppliedPhrase {
                source_span: opt.span,
                target_span: Span::new(t, t + len),
                source: opt.source.clone(),
                target: opt.target.clone(),
                oov: opt.oov,
            };
            t += len;
            d
        })
        .collect()
}

/// Scores closer than this (relative) count as tied, so that rounding in
/// differently ordered sums cannot decide between equal derivations.
const TIE_TOLERANCE: f64 = 1e-9;

/// Higher score wins; ties go to the lexicographically smaller output,
/// then to the smaller sequence of source spans.
fn better(arena: &[Hyp], options: &[SpanOption], a: &Hyp, b: &Hyp) -> Ordering {
    let scale = a.score.abs().max(b.score.abs()).max(1.0);
    if (a.score - b.score).abs() > TIE_TOLERANCE * scale {
        return a.score.total_cmp(&b.score);
    }
    let key = |h: &Hyp| -> (Vec<String>, Vec<Span>) {
        let ids = match (h.parent, h.last) {
            (Some(p), Some(o)) => {
                let mut c = chain(arena, p);
                c.push(o);
                c
            }
            _ => Vec::new(),
        };
        let words = ids
            .iter()
            .flat_map(|&o| options[o].target.split_whitespace().map(String::from))
            .collect();
        let spans = ids.iter().map(|&o| options[o].span).collect();
        (words, spans)
    };
    key(b).cmp(&key(a))
}

/// Decodes sentences in parallel, preserving order.
pub fn decode_corpus<'a, I>(decoder: &Decoder, sentences: I) -> Result<Vec<Translation>>
where
    I: IntoParallelIterator<Item = &'a Sentence>,
    I::Iter: IndexedParallelIterator,
{
    sentences.into_par_iter().map(|s| decoder.decode(s)).collect()
}
