use super::fast_align::FastAlignParams;
use super::lexical::{LexicalTable, NULL_ID};
use super::links::AlignmentLinks;
use crate::corpus::SentencePair;

/// Probability used for word pairs with no table entry.
pub const FLOOR_PROB: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Source words generated from target words.
    Forward,
    /// Target words generated from source words.
    Backward,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlignmentModel {
    Model1(LexicalTable),
    FastAlign(FastAlignParams),
}

impl From<LexicalTable> for AlignmentModel {
    fn from(t: LexicalTable) -> Self {
        AlignmentModel::Model1(t)
    }
}

impl From<FastAlignParams> for AlignmentModel {
    fn from(p: FastAlignParams) -> Self {
        AlignmentModel::FastAlign(p)
    }
}

impl AlignmentModel {
    pub fn table(&self) -> &LexicalTable {
        match self {
            AlignmentModel::Model1(t) => t,
            AlignmentModel::FastAlign(p) => &p.lex,
        }
    }

    /// For each generated word, the best conditioning position or `None`
    /// for null. Ties go to the smaller position; null must win strictly.
    pub fn best_links(&self, generated: &[&str], conditioning: &[&str]) -> Vec<Option<usize>> {
        let table = self.table();
        let e_ids: Vec<Option<u32>> = conditioning.iter().map(|w| table.e_id(Some(w))).collect();
        let (n, m) = (generated.len(), conditioning.len());
        let lookup = |e: Option<u32>, f: Option<u32>| match (e, f) {
            (Some(e), Some(f)) => table.get_ids(e, f).max(FLOOR_PROB),
            _ => FLOOR_PROB,
        };
        generated
            .iter()
            .enumerate()
            .map(|(j, w)| {
                let f = table.f_id(w);
                let (prior, null_prior) = match self {
                    AlignmentModel::Model1(_) => (vec![1.0; m], 1.0),
                    AlignmentModel::FastAlign(p) => p.alignment_prior(j, n, m),
                };
                let mut best: Option<(usize, f64)> = None;
                for (i, &e) in e_ids.iter().enumerate() {
                    let s = lookup(e, f) * prior[i];
                    if best.is_none_or(|(_, b)| s > b) {
                        best = Some((i, s));
                    }
                }
                let null = lookup(Some(NULL_ID), f) * null_prior;
                match best {
                    Some((i, s)) if s >= null => Some(i),
                    _ => None,
                }
            })
            .collect()
    }
}

/// Asymmetric alignment of one pair. `model` must have been trained in the
/// given direction (the backward model on the reversed corpus). Links are
/// always `(source, target)`.
pub fn viterbi_align(model: &AlignmentModel, pair: &SentencePair, direction: Direction) -> AlignmentLinks {
    let (src, tgt) = (pair.source.words(), pair.target.words());
    let mut out = AlignmentLinks::empty(src.len(), tgt.len());
    match direction {
        Direction::Forward => {
            for (s, t) in model.best_links(&src, &tgt).into_iter().enumerate() {
                if let Some(t) = t {
                    out.insert(s, t).expect("index in range");
                }
            }
        }
        Direction::Backward => {
            for (t, s) in model.best_links(&tgt, &src).into_iter().enumerate() {
                if let Some(s) = s {
                    out.insert(s, t).expect("index in range");
                }
            }
        }
    }
    out
}
