//! Word alignment: IBM Model 1, a fast-align style reparametrized Model 2,
//! per-sentence Viterbi alignment and symmetrization of the two directions.
//!
//! Both models generate the words of one side (`f`) from the words of the
//! other side (`e`) plus a null word. The forward model generates source
//! words from target words, so its table holds `t(source | target)`; the
//! backward model is trained on the reversed corpus.

mod corpus;
mod em;
mod fast_align;
mod lexical;
mod links;
mod model1;
mod symmetrize;
mod viterbi;

pub use corpus::{align_corpus, stem_corpus, AlignConfig, AlignedCorpus, ModelKind};
pub use fast_align::{train_fast_align, FastAlignOptions, FastAlignParams};
pub use lexical::LexicalTable;
pub use links::AlignmentLinks;
pub use model1::{train_model1, train_model1_traced, Model1Training};
pub use symmetrize::{symmetrize, SymmetrizationHeuristic};
pub use viterbi::{viterbi_align, AlignmentModel, Direction, FLOOR_PROB};
