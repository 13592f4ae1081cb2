//! Phrase-pair extraction, phrase-table scoring, lexical reordering models
//! and frequency-based compound splitting.

mod compound;
mod extract;
mod reorder;
mod score;

pub use compound::{compound_split, CompoundSplitter};
pub use extract::{
    consistent_boxes, extract_corpus, extract_phrases, read_extract, write_extract, ExtractedPhrase, PhrasePair, Span,
    DEFAULT_MAX_PHRASE_LEN,
};
pub use reorder::{
    classify_next_orientation, classify_orientation, estimate_reordering, smoothed_probability, training_orientations,
    Orientation, OrientationDist, PhraseSpan, ReorderingModel, ReorderingScheme, DEFAULT_SMOOTHING,
};
pub use score::{score_phrase_table, LexicalWeights, PhraseScores, PhraseTable};
