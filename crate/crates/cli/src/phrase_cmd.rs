use mtsmt::align::{AlignmentLinks, LexicalTable};
use mtsmt::corpus::{Sentence, Vocabulary};
use mtsmt::phrase::{
    estimate_reordering, extract_corpus, read_extract, score_phrase_table, write_extract, CompoundSplitter,
    LexicalWeights,
};
use mtsmt::textio::read_lines;
use mtsmt::{Error, Result};

use crate::corpus_cmd::{read_parallel, read_sentences, write_sentences};
use crate::{CompoundArgs, ExtractArgs, PhraseScoreArgs, ReorderArgs};

pub fn extract(args: &ExtractArgs) -> Result<()> {
    let corpus = read_parallel(&args.input)?;
    let lines = read_lines(&args.alignment)?;
    if lines.len() != corpus.len() {
        return Err(Error::LineCountMismatch {
            source_lines: corpus.len(),
            target_lines: lines.len(),
        });
    }
    let links = corpus
        .pairs
        .iter()
        .zip(&lines)
        .map(|(p, l)| AlignmentLinks::from_pharaoh(l, p.source.len(), p.target.len()))
        .collect::<Result<Vec<_>>>()?;
    let phrases = extract_corpus(&corpus, &links, args.max_len)?;
    eprintln!("extracted {} phrase pairs", phrases.len());
    write_extract(&args.out, &phrases)
}

pub fn score(args: &PhraseScoreArgs) -> Result<()> {
    let phrases = read_extract(&args.extract)?;
    let lex = LexicalWeights {
        forward: LexicalTable::load(&args.lex_f2e)?,
        backward: LexicalTable::load(&args.lex_e2f)?,
        stem_k: args.stem_k,
    };
    let table = score_phrase_table(phrases.iter().map(|e| &e.pair), &lex)?;
    eprintln!("{} phrase-table entries", table.len());
    table.save(&args.out)
}

pub fn reorder(args: &ReorderArgs) -> Result<()> {
    let phrases = read_extract(&args.extract)?;
    estimate_reordering(&phrases, args.scheme, args.smoothing)?.save(&args.out)
}

pub fn compound(args: &CompoundArgs) -> Result<()> {
    let input = read_sentences(&args.input)?;
    let vocab_text = match &args.vocab_from {
        Some(p) => read_sentences(p)?,
        None => input.clone(),
    };
    let splitter = CompoundSplitter {
        vocab: Vocabulary::from_sentences(&vocab_text),
        min_part_len: args.min_part_len,
        max_parts: args.max_parts,
    };
    let out: Vec<Sentence> = input.iter().map(|s| splitter.split_sentence(s)).collect();
    write_sentences(&args.out, &out)
}
