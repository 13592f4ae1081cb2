use std::path::Path;

use mtsmt::corpus::{ParallelCorpus, Sentence, SentencePair};
use mtsmt::decode::{decode_corpus, tune_weights, Decoder, DecoderConfig, Models, TuneOptions, Weights};
use mtsmt::lm::NGramModel;
use mtsmt::metrics::{evaluate_files, sentence_breakdown_files, EvaluateOptions, RibesOptions};
use mtsmt::phrase::{PhraseTable, ReorderingModel};
use mtsmt::textio::{write_lines, write_string};
use mtsmt::{Error, Result};

use crate::corpus_cmd::read_sentences;
use crate::{DecodeArgs, ModelArgs, ScoreArgs, TuneArgs};

struct Loaded {
    table: PhraseTable,
    lm: NGramModel,
    reordering: Option<ReorderingModel>,
    config: DecoderConfig,
}

impl Loaded {
    fn load(args: &ModelArgs) -> Result<Self> {
        let distortion_limit = match args.distortion {
            d if d < -1 => return Err(Error::InvalidArgument(format!("bad distortion limit {d}"))),
            -1 => None,
            d => Some(d as usize),
        };
        Ok(Loaded {
            table: PhraseTable::load(&args.table)?,
            lm: NGramModel::load(&args.lm)?,
            reordering: args.reordering.as_deref().map(ReorderingModel::load).transpose()?,
            config: DecoderConfig {
                beam_size: args.beam,
                distortion_limit,
                max_phrase_len: args.max_phrase_len,
                recombination: !args.no_recombination,
            },
        })
    }

    fn models(&self) -> Models<'_> {
        Models {
            table: &self.table,
            lm: &self.lm,
            reordering: self.reordering.as_ref(),
        }
    }
}

fn weights(path: Option<&Path>) -> Result<Weights> {
    path.map_or_else(|| Ok(Weights::default()), Weights::load)
}

pub fn decode(args: &DecodeArgs) -> Result<()> {
    let loaded = Loaded::load(&args.models)?;
    let decoder = Decoder::new(loaded.models(), weights(args.weights.as_deref())?, loaded.config)?;
    let input = read_sentences(&args.input)?;
    let translations = decode_corpus(&decoder, input.iter().collect::<Vec<_>>())?;
    let fallbacks = translations.iter().filter(|t| t.fallback).count();
    if fallbacks > 0 {
        log::warn!("{fallbacks} sentences had no complete hypothesis and were copied");
    }
    write_lines(&args.out, translations.iter().map(|t| t.output.to_string()))?;
    if let Some(path) = &args.trace {
        let mut text = String::new();
        for (i, (t, s)) in translations.iter().zip(&input).enumerate() {
            text.push_str(&format!("# {} score={}\n", i + 1, t.score));
            for line in t.trace(s, loaded.models())? {
                text.push_str(&line);
                text.push('\n');
            }
        }
        write_string(path, &text)?;
    }
    Ok(())
}

pub fn tune(args: &TuneArgs) -> Result<()> {
    let loaded = Loaded::load(&args.models)?;
    let src = read_sentences(&args.dev_src)?;
    let refs = read_sentences(&args.dev_ref)?;
    if src.len() != refs.len() {
        return Err(Error::LineCountMismatch {
            source_lines: src.len(),
            target_lines: refs.len(),
        });
    }
    let pairs: Vec<SentencePair> = src
        .into_iter()
        .zip(refs)
        .enumerate()
        .map(|(i, (s, r)): (usize, (Sentence, Sentence))| SentencePair::new(s, r, i + 1))
        .collect();
    let dev = ParallelCorpus::new(pairs, "src", "tgt");
    let opts = TuneOptions {
        restarts: args.restarts,
        iterations: args.iterations,
        seed: args.seed,
        ..TuneOptions::default()
    };
    let initial = weights(args.weights.as_deref())?;
    let result = tune_weights(&dev, loaded.models(), &initial, loaded.config, &opts)?;
    eprintln!("dev BLEU {:.2} -> {:.2}", result.initial_bleu, result.bleu);
    result.weights.save(&args.out)
}

pub fn score(args: &ScoreArgs) -> Result<()> {
    let opts = EvaluateOptions {
        lowercase: !args.no_lowercase,
        metric: args.metric,
        ribes: RibesOptions {
            correlation: args.correlation,
            ..RibesOptions::default()
        },
        ..EvaluateOptions::default()
    };
    let refs: Vec<&Path> = args.refs.iter().map(|p| p.as_path()).collect();
    let report = evaluate_files(&args.hyp, &refs, &opts)?;
    print!("{}", report.to_tsv(None));
    if let Some(path) = &args.sentences {
        write_string(path, &sentence_breakdown_files(&args.hyp, &refs, &opts)?)?;
    }
    Ok(())
}
