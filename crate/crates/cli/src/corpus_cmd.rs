use std::path::Path;

use mtsmt::corpus::{
    clean_pair, corpus_stats, filter_noise, normalize_punctuation, split_corpus, tokenize, CleanConfig, CleanDecision,
    ParallelCorpus, Script, Sentence, TruecaseModel,
};
use mtsmt::textio::{read_lines, write_lines};
use mtsmt::{Error, Result};

use crate::{CleanArgs, ParallelIn, SplitArgs, StatsArgs, TokenizeArgs, TruecaseApplyArgs, TruecaseTrainArgs};

pub fn read_sentences(path: &Path) -> Result<Vec<Sentence>> {
    Ok(read_lines(path)?.iter().map(|l| Sentence::from_whitespace(l)).collect())
}

pub fn write_sentences(path: &Path, sentences: &[Sentence]) -> Result<()> {
    write_lines(path, sentences.iter().map(ToString::to_string))
}

pub fn read_parallel(input: &ParallelIn) -> Result<ParallelCorpus> {
    let (corpus, dropped) = ParallelCorpus::read_tokenized(&input.src, &input.tgt, &input.src_lang, &input.tgt_lang)?;
    if !dropped.is_empty() {
        log::warn!("skipped {} pairs with an empty side", dropped.len());
    }
    Ok(corpus)
}

pub fn tokenize_file(args: &TokenizeArgs) -> Result<()> {
    let lines = read_lines(&args.input)?;
    write_lines(
        &args.out,
        lines.iter().map(|l| {
            let text = if args.normalize { normalize_punctuation(l) } else { l.clone() };
            let s = tokenize(&text);
            if args.lowercase {
                s.map_tokens(str::to_lowercase).to_string()
            } else {
                s.to_string()
            }
        }),
    )
}

fn scripts(names: &[String]) -> Result<Vec<Script>> {
    names
        .iter()
        .map(|n| Script::parse(n).ok_or_else(|| Error::InvalidArgument(format!("unknown script {n:?}"))))
        .collect()
}

pub fn clean(args: &CleanArgs) -> Result<()> {
    let (corpus, empty) = ParallelCorpus::read_tokenized(
        &args.input.src,
        &args.input.tgt,
        &args.input.src_lang,
        &args.input.tgt_lang,
    )?;
    let config = CleanConfig {
        max_len: args.max_len,
        max_ratio: (args.max_ratio > 0.0).then_some(args.max_ratio),
    };
    let (src_scripts, tgt_scripts) = (scripts(&args.src_scripts)?, scripts(&args.tgt_scripts)?);
    let noisy = |s: &Sentence, allowed: &[Script]| {
        !allowed.is_empty() && !filter_noise(s, allowed, args.noise_threshold).is_keep()
    };
    let mut log: Vec<(usize, String)> = empty.into_iter().map(|l| (l, "empty".to_string())).collect();
    let mut kept = Vec::new();
    for pair in corpus.pairs {
        match clean_pair(&pair, &config) {
            CleanDecision::Drop(reason) => log.push((pair.line_number, reason.to_string())),
            CleanDecision::Keep if noisy(&pair.source, &src_scripts) || noisy(&pair.target, &tgt_scripts) => {
                log.push((pair.line_number, "noise".to_string()))
            }
            CleanDecision::Keep => kept.push(pair),
        }
    }
    log.sort();
    let kept = ParallelCorpus::new(kept, &corpus.source_lang, &corpus.target_lang);
    kept.write(&args.out_src, &args.out_tgt)?;
    eprintln!("kept {} pairs, dropped {}", kept.len(), log.len());
    if let Some(path) = &args.drop_log {
        write_lines(path, log.iter().map(|(l, r)| format!("{l}\t{r}")))?;
    }
    Ok(())
}

pub fn truecase_train(args: &TruecaseTrainArgs) -> Result<()> {
    let sentences = read_sentences(&args.input)?;
    TruecaseModel::train(&sentences).save(&args.out)
}

pub fn truecase_apply(args: &TruecaseApplyArgs) -> Result<()> {
    let model = TruecaseModel::load(&args.model)?;
    let out: Vec<Sentence> = read_sentences(&args.input)?.iter().map(|s| model.apply(s)).collect();
    write_sentences(&args.out, &out)
}

pub fn split(args: &SplitArgs) -> Result<()> {
    let corpus = read_parallel(&args.input)?;
    let parts = split_corpus(&corpus, args.dev, args.test, args.seed)?;
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::io(&args.out_dir, e))?;
    for (name, part) in [("train", &parts.train), ("dev", &parts.dev), ("test", &parts.test)] {
        part.write(&args.out_dir.join(format!("{name}.src")), &args.out_dir.join(format!("{name}.tgt")))?;
    }
    eprintln!("train {} dev {} test {}", parts.train.len(), parts.dev.len(), parts.test.len());
    Ok(())
}

pub fn stats(args: &StatsArgs) -> Result<()> {
    let i = &args.input;
    let corpus = if args.raw {
        ParallelCorpus::read_raw(&i.src, &i.tgt, &i.src_lang, &i.tgt_lang)?.0
    } else {
        read_parallel(i)?
    };
    let stats = corpus_stats(&corpus);
    if args.json {
        println!("{}", serde_json::to_string(&stats).expect("stats serialize"));
    } else {
        println!("{stats}");
    }
    Ok(())
}
