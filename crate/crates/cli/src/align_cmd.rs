use std::path::Path;

use mtsmt::align::{
    stem_corpus, symmetrize, train_fast_align, train_model1, viterbi_align, AlignmentModel, Direction,
    FastAlignOptions, FastAlignParams, LexicalTable, ModelKind,
};
use mtsmt::corpus::ParallelCorpus;
use mtsmt::textio::{read_lines, write_lines};
use mtsmt::{Error, Result};

use crate::corpus_cmd::read_parallel;
use crate::{AlignApplyArgs, AlignTrainArgs};

fn stemmed(corpus: ParallelCorpus, stem_k: Option<usize>) -> Result<ParallelCorpus> {
    match stem_k {
        Some(0) => Err(Error::InvalidArgument("stem-k must be at least 1".into())),
        Some(k) => Ok(stem_corpus(&corpus, k)),
        None => Ok(corpus),
    }
}

fn train_one(corpus: &ParallelCorpus, args: &AlignTrainArgs) -> Result<AlignmentModel> {
    Ok(match args.model {
        ModelKind::Model1 => train_model1(corpus, args.iterations)?.into(),
        ModelKind::FastAlign => {
            let opts = FastAlignOptions {
                iterations: args.iterations,
                ..FastAlignOptions::default()
            };
            train_fast_align(corpus, &opts)?.into()
        }
    })
}

fn params_line(name: &str, m: &AlignmentModel) -> String {
    match m {
        AlignmentModel::Model1(_) => format!("{name}\tmodel1"),
        AlignmentModel::FastAlign(p) => format!("{name}\tfast-align\t{}\t{}", p.tension, p.p_null),
    }
}

/// Writes `lex.f2e`, `lex.e2f` and a `model` file with the aligner kind and
/// any fast-align parameters.
pub fn train(args: &AlignTrainArgs) -> Result<()> {
    let corpus = stemmed(read_parallel(&args.input)?, args.stem_k)?;
    let forward = train_one(&corpus, args)?;
    let backward = train_one(&corpus.reversed(), args)?;
    let dir = &args.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    forward.table().save(&dir.join("lex.f2e"))?;
    backward.table().save(&dir.join("lex.e2f"))?;
    write_lines(
        &dir.join("model"),
        [params_line("forward", &forward), params_line("backward", &backward)],
    )
}

fn load_model(dir: &Path, name: &str, table: &str) -> Result<AlignmentModel> {
    let lex = LexicalTable::load(&dir.join(table))?;
    let path = dir.join("model");
    let lines = read_lines(&path)?;
    let (no, line) = lines
        .iter()
        .enumerate()
        .find(|(_, l)| l.split('\t').next() == Some(name))
        .ok_or_else(|| Error::parse(path.display().to_string(), 0, format!("no {name} entry")))?;
    let fields: Vec<&str> = line.split('\t').collect();
    let bad = |message: &str| Error::parse(path.display().to_string(), no + 1, message);
    match fields[1..] {
        ["model1"] => Ok(lex.into()),
        ["fast-align", tension, p_null] => {
            let tension = tension.parse().map_err(|_| bad("bad tension"))?;
            let p_null = p_null.parse().map_err(|_| bad("bad null probability"))?;
            Ok(FastAlignParams::new(lex, tension, p_null)?.into())
        }
        _ => Err(bad("expected model1 or fast-align with two parameters")),
    }
}

pub fn apply(args: &AlignApplyArgs) -> Result<()> {
    let corpus = stemmed(read_parallel(&args.input)?, args.stem_k)?;
    let forward = load_model(&args.model_dir, "forward", "lex.f2e")?;
    let backward = load_model(&args.model_dir, "backward", "lex.e2f")?;
    let links = corpus
        .pairs
        .iter()
        .map(|p| {
            let f = viterbi_align(&forward, p, Direction::Forward);
            let b = viterbi_align(&backward, p, Direction::Backward);
            symmetrize(&f, &b, args.heuristic).map(|l| l.to_pharaoh())
        })
        .collect::<Result<Vec<_>>>()?;
    write_lines(&args.out, links)
}
