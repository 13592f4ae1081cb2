use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::cache::{ArtifactCache, StageArtifact, StageKey};
use super::config::ExperimentConfig;
use crate::align::{align_corpus, AlignConfig, AlignmentLinks, LexicalTable, ModelKind};
use crate::corpus::{
    clean_pair, normalize_punctuation, split_corpus, tokenize, CleanConfig, ParallelCorpus, Sentence, SentencePair,
    TruecaseModel, Vocabulary,
};
use crate::decode::{decode_corpus, tune_weights, Decoder, Models, TuneOptions, Weights};
use crate::error::{Error, Result};
use crate::lm::{count_ngrams, estimate_kneser_ney, estimate_witten_bell, NGramModel};
use crate::metrics::{evaluate, EvaluateOptions, EvaluationReport};
use crate::phrase::{
    estimate_reordering, extract_corpus, read_extract, score_phrase_table, write_extract, CompoundSplitter,
    LexicalWeights, PhraseTable, ReorderingModel, ReorderingScheme,
};
use crate::textio;

/// Suffix marking a target-side compound part that joins the next token.
pub const COMPOUND_JOINER: &str = "@@";

/// Where a run keeps its cache and writes its report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub cache_dir: PathBuf,
    /// When set, `report.tsv` and `manifest.json` go to `<out_dir>/<id>/`.
    pub out_dir: Option<PathBuf>,
}

/// Machine-readable record of a run: settings, every stage with its key
/// and output digests, and the final scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub config: String,
    pub stages: Vec<StageArtifact>,
    pub report: EvaluationReport,
}

impl Manifest {
    pub fn stage(&self, name: &str) -> Option<&StageArtifact> {
        self.stages.iter().find(|s| s.stage == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: EvaluationReport,
    pub manifest: Manifest,
}

const PARTS: [&str; 3] = ["train", "dev", "test"];

fn read_corpus(dir: &Path, part: &str) -> Result<ParallelCorpus> {
    let (corpus, _) = ParallelCorpus::read_tokenized(
        &dir.join(format!("{part}.src")),
        &dir.join(format!("{part}.tgt")),
        "src",
        "tgt",
    )?;
    Ok(corpus)
}

fn write_corpus(dir: &Path, part: &str, corpus: &ParallelCorpus) -> Result<()> {
    corpus.write(&dir.join(format!("{part}.src")), &dir.join(format!("{part}.tgt")))
}

fn map_corpus(c: &ParallelCorpus, f: impl Fn(&Sentence) -> Sentence, g: impl Fn(&Sentence) -> Sentence) -> ParallelCorpus {
    let pairs = c
        .pairs
        .iter()
        .map(|p| SentencePair::new(f(&p.source), g(&p.target), p.line_number))
        .collect();
    ParallelCorpus::new(pairs, &c.source_lang, &c.target_lang)
}

fn lowercase(s: &Sentence) -> Sentence {
    s.map_tokens(str::to_lowercase)
}

fn normalized(s: &Sentence) -> Sentence {
    tokenize(&normalize_punctuation(&s.to_string()))
}

/// Tokenize, clean, split; then either lowercase everything or normalize
/// punctuation and truecase with models trained on the training part. The
/// test reference keeps the plain tokenized text.
fn prepare(c: &ExperimentConfig, out: &Path) -> Result<()> {
    for p in [&c.corpus_source, &c.corpus_target] {
        if !p.is_file() {
            return Err(Error::Io {
                path: p.clone(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "corpus file not found"),
            });
        }
    }
    let (mut corpus, dropped) =
        ParallelCorpus::read_raw(&c.corpus_source, &c.corpus_target, &c.source_lang, &c.target_lang)?;
    if c.reverse {
        corpus = corpus.reversed();
    }
    let clean = CleanConfig {
        max_len: c.max_sentence_len,
        ..CleanConfig::default()
    };
    let before = corpus.len();
    corpus.pairs.retain(|p| clean_pair(p, &clean).is_keep());
    log::info!(
        "prepare: {} pairs, {} empty, {} removed by cleaning",
        corpus.len(),
        dropped.len(),
        before - corpus.len()
    );
    let split = split_corpus(&corpus, c.dev_size, c.test_size, c.split_seed)?;
    textio::write_lines(&out.join("test.ref"), split.test.target_side().map(|s| s.to_string()))?;
    let parts = [split.train, split.dev, split.test];
    let parts: Vec<ParallelCorpus> = if c.truecase {
        let norm: Vec<ParallelCorpus> = parts.iter().map(|p| map_corpus(p, normalized, normalized)).collect();
        let src_tc = TruecaseModel::train(norm[0].source_side());
        let tgt_tc = TruecaseModel::train(norm[0].target_side());
        src_tc.save(&out.join("truecase.src"))?;
        tgt_tc.save(&out.join("truecase.tgt"))?;
        norm.iter()
            .map(|p| map_corpus(p, |s| src_tc.apply(s), |s| tgt_tc.apply(s)))
            .collect()
    } else {
        parts.iter().map(|p| map_corpus(p, lowercase, lowercase)).collect()
    };
    for (name, part) in PARTS.iter().zip(&parts) {
        write_corpus(out, name, part)?;
    }
    Ok(())
}

fn mark_parts(parts: Vec<String>) -> Vec<String> {
    let n = parts.len();
    parts
        .into_iter()
        .enumerate()
        .map(|(i, p)| if i + 1 < n { format!("{p}{COMPOUND_JOINER}") } else { p })
        .collect()
}

/// Splits compounds on the configured sides with vocabularies from the
/// training part. Target parts carry a joiner so output can be re-merged.
fn compound(c: &ExperimentConfig, prepared: &Path, out: &Path) -> Result<()> {
    let train = read_corpus(prepared, "train")?;
    let src = CompoundSplitter::new(Vocabulary::from_sentences(train.source_side()));
    let tgt = CompoundSplitter::new(Vocabulary::from_sentences(train.target_side()));
    let side = c.compound_split;
    for part in PARTS {
        let corpus = read_corpus(prepared, part)?;
        let mapped = map_corpus(
            &corpus,
            |s| if side.source() { src.split_sentence(s) } else { s.clone() },
            |s| {
                if side.target() {
                    Sentence::from_words(s.iter().flat_map(|t| mark_parts(tgt.split(t))))
                } else {
                    s.clone()
                }
            },
        );
        write_corpus(out, part, &mapped)?;
    }
    Ok(())
}

/// Undoes target-side compound splitting.
pub fn join_compounds(s: &Sentence) -> Sentence {
    let mut out: Vec<String> = Vec::new();
    let mut pending = String::new();
    for t in s.iter() {
        match t.strip_suffix(COMPOUND_JOINER) {
            Some(head) if !head.is_empty() => pending.push_str(head),
            _ => {
                pending.push_str(t);
                out.push(std::mem::take(&mut pending));
            }
        }
    }
    if !pending.is_empty() {
        out.push(pending);
    }
    Sentence::from_words(out)
}

fn train_lm(c: &ExperimentConfig, text: &Path, out: &Path) -> Result<()> {
    let train = read_corpus(text, "train")?;
    let counts = count_ngrams(train.target_side(), c.lm_order);
    let model = if c.witten_bell {
        estimate_witten_bell(&counts)?
    } else {
        estimate_kneser_ney(&counts)?
    };
    model.save(&out.join("lm.bin"))
}

fn align_config(c: &ExperimentConfig) -> AlignConfig {
    let mut a = AlignConfig {
        model: if c.fast_align { ModelKind::FastAlign } else { ModelKind::Model1 },
        stem_k: c.stem_k,
        iterations: c.align_iterations,
        ..AlignConfig::default()
    };
    a.fast_align.iterations = c.align_iterations;
    a
}

fn align(c: &ExperimentConfig, text: &Path, out: &Path) -> Result<()> {
    let train = read_corpus(text, "train")?;
    let aligned = align_corpus(&train, &align_config(c))?;
    textio::write_string(&out.join("aligned.grow-diag-final-and"), &aligned.to_pharaoh())?;
    aligned.forward.table().save(&out.join("lex.f2e"))?;
    aligned.backward.table().save(&out.join("lex.e2f"))
}

fn phrases(c: &ExperimentConfig, text: &Path, aligned: &Path, out: &Path) -> Result<()> {
    let train = read_corpus(text, "train")?;
    let lines = textio::read_lines(&aligned.join("aligned.grow-diag-final-and"))?;
    if lines.len() != train.len() {
        return Err(Error::LineCountMismatch {
            source_lines: train.len(),
            target_lines: lines.len(),
        });
    }
    let links = train
        .pairs
        .iter()
        .zip(&lines)
        .map(|(p, l)| AlignmentLinks::from_pharaoh(l, p.source.len(), p.target.len()))
        .collect::<Result<Vec<_>>>()?;
    let extracted = extract_corpus(&train, &links, c.max_phrase_len)?;
    write_extract(&out.join("extract"), &extracted)?;
    let lex = LexicalWeights {
        forward: LexicalTable::load(&aligned.join("lex.f2e"))?,
        backward: LexicalTable::load(&aligned.join("lex.e2f"))?,
        stem_k: c.stem_k,
    };
    let table = score_phrase_table(extracted.iter().map(|e| &e.pair), &lex)?;
    table.save(&out.join("phrase-table"))
}

fn scheme(c: &ExperimentConfig) -> ReorderingScheme {
    if c.hier_mslr {
        ReorderingScheme::HierMslr
    } else {
        ReorderingScheme::Msd
    }
}

fn reorder(c: &ExperimentConfig, phrase_dir: &Path, out: &Path) -> Result<()> {
    let extracted = read_extract(&phrase_dir.join("extract"))?;
    let model = estimate_reordering(&extracted, scheme(c), c.reordering_smoothing)?;
    model.save(&out.join("reordering-table"))
}

struct Loaded {
    table: PhraseTable,
    lm: NGramModel,
    reordering: ReorderingModel,
}

impl Loaded {
    fn load(lm: &StageArtifact, phrase: &StageArtifact, reorder: &StageArtifact) -> Result<Self> {
        Ok(Loaded {
            table: PhraseTable::load(&phrase.path("phrase-table"))?,
            lm: NGramModel::load(&lm.path("lm.bin"))?,
            reordering: ReorderingModel::load(&reorder.path("reordering-table"))?,
        })
    }

    fn models(&self) -> Models<'_> {
        Models {
            table: &self.table,
            lm: &self.lm,
            reordering: Some(&self.reordering),
        }
    }
}

fn tune(c: &ExperimentConfig, text: &Path, models: &Loaded, out: &Path) -> Result<()> {
    let initial = Weights::default();
    let weights = if c.tune {
        let dev = read_corpus(text, "dev")?;
        let opts = TuneOptions {
            restarts: c.tune_restarts,
            iterations: c.tune_iterations,
            seed: c.tune_seed,
            ..TuneOptions::default()
        };
        let r = tune_weights(&dev, models.models(), &initial, c.decoder, &opts)?;
        textio::write_string(
            &out.join("tune.log"),
            &format!("initial_bleu\t{:.6}\ntuned_bleu\t{:.6}\n", r.initial_bleu, r.bleu),
        )?;
        r.weights
    } else {
        initial
    };
    weights.save(&out.join("weights"))
}

fn decode(c: &ExperimentConfig, text: &Path, models: &Loaded, weights: &Path, out: &Path) -> Result<()> {
    let test = read_corpus(text, "test")?;
    let sources: Vec<&Sentence> = test.source_side().collect();
    let decoder = Decoder::new(models.models(), Weights::load(weights)?, c.decoder)?;
    let translations = decode_corpus(&decoder, sources)?;
    let fallbacks = translations.iter().filter(|t| t.fallback).count();
    if fallbacks > 0 {
        log::warn!("{fallbacks} test sentences had no complete hypothesis and were copied");
    }
    textio::write_lines(
        &out.join("hyp"),
        translations.iter().map(|t| join_compounds(&t.output).to_string()),
    )
}

fn score(hyp: &Path, reference: &Path, out: &Path) -> Result<EvaluationReport> {
    let hyps: Vec<Sentence> = textio::read_lines(hyp)?.iter().map(|l| Sentence::from_whitespace(l)).collect();
    let refs: Vec<Vec<Sentence>> = textio::read_lines(reference)?
        .iter()
        .map(|l| vec![Sentence::from_whitespace(l)])
        .collect();
    let report = evaluate(&hyps, &refs, &EvaluateOptions::default())?;
    textio::write_string(&out.join("report.tsv"), &report.to_tsv(None))?;
    Ok(report)
}

/// Runs every stage of one experiment, reusing cached stages whose inputs
/// and settings are unchanged.
pub fn run_experiment(config: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutput> {
    config.validate()?;
    let c = config;
    let cache = ArtifactCache::new(&opts.cache_dir)?;
    let mut stages = Vec::new();

    let key = StageKey::new("prepare")
        .input("source", &c.corpus_source)
        .and_then(|k| k.input("target", &c.corpus_target))
        .map_err(|e| Error::Stage {
            stage: "prepare".into(),
            source: Box::new(e),
        })?
        .setting("reverse", c.reverse)
        .setting("truecase", c.truecase)
        .setting("max_sentence_len", c.max_sentence_len)
        .setting("split_seed", c.split_seed)
        .setting("dev_size", c.dev_size)
        .setting("test_size", c.test_size);
    let prepared = cache.run(key, |out| prepare(c, out))?;
    stages.push(prepared.clone());

    let text = if c.compound_split.source() || c.compound_split.target() {
        let mut key = StageKey::new("compound").setting("side", c.compound_split.name());
        for part in PARTS {
            key = key
                .input(&format!("{part}.src"), &prepared.path(&format!("{part}.src")))?
                .input(&format!("{part}.tgt"), &prepared.path(&format!("{part}.tgt")))?;
        }
        let split = cache.run(key, |out| compound(c, &prepared.dir, out))?;
        stages.push(split.clone());
        split
    } else {
        prepared.clone()
    };

    let key = StageKey::new("lm")
        .input("train.tgt", &text.path("train.tgt"))?
        .setting("order", c.lm_order)
        .setting("smoothing", if c.witten_bell { "wb" } else { "kn" });
    let lm = cache.run(key, |out| train_lm(c, &text.dir, out))?;
    stages.push(lm.clone());

    let a = align_config(c);
    let key = StageKey::new("align")
        .input("train.src", &text.path("train.src"))?
        .input("train.tgt", &text.path("train.tgt"))?
        .setting("model", a.model)
        .setting("heuristic", a.heuristic.name())
        .setting("stem_k", c.stem_k.unwrap_or(0))
        .setting("iterations", c.align_iterations);
    let aligned = cache.run(key, |out| align(c, &text.dir, out))?;
    stages.push(aligned.clone());

    let key = StageKey::new("phrase")
        .input("train.src", &text.path("train.src"))?
        .input("train.tgt", &text.path("train.tgt"))?
        .input("alignment", &aligned.path("aligned.grow-diag-final-and"))?
        .input("lex.f2e", &aligned.path("lex.f2e"))?
        .input("lex.e2f", &aligned.path("lex.e2f"))?
        .setting("max_phrase_len", c.max_phrase_len)
        .setting("stem_k", c.stem_k.unwrap_or(0));
    let phrase = cache.run(key, |out| phrases(c, &text.dir, &aligned.dir, out))?;
    stages.push(phrase.clone());

    let key = StageKey::new("reorder")
        .input("extract", &phrase.path("extract"))?
        .setting("scheme", scheme(c))
        .setting("smoothing", c.reordering_smoothing);
    let reordering = cache.run(key, |out| reorder(c, &phrase.dir, out))?;
    stages.push(reordering.clone());

    let model_inputs = |k: StageKey| -> Result<StageKey> {
        Ok(k.input("lm", &lm.path("lm.bin"))?
            .input("phrase-table", &phrase.path("phrase-table"))?
            .input("reordering-table", &reordering.path("reordering-table"))?
            .setting("beam_size", c.decoder.beam_size)
            .setting("distortion_limit", format!("{:?}", c.decoder.distortion_limit))
            .setting("max_phrase_len", c.decoder.max_phrase_len)
            .setting("recombination", c.decoder.recombination))
    };
    // models are loaded lazily: fully cached runs never read them
    let mut loaded: Option<Loaded> = None;
    fn ensure<'a>(slot: &'a mut Option<Loaded>, a: [&StageArtifact; 3]) -> Result<&'a Loaded> {
        if slot.is_none() {
            *slot = Some(Loaded::load(a[0], a[1], a[2])?);
        }
        Ok(slot.as_ref().expect("just loaded"))
    }
    let sources = [&lm, &phrase, &reordering];

    let key = model_inputs(StageKey::new("tune"))?
        .input("dev.src", &text.path("dev.src"))?
        .input("dev.tgt", &text.path("dev.tgt"))?
        .setting("tune", c.tune)
        .setting("restarts", c.tune_restarts)
        .setting("iterations", c.tune_iterations)
        .setting("seed", c.tune_seed);
    let tuned = cache.run(key, |out| tune(c, &text.dir, ensure(&mut loaded, sources)?, out))?;
    stages.push(tuned.clone());

    let key = model_inputs(StageKey::new("decode"))?
        .input("test.src", &text.path("test.src"))?
        .input("weights", &tuned.path("weights"))?;
    let decoded = cache.run(key, |out| decode(c, &text.dir, ensure(&mut loaded, sources)?, &tuned.path("weights"), out))?;
    stages.push(decoded.clone());

    let key = StageKey::new("score")
        .input("hyp", &decoded.path("hyp"))?
        .input("ref", &prepared.path("test.ref"))?;
    let scored = cache.run(key, |out| score(&decoded.path("hyp"), &prepared.path("test.ref"), out).map(|_| ()))?;
    stages.push(scored.clone());
    let report_text = textio::read_string(&scored.path("report.tsv"))?;
    let report = parse_report(&report_text)?;

    let manifest = Manifest {
        experiment: c.id.clone(),
        config: c.canonical(),
        stages,
        report,
    };
    if let Some(dir) = &opts.out_dir {
        let dir = dir.join(&c.id);
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        textio::write_string(&dir.join("report.tsv"), &report_text)?;
        textio::write_string(&dir.join("manifest.json"), &manifest.to_json())?;
    }
    Ok(RunOutput { report, manifest })
}

/// Reads back a report written by the score stage.
pub fn parse_report(text: &str) -> Result<EvaluationReport> {
    let mut lines = text.lines();
    let bad = |m: &str| Error::Parse {
        what: "report".into(),
        line: 2,
        message: m.into(),
    };
    if lines.next() != Some(EvaluationReport::HEADER) {
        return Err(Error::Parse {
            what: "report".into(),
            line: 1,
            message: "unexpected header".into(),
        });
    }
    let values: Vec<f64> = lines
        .next()
        .ok_or_else(|| bad("missing row"))?
        .split('\t')
        .map(|v| v.parse().map_err(|_| bad("not a number")))
        .collect::<Result<_>>()?;
    if values.len() != 5 {
        return Err(bad("expected five columns"));
    }
    Ok(EvaluationReport {
        bleu: values[0],
        nist: values[1],
        meteor: values[2],
        ribes: values[3],
        ter: values[4],
    })
}
