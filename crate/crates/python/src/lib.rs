use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIOError, PyValueError};
use pyo3::prelude::*;

use smt::align::{AlignmentLinks, SymmetrizationHeuristic};
use smt::corpus::{Sentence, Vocabulary};
use smt::harness::{run_experiment as run_pipeline, ExperimentConfig, RunOptions};
use smt::lm::{count_ngrams, estimate_kneser_ney, estimate_witten_bell, NGramModel, Smoothing};
use smt::metrics::{self, EvaluateOptions, Metric, RibesOptions};

create_exception!(mtsmt, MtsmtError, PyException);

fn err(e: smt::Error) -> PyErr {
    match e {
        smt::Error::Io { .. } => PyIOError::new_err(e.to_string()),
        smt::Error::InvalidArgument(_) | smt::Error::Config(_) => PyValueError::new_err(e.to_string()),
        _ => MtsmtError::new_err(e.to_string()),
    }
}

fn sentences(lines: &[String]) -> Vec<Sentence> {
    lines.iter().map(|l| Sentence::from_whitespace(l)).collect()
}

/// Tokenize raw text into a list of tokens.
#[pyfunction]
fn tokenize(text: &str) -> Vec<String> {
    smt::corpus::tokenize(text).words().into_iter().map(String::from).collect()
}

#[pyfunction]
fn normalize_punctuation(text: &str) -> String {
    smt::corpus::normalize_punctuation(text)
}

#[pyfunction]
fn stem(token: &str, k: usize) -> String {
    smt::corpus::stem(token, k)
}

/// Split `word` using corpus frequencies given as a dict.
#[pyfunction]
#[pyo3(signature = (word, counts, min_part_len = 3, max_parts = 2))]
fn compound_split(word: &str, counts: BTreeMap<String, u64>, min_part_len: usize, max_parts: usize) -> Vec<String> {
    let vocab = Vocabulary::from_counts(counts);
    smt::phrase::compound_split(word, &vocab, min_part_len, max_parts)
}

/// Symmetrize two alignments given as lists of (source, target) index pairs.
#[pyfunction]
#[pyo3(signature = (forward, backward, source_len, target_len, heuristic = "grow-diag-final-and"))]
fn symmetrize(
    forward: Vec<(usize, usize)>,
    backward: Vec<(usize, usize)>,
    source_len: usize,
    target_len: usize,
    heuristic: &str,
) -> PyResult<Vec<(usize, usize)>> {
    let h: SymmetrizationHeuristic = heuristic.parse().map_err(err)?;
    let f = AlignmentLinks::new(source_len, target_len, forward).map_err(err)?;
    let b = AlignmentLinks::new(source_len, target_len, backward).map_err(err)?;
    Ok(smt::align::symmetrize(&f, &b, h).map_err(err)?.iter().collect())
}

#[pyfunction]
#[pyo3(signature = (hyps, refs, max_n = 4))]
fn bleu(hyps: Vec<String>, refs: Vec<Vec<String>>, max_n: usize) -> PyResult<f64> {
    let refs: Vec<Vec<Sentence>> = refs.iter().map(|r| sentences(r)).collect();
    metrics::bleu(&sentences(&hyps), &refs, max_n).map_err(err)
}

#[pyfunction]
fn ter(hyp: &str, reference: &str) -> f64 {
    metrics::ter(&Sentence::from_whitespace(hyp), &Sentence::from_whitespace(reference))
}

#[pyfunction]
fn meteor(hyp: &str, reference: &str) -> f64 {
    metrics::meteor(&Sentence::from_whitespace(hyp), &Sentence::from_whitespace(reference))
}

#[pyfunction]
#[pyo3(signature = (hyp, reference, correlation = "kendall"))]
fn ribes(hyp: &str, reference: &str, correlation: &str) -> PyResult<f64> {
    let opts = RibesOptions {
        correlation: correlation.parse().map_err(err)?,
        ..RibesOptions::default()
    };
    Ok(metrics::ribes(&Sentence::from_whitespace(hyp), &Sentence::from_whitespace(reference), &opts))
}

/// Corpus scores as a dict with BLEU, NIST, METEOR, RIBES and TER keys.
/// `refs[i]` lists the references of hypothesis `i`.
#[pyfunction]
#[pyo3(signature = (hyps, refs, lowercase = true, metric = "all"))]
fn evaluate(hyps: Vec<String>, refs: Vec<Vec<String>>, lowercase: bool, metric: &str) -> PyResult<BTreeMap<String, f64>> {
    let opts = EvaluateOptions {
        lowercase,
        metric: metric.parse::<Metric>().map_err(err)?,
        ..EvaluateOptions::default()
    };
    let refs: Vec<Vec<Sentence>> = refs.iter().map(|r| sentences(r)).collect();
    let report = metrics::evaluate(&sentences(&hyps), &refs, &opts).map_err(err)?;
    Ok(report_dict(&report))
}

fn report_dict(report: &metrics::EvaluationReport) -> BTreeMap<String, f64> {
    metrics::EvaluationReport::HEADER
        .split('\t')
        .zip(report.values())
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// An n-gram language model.
#[pyclass(module = "mtsmt")]
struct LanguageModel {
    inner: NGramModel,
}

#[pymethods]
impl LanguageModel {
    /// Train on whitespace-tokenized sentences with "kn" or "wb" smoothing.
    #[staticmethod]
    #[pyo3(signature = (sentences, order = 5, smoothing = "kn"))]
    fn train(sentences: Vec<String>, order: usize, smoothing: &str) -> PyResult<Self> {
        if order == 0 {
            return Err(PyValueError::new_err("order must be at least 1"));
        }
        let counts = count_ngrams(&self::sentences(&sentences), order);
        let inner = match Smoothing::parse(smoothing) {
            Some(Smoothing::KneserNeyInterpolated) => estimate_kneser_ney(&counts),
            Some(Smoothing::WittenBell) => estimate_witten_bell(&counts),
            _ => return Err(PyValueError::new_err(format!("unknown smoothing {smoothing:?}"))),
        }
        .map_err(err)?;
        Ok(LanguageModel { inner })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(LanguageModel {
            inner: NGramModel::load(&path).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load_arpa(path: PathBuf) -> PyResult<Self> {
        Ok(LanguageModel {
            inner: NGramModel::load_arpa(&path).map_err(err)?,
        })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        self.inner.save(&path).map_err(err)
    }

    fn save_arpa(&self, path: PathBuf) -> PyResult<()> {
        self.inner.save_arpa(&path).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    /// log10 P(word | history).
    #[pyo3(signature = (word, history = Vec::new()))]
    fn logprob(&self, word: &str, history: Vec<String>) -> f64 {
        let h: Vec<&str> = history.iter().map(String::as_str).collect();
        self.inner.logprob(word, &h)
    }

    fn perplexity(&self, sentences: Vec<String>) -> f64 {
        self.inner.perplexity(&self::sentences(&sentences))
    }
}

/// Run an experiment config file. Returns the report dict and the manifest
/// as a JSON string.
#[pyfunction]
#[pyo3(signature = (config, cache_dir, out_dir = None))]
fn run_experiment(
    py: Python<'_>,
    config: PathBuf,
    cache_dir: PathBuf,
    out_dir: Option<PathBuf>,
) -> PyResult<(BTreeMap<String, f64>, String)> {
    let config = ExperimentConfig::load(&config).map_err(err)?;
    let opts = RunOptions { cache_dir, out_dir };
    let out = py.detach(|| run_pipeline(&config, &opts)).map_err(err)?;
    Ok((report_dict(&out.report), out.manifest.to_json()))
}

#[pymodule]
fn mtsmt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MtsmtError", m.py().get_type::<MtsmtError>())?;
    m.add_class::<LanguageModel>()?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_punctuation, m)?)?;
    m.add_function(wrap_pyfunction!(stem, m)?)?;
    m.add_function(wrap_pyfunction!(compound_split, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrize, m)?)?;
    m.add_function(wrap_pyfunction!(bleu, m)?)?;
    m.add_function(wrap_pyfunction!(ter, m)?)?;
    m.add_function(wrap_pyfunction!(meteor, m)?)?;
    m.add_function(wrap_pyfunction!(ribes, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
