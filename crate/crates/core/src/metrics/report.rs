use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{bleu, meteor, meteor_corpus, nist, ribes, ribes_corpus, ter, ter_corpus, RibesOptions};
use crate::corpus::Sentence;
use crate::error::{Error, Result};
use crate::textio;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub bleu: f64,
    pub nist: f64,
    pub meteor: f64,
    pub ribes: f64,
    pub ter: f64,
}

impl EvaluationReport {
    pub const HEADER: &'static str = "BLEU\tNIST\tMETEOR\tRIBES\tTER";

    pub fn values(&self) -> [f64; 5] {
        [self.bleu, self.nist, self.meteor, self.ribes, self.ter]
    }

    /// Data row with two decimals per column.
    pub fn row(&self) -> String {
        self.values().iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>().join("\t")
    }

    /// Header plus one row, optionally prefixed by a system name column.
    pub fn to_tsv(&self, system: Option<&str>) -> String {
        match system {
            Some(name) => format!("System\t{}\n{name}\t{}\n", Self::HEADER, self.row()),
            None => format!("{}\n{}\n", Self::HEADER, self.row()),
        }
    }
}

impl fmt::Display for EvaluationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tsv(None))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    All,
    Bleu,
    Nist,
    Meteor,
    Ter,
    Ribes,
}

impl Metric {
    fn wants(self, other: Metric) -> bool {
        self == Metric::All || self == other
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Metric::All,
            "bleu" => Metric::Bleu,
            "nist" => Metric::Nist,
            "meteor" => Metric::Meteor,
            "ter" => Metric::Ter,
            "ribes" => Metric::Ribes,
            _ => return Err(Error::InvalidArgument(format!("unknown metric {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluateOptions {
    pub lowercase: bool,
    pub metric: Metric,
    pub bleu_max_n: usize,
    pub nist_max_n: usize,
    pub ribes: RibesOptions,
}

impl Default for EvaluateOptions {
    fn default() -> Self {
        EvaluateOptions {
            lowercase: true,
            metric: Metric::All,
            bleu_max_n: 4,
            nist_max_n: 5,
            ribes: RibesOptions::default(),
        }
    }
}

fn lower(s: &Sentence) -> Sentence {
    s.map_tokens(str::to_lowercase)
}

/// Scores `hyps` against per-hypothesis references. Metrics not selected by
/// `opts.metric` are reported as 0.
pub fn evaluate(hyps: &[Sentence], refs: &[Vec<Sentence>], opts: &EvaluateOptions) -> Result<EvaluationReport> {
    let (hyps, refs) = if opts.lowercase {
        (
            hyps.iter().map(lower).collect::<Vec<_>>(),
            refs.iter().map(|rs| rs.iter().map(lower).collect()).collect::<Vec<Vec<_>>>(),
        )
    } else {
        (hyps.to_vec(), refs.to_vec())
    };
    let m = opts.metric;
    let mut report = EvaluationReport {
        bleu: 0.0,
        nist: 0.0,
        meteor: 0.0,
        ribes: 0.0,
        ter: 0.0,
    };
    super::check_corpus(&hyps, &refs)?;
    if m.wants(Metric::Bleu) {
        report.bleu = bleu(&hyps, &refs, opts.bleu_max_n)?;
    }
    if m.wants(Metric::Nist) {
        report.nist = nist(&hyps, &refs, opts.nist_max_n)?;
    }
    if m.wants(Metric::Meteor) {
        report.meteor = meteor_corpus(&hyps, &refs)?;
    }
    if m.wants(Metric::Ribes) {
        report.ribes = ribes_corpus(&hyps, &refs, &opts.ribes)?;
    }
    if m.wants(Metric::Ter) {
        report.ter = ter_corpus(&hyps, &refs)?;
    }
    Ok(report)
}

fn read_sentences(path: &Path) -> Result<Vec<Sentence>> {
    Ok(textio::read_lines(path)?.iter().map(|l| Sentence::from_whitespace(l)).collect())
}

fn load(hyp_path: &Path, ref_paths: &[&Path]) -> Result<(Vec<Sentence>, Vec<Vec<Sentence>>)> {
    if ref_paths.is_empty() {
        return Err(Error::InvalidArgument("at least one reference file is required".into()));
    }
    let hyps = read_sentences(hyp_path)?;
    let mut refs: Vec<Vec<Sentence>> = vec![Vec::with_capacity(ref_paths.len()); hyps.len()];
    for path in ref_paths {
        let lines = read_sentences(path)?;
        if lines.len() != hyps.len() {
            return Err(Error::LineCountMismatch {
                source_lines: hyps.len(),
                target_lines: lines.len(),
            });
        }
        for (slot, r) in refs.iter_mut().zip(lines) {
            slot.push(r);
        }
    }
    Ok((hyps, refs))
}

/// Reads a hypothesis file and one or more reference files, one sentence
/// per line, and scores them.
pub fn evaluate_files(hyp_path: &Path, ref_paths: &[&Path], opts: &EvaluateOptions) -> Result<EvaluationReport> {
    let (hyps, refs) = load(hyp_path, ref_paths)?;
    evaluate(&hyps, &refs, opts)
}

/// Per-sentence METEOR, RIBES and TER (best over references), one
/// tab-separated line per hypothesis after a header.
pub fn sentence_breakdown(hyps: &[Sentence], refs: &[Vec<Sentence>], opts: &EvaluateOptions) -> Result<String> {
    super::check_corpus(hyps, refs)?;
    let mut out = String::from("line\tMETEOR\tRIBES\tTER\n");
    for (i, (h, rs)) in hyps.iter().zip(refs).enumerate() {
        let (h, rs) = if opts.lowercase {
            (lower(h), rs.iter().map(lower).collect::<Vec<_>>())
        } else {
            (h.clone(), rs.clone())
        };
        let best = |f: &dyn Fn(&Sentence) -> f64, better: fn(f64, f64) -> f64, init: f64| {
            rs.iter().map(f).fold(init, better)
        };
        let m = best(&|r| meteor(&h, r), f64::max, 0.0);
        let rb = best(&|r| ribes(&h, r, &opts.ribes), f64::max, 0.0);
        let t = best(&|r| ter(&h, r), f64::min, f64::INFINITY);
        out.push_str(&format!("{}\t{m:.2}\t{rb:.2}\t{t:.2}\n", i + 1));
    }
    Ok(out)
}

/// File form of [`sentence_breakdown`].
pub fn sentence_breakdown_files(hyp_path: &Path, ref_paths: &[&Path], opts: &EvaluateOptions) -> Result<String> {
    let (hyps, refs) = load(hyp_path, ref_paths)?;
    sentence_breakdown(&hyps, &refs, opts)
}
