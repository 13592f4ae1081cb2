use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::pipeline::{run_experiment, RunOptions};
use crate::error::{Error, Result};
use crate::metrics::EvaluationReport;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub id: String,
    /// Scores, or the error that stopped this experiment.
    pub result: std::result::Result<EvaluationReport, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    /// Row whose BLEU the deltas are measured against: experiment `00` when
    /// it succeeded, else the first successful row.
    pub fn baseline(&self) -> Option<&EvaluationReport> {
        self.rows
            .iter()
            .find(|r| r.id == "00" && r.result.is_ok())
            .or_else(|| self.rows.iter().find(|r| r.result.is_ok()))
            .and_then(|r| r.result.as_ref().ok())
    }

    /// One row per experiment in config order with a BLEU delta column.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("System\t{}\tdBLEU\n", EvaluationReport::HEADER);
        let base = self.baseline().map(|b| b.bleu);
        for row in &self.rows {
            match &row.result {
                Ok(r) => {
                    let delta = base.map_or("-".to_string(), |b| format!("{:+.2}", r.bleu - b));
                    out.push_str(&format!("{}\t{}\t{delta}\n", row.id, r.row()));
                }
                Err(e) => {
                    let msg = e.replace(['\t', '\n'], " ");
                    out.push_str(&format!("{}\tFAILED: {msg}\n", row.id));
                }
            }
        }
        out
    }
}

/// Runs experiments concurrently; a failing experiment becomes a failed
/// row and does not stop the others.
pub fn run_suite(configs: &[ExperimentConfig], opts: &RunOptions) -> Result<SuiteReport> {
    if configs.is_empty() {
        return Err(Error::InvalidArgument("suite has no experiments".into()));
    }
    let rows = configs
        .par_iter()
        .map(|c| SuiteRow {
            id: c.id.clone(),
            result: run_experiment(c, opts).map(|o| o.report).map_err(|e| {
                log::error!("experiment {}: {e}", c.id);
                e.to_string()
            }),
        })
        .collect();
    Ok(SuiteReport { rows })
}

/// Config files (`*.cfg`) of a directory in file-name order.
pub fn load_suite_dir(dir: &Path) -> Result<Vec<ExperimentConfig>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    paths.sort();
    paths.iter().map(|p| ExperimentConfig::load(p)).collect()
}
