//! Experiment management: configs, content-addressed stage caching, single
//! runs, suites and corpus download.
//!
//! A run walks prepare, compound (when enabled), lm, align, phrase,
//! reorder, tune, decode and score. Each stage is keyed by the sha256 of
//! its settings and the digests of its input files, so changing one toggle
//! re-runs only the stages that actually see a different input.

mod cache;
mod config;
mod fetch;
mod pipeline;
mod suite;

pub use cache::{file_digest, ArtifactCache, OutputFile, StageArtifact, StageKey};
pub use config::{CompoundSide, ExperimentConfig};
pub use fetch::{emea_url, fetch_emea, parse_pair, FetchedCorpus, EMEA_LANGUAGES, EMEA_VERSION};
pub use pipeline::{join_compounds, parse_report, run_experiment, Manifest, RunOptions, RunOutput, COMPOUND_JOINER};
pub use suite::{load_suite_dir, run_suite, SuiteReport, SuiteRow};
