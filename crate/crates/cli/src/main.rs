use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mtsmt::align::{ModelKind, SymmetrizationHeuristic};
use mtsmt::metrics::{Correlation, Metric};
use mtsmt::phrase::ReorderingScheme;

mod align_cmd;
mod corpus_cmd;
mod decode_cmd;
mod lm_cmd;
mod phrase_cmd;
mod run_cmd;

#[derive(Parser)]
#[command(name = "mtsmt", version, about = "Phrase-based statistical machine translation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize raw text, one sentence per line.
    Tokenize(TokenizeArgs),
    /// Drop empty, over-long, badly proportioned or noisy sentence pairs.
    Clean(CleanArgs),
    /// Learn the most frequent casing of each word.
    TruecaseTrain(TruecaseTrainArgs),
    /// Restore casing of sentence-initial words.
    TruecaseApply(TruecaseApplyArgs),
    /// Carve seeded dev and test sets out of a parallel corpus.
    Split(SplitArgs),
    /// Sentence, token and vocabulary counts of a parallel corpus.
    Stats(StatsArgs),
    /// Estimate an n-gram language model.
    LmTrain(LmTrainArgs),
    /// Perplexity of a language model on a text.
    LmPerplexity(LmPerplexityArgs),
    /// Write a binary language model as ARPA text.
    LmExportArpa(LmExportArgs),
    /// Word alignment.
    #[command(subcommand)]
    Align(AlignCommand),
    /// Phrase extraction, scoring and reordering estimation.
    #[command(subcommand)]
    Phrase(PhraseCommand),
    /// Split compounds into parts seen in a vocabulary.
    CompoundSplit(CompoundArgs),
    /// Translate a tokenized text.
    Decode(DecodeArgs),
    /// Tune log-linear weights on a dev set.
    Tune(TuneArgs),
    /// Score hypotheses against one or more references.
    Score(ScoreArgs),
    /// Run one experiment config end to end.
    Run(RunArgs),
    /// Run every *.cfg in a directory and print a score table.
    Suite(SuiteArgs),
    /// Download an OPUS EMEA parallel corpus.
    FetchEmea(FetchArgs),
}

#[derive(Args)]
pub struct TokenizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Map typographic quotes, dashes and spaces to ASCII first.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long)]
    pub lowercase: bool,
}

#[derive(Args)]
pub struct ParallelIn {
    #[arg(long)]
    pub src: PathBuf,
    #[arg(long)]
    pub tgt: PathBuf,
    #[arg(long, default_value = "pl")]
    pub src_lang: String,
    #[arg(long, default_value = "en")]
    pub tgt_lang: String,
}

#[derive(Args)]
pub struct CleanArgs {
    #[command(flatten)]
    pub input: ParallelIn,
    #[arg(long)]
    pub out_src: PathBuf,
    #[arg(long)]
    pub out_tgt: PathBuf,
    #[arg(long, default_value_t = 80)]
    pub max_len: usize,
    /// Length ratio limit; 0 disables the check.
    #[arg(long, default_value_t = 9.0)]
    pub max_ratio: f64,
    /// Scripts allowed on the source side, e.g. latin; enables the noise filter.
    #[arg(long, value_delimiter = ',')]
    pub src_scripts: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub tgt_scripts: Vec<String>,
    #[arg(long, default_value_t = mtsmt::corpus::DEFAULT_NOISE_THRESHOLD)]
    pub noise_threshold: f64,
    /// Write `line<TAB>reason` for every dropped pair.
    #[arg(long)]
    pub drop_log: Option<PathBuf>,
}

#[derive(Args)]
pub struct TruecaseTrainArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct TruecaseApplyArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SplitArgs {
    #[command(flatten)]
    pub input: ParallelIn,
    /// Writes train/dev/test .src and .tgt files here.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub dev: usize,
    #[arg(long, default_value_t = 1000)]
    pub test: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: ParallelIn,
    /// Tokenize the files before counting.
    #[arg(long)]
    pub raw: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct LmTrainArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    /// kn (interpolated Kneser-Ney) or wb (Witten-Bell).
    #[arg(long, default_value = "kn")]
    pub smoothing: String,
    /// Fail instead of falling back to Witten-Bell where Kneser-Ney is undefined.
    #[arg(long)]
    pub strict: bool,
    /// Also write the model as ARPA text.
    #[arg(long)]
    pub arpa: Option<PathBuf>,
}

#[derive(Args)]
pub struct LmPerplexityArgs {
    #[arg(long)]
    pub lm: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Args)]
pub struct LmExportArgs {
    #[arg(long)]
    pub lm: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Subcommand)]
pub enum AlignCommand {
    /// Train both directional models and store them in a directory.
    Train(AlignTrainArgs),
    /// Align and symmetrize with trained models, writing Pharaoh lines.
    Apply(AlignApplyArgs),
}

#[derive(Args)]
pub struct AlignTrainArgs {
    #[command(flatten)]
    pub input: ParallelIn,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value = "model1")]
    pub model: ModelKind,
    #[arg(long, default_value_t = 5)]
    pub iterations: usize,
    #[arg(long)]
    pub stem_k: Option<usize>,
}

#[derive(Args)]
pub struct AlignApplyArgs {
    #[command(flatten)]
    pub input: ParallelIn,
    #[arg(long)]
    pub model_dir: PathBuf,
    #[arg(long, default_value = "grow-diag-final-and")]
    pub heuristic: SymmetrizationHeuristic,
    #[arg(long)]
    pub stem_k: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Subcommand)]
pub enum PhraseCommand {
    /// Extract consistent phrase pairs with their orientations.
    Extract(ExtractArgs),
    /// Score extracted phrases into a phrase table.
    Score(PhraseScoreArgs),
    /// Estimate a lexicalized reordering table from extracted phrases.
    Reorder(ReorderArgs),
}

#[derive(Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub input: ParallelIn,
    #[arg(long)]
    pub alignment: PathBuf,
    #[arg(long, default_value_t = 7)]
    pub max_len: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct PhraseScoreArgs {
    #[arg(long)]
    pub extract: PathBuf,
    /// Lexical table generating source words from target words.
    #[arg(long)]
    pub lex_f2e: PathBuf,
    #[arg(long)]
    pub lex_e2f: PathBuf,
    #[arg(long)]
    pub stem_k: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ReorderArgs {
    #[arg(long)]
    pub extract: PathBuf,
    #[arg(long, default_value = "msd")]
    pub scheme: ReorderingScheme,
    #[arg(long, default_value_t = 0.5)]
    pub smoothing: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct CompoundArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Text to count word frequencies from; defaults to the input.
    #[arg(long)]
    pub vocab_from: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub min_part_len: usize,
    #[arg(long, default_value_t = 2)]
    pub max_parts: usize,
}

#[derive(Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long)]
    pub lm: PathBuf,
    #[arg(long)]
    pub reordering: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub beam: usize,
    /// Maximum jump; -1 means unlimited, 0 monotone.
    #[arg(long, default_value_t = 6, allow_negative_numbers = true)]
    pub distortion: i64,
    #[arg(long, default_value_t = 7)]
    pub max_phrase_len: usize,
    #[arg(long)]
    pub no_recombination: bool,
}

#[derive(Args)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub models: ModelArgs,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Per-sentence derivation trace.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub models: ModelArgs,
    #[arg(long)]
    pub dev_src: PathBuf,
    #[arg(long)]
    pub dev_ref: PathBuf,
    /// Starting weights; defaults are used otherwise.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 30)]
    pub iterations: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub hyp: PathBuf,
    #[arg(long, num_args = 1.., required = true)]
    pub refs: Vec<PathBuf>,
    #[arg(long)]
    pub no_lowercase: bool,
    #[arg(long, default_value = "all")]
    pub metric: Metric,
    #[arg(long, default_value = "kendall")]
    pub correlation: Correlation,
    /// Also write per-sentence METEOR, RIBES and TER.
    #[arg(long)]
    pub sentences: Option<PathBuf>,
}

#[derive(Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "cache")]
    pub cache: PathBuf,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SuiteArgs {
    #[arg(long)]
    pub configs: PathBuf,
    #[arg(long, default_value = "cache")]
    pub cache: PathBuf,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct FetchArgs {
    #[arg(long, default_value = "pl-en")]
    pub pair: String,
    #[arg(long)]
    pub out: PathBuf,
    /// Expected sha256 of the downloaded archive.
    #[arg(long)]
    pub sha256: Option<String>,
}

fn dispatch(command: Command) -> mtsmt::Result<()> {
    match command {
        Command::Tokenize(a) => corpus_cmd::tokenize_file(&a),
        Command::Clean(a) => corpus_cmd::clean(&a),
        Command::TruecaseTrain(a) => corpus_cmd::truecase_train(&a),
        Command::TruecaseApply(a) => corpus_cmd::truecase_apply(&a),
        Command::Split(a) => corpus_cmd::split(&a),
        Command::Stats(a) => corpus_cmd::stats(&a),
        Command::LmTrain(a) => lm_cmd::train(&a),
        Command::LmPerplexity(a) => lm_cmd::perplexity(&a),
        Command::LmExportArpa(a) => lm_cmd::export_arpa(&a),
        Command::Align(AlignCommand::Train(a)) => align_cmd::train(&a),
        Command::Align(AlignCommand::Apply(a)) => align_cmd::apply(&a),
        Command::Phrase(PhraseCommand::Extract(a)) => phrase_cmd::extract(&a),
        Command::Phrase(PhraseCommand::Score(a)) => phrase_cmd::score(&a),
        Command::Phrase(PhraseCommand::Reorder(a)) => phrase_cmd::reorder(&a),
        Command::CompoundSplit(a) => phrase_cmd::compound(&a),
        Command::Decode(a) => decode_cmd::decode(&a),
        Command::Tune(a) => decode_cmd::tune(&a),
        Command::Score(a) => decode_cmd::score(&a),
        Command::Run(a) => run_cmd::run(&a),
        Command::Suite(a) => run_cmd::suite(&a),
        Command::FetchEmea(a) => run_cmd::fetch(&a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
