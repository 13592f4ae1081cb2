use mtsmt::lm::{count_ngrams, estimate_kneser_ney_with, estimate_witten_bell, KneserNeyOptions, NGramModel, Smoothing};
use mtsmt::{Error, Result};

use crate::corpus_cmd::read_sentences;
use crate::{LmExportArgs, LmPerplexityArgs, LmTrainArgs};

pub fn train(args: &LmTrainArgs) -> Result<()> {
    if args.order == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let sentences = read_sentences(&args.input)?;
    let counts = count_ngrams(&sentences, args.order);
    let model = match Smoothing::parse(&args.smoothing) {
        Some(Smoothing::KneserNeyInterpolated) => estimate_kneser_ney_with(
            &counts,
            &KneserNeyOptions {
                fallback_to_witten_bell: !args.strict,
            },
        )?,
        Some(Smoothing::WittenBell) => estimate_witten_bell(&counts)?,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown smoothing {:?} (expected kn or wb)",
                args.smoothing
            )))
        }
    };
    model.save(&args.out)?;
    if let Some(arpa) = &args.arpa {
        model.save_arpa(arpa)?;
    }
    Ok(())
}

pub fn perplexity(args: &LmPerplexityArgs) -> Result<()> {
    let model = NGramModel::load(&args.lm)?;
    let sentences = read_sentences(&args.input)?;
    println!("{:.4}", model.perplexity(&sentences));
    Ok(())
}

pub fn export_arpa(args: &LmExportArgs) -> Result<()> {
    NGramModel::load(&args.lm)?.save_arpa(&args.out)
}
