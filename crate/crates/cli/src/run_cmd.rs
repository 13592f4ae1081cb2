use mtsmt::harness::{fetch_emea, load_suite_dir, run_experiment, run_suite, ExperimentConfig, RunOptions};
use mtsmt::textio::write_string;
use mtsmt::{Error, Result};

use crate::{FetchArgs, RunArgs, SuiteArgs};

pub fn run(args: &RunArgs) -> Result<()> {
    let config = ExperimentConfig::load(&args.config)?;
    let opts = RunOptions {
        cache_dir: args.cache.clone(),
        out_dir: Some(args.out.clone()),
    };
    let out = run_experiment(&config, &opts)?;
    print!("{}", out.report.to_tsv(Some(&config.id)));
    Ok(())
}

pub fn suite(args: &SuiteArgs) -> Result<()> {
    let configs = load_suite_dir(&args.configs)?;
    let opts = RunOptions {
        cache_dir: args.cache.clone(),
        out_dir: Some(args.out.clone()),
    };
    let report = run_suite(&configs, &opts)?;
    let table = report.to_tsv();
    std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    write_string(&args.out.join("suite.tsv"), &table)?;
    print!("{table}");
    let failed = report.rows.iter().filter(|r| r.result.is_err()).count();
    if failed > 0 {
        log::warn!("{failed} of {} experiments failed", report.rows.len());
    }
    Ok(())
}

pub fn fetch(args: &FetchArgs) -> Result<()> {
    let fetched = fetch_emea(&args.out, &args.pair, args.sha256.as_deref())?;
    println!("{}\t{}", fetched.source.display(), fetched.target.display());
    eprintln!("{} lines, release {}, sha256 {}", fetched.lines, fetched.version, fetched.sha256);
    Ok(())
}
