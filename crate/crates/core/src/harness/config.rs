use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::decode::DecoderConfig;
use crate::error::{Error, Result};
use crate::textio;

/// Sides a compound splitter is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompoundSide {
    Off,
    Source,
    Target,
    Both,
}

impl CompoundSide {
    pub fn name(self) -> &'static str {
        match self {
            CompoundSide::Off => "off",
            CompoundSide::Source => "source",
            CompoundSide::Target => "target",
            CompoundSide::Both => "both",
        }
    }

    pub fn source(self) -> bool {
        matches!(self, CompoundSide::Source | CompoundSide::Both)
    }

    pub fn target(self) -> bool {
        matches!(self, CompoundSide::Target | CompoundSide::Both)
    }
}

impl FromStr for CompoundSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "off" | "false" | "no" => CompoundSide::Off,
            "source" | "true" | "yes" => CompoundSide::Source,
            "target" => CompoundSide::Target,
            "both" => CompoundSide::Both,
            _ => return Err(Error::Config(format!("compound_split must be off|source|target|both, got {s:?}"))),
        })
    }
}

/// Keys naming pipeline variants this toolkit does not implement.
const RESERVED: [(&str, &str); 6] = [
    ("osm", "operation sequence models"),
    ("factored", "factored models with POS tags"),
    ("hierarchical", "hierarchical phrase-based models with chart decoding"),
    ("target_syntax", "target-syntax models"),
    ("wmt13", "the WMT'13 configuration bundle"),
    ("iwslt13", "the IWSLT'13 configuration bundle"),
];

/// One experiment: corpus, direction, toggles and training settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub id: String,
    /// Parallel corpus files as given, before applying `reverse`.
    pub corpus_source: PathBuf,
    pub corpus_target: PathBuf,
    pub source_lang: String,
    pub target_lang: String,
    /// Translate from the second file's language into the first's.
    pub reverse: bool,

    pub truecase: bool,
    pub stem_k: Option<usize>,
    pub fast_align: bool,
    pub witten_bell: bool,
    pub hier_mslr: bool,
    pub compound_split: CompoundSide,

    pub lm_order: usize,
    pub split_seed: u64,
    pub tune_seed: u64,
    pub dev_size: usize,
    pub test_size: usize,
    pub max_sentence_len: usize,
    pub align_iterations: usize,
    pub max_phrase_len: usize,
    pub reordering_smoothing: f64,
    pub decoder: DecoderConfig,
    pub tune: bool,
    pub tune_restarts: usize,
    pub tune_iterations: usize,
}

impl ExperimentConfig {
    /// Baseline settings for a corpus pair.
    pub fn baseline(id: &str, source: &Path, target: &Path, source_lang: &str, target_lang: &str) -> Self {
        ExperimentConfig {
            id: id.to_string(),
            corpus_source: source.to_path_buf(),
            corpus_target: target.to_path_buf(),
            source_lang: source_lang.to_string(),
            target_lang: target_lang.to_string(),
            reverse: false,
            truecase: false,
            stem_k: None,
            fast_align: false,
            witten_bell: false,
            hier_mslr: false,
            compound_split: CompoundSide::Off,
            lm_order: 5,
            split_seed: 1,
            tune_seed: 1,
            dev_size: 1000,
            test_size: 1000,
            max_sentence_len: 80,
            align_iterations: 5,
            max_phrase_len: 7,
            reordering_smoothing: 0.5,
            decoder: DecoderConfig::default(),
            tune: true,
            tune_restarts: 8,
            tune_iterations: 30,
        }
    }

    /// Language codes in translation order.
    pub fn direction(&self) -> (&str, &str) {
        if self.reverse {
            (&self.target_lang, &self.source_lang)
        } else {
            (&self.source_lang, &self.target_lang)
        }
    }

    /// Reads a config file; relative corpus paths resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = textio::read_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Parses the `[experiment]` key=value format.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut section: Option<String> = None;
        let mut values: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                if name != "experiment" {
                    return Err(Error::Config(format!("line {line_no}: unknown section [{name}]")));
                }
                section = Some(name.to_string());
                continue;
            }
            if section.is_none() {
                return Err(Error::Config(format!("line {line_no}: key outside the [experiment] section")));
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line_no}: expected key = value")))?;
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            if let Some((_, what)) = RESERVED.iter().find(|(k, _)| *k == key) {
                return Err(Error::Config(format!("line {line_no}: `{key}` is reserved: {what} are not supported")));
            }
            if values.insert(key.clone(), (line_no, value)).is_some() {
                return Err(Error::Config(format!("line {line_no}: duplicate key `{key}`")));
            }
        }
        if section.is_none() {
            return Err(Error::Config("missing [experiment] section".into()));
        }

        let mut take = |key: &str| values.remove(key);
        let required = |v: Option<(usize, String)>, key: &str| {
            v.map(|(_, s)| s).ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
        };
        let id = required(take("id"), "id")?;
        let src = required(take("source"), "source")?;
        let tgt = required(take("target"), "target")?;
        let source_lang = required(take("source_lang"), "source_lang")?;
        let target_lang = required(take("target_lang"), "target_lang")?;
        let mut c = ExperimentConfig::baseline(&id, &base.join(src), &base.join(tgt), &source_lang, &target_lang);

        if let Some((n, d)) = take("direction") {
            let forward = format!("{source_lang}-{target_lang}");
            let backward = format!("{target_lang}-{source_lang}");
            c.reverse = if d == forward {
                false
            } else if d == backward {
                true
            } else {
                return Err(Error::Config(format!("line {n}: direction must be {forward} or {backward}, got {d:?}")));
            };
        }
        fn parse<T: FromStr>(v: (usize, String), key: &str) -> Result<T> {
            v.1.parse()
                .map_err(|_| Error::Config(format!("line {}: bad value {:?} for `{key}`", v.0, v.1)))
        }
        macro_rules! set {
            ($key:literal, $field:expr) => {
                if let Some(v) = take($key) {
                    $field = parse(v, $key)?;
                }
            };
        }
        set!("truecase", c.truecase);
        set!("fast_align", c.fast_align);
        set!("witten_bell", c.witten_bell);
        set!("hier_mslr", c.hier_mslr);
        if let Some(v) = take("compound_split") {
            c.compound_split = v.1.parse().map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", v.0)),
                e => e,
            })?;
        }
        if let Some(v) = take("stem_k") {
            let k: usize = parse(v, "stem_k")?;
            c.stem_k = (k > 0).then_some(k);
        }
        set!("lm_order", c.lm_order);
        set!("split_seed", c.split_seed);
        set!("tune_seed", c.tune_seed);
        set!("dev_size", c.dev_size);
        set!("test_size", c.test_size);
        set!("max_sentence_len", c.max_sentence_len);
        set!("align_iterations", c.align_iterations);
        set!("max_phrase_len", c.max_phrase_len);
        set!("reordering_smoothing", c.reordering_smoothing);
        set!("beam_size", c.decoder.beam_size);
        set!("recombination", c.decoder.recombination);
        if let Some(v) = take("distortion_limit") {
            let d: i64 = parse(v, "distortion_limit")?;
            c.decoder.distortion_limit = usize::try_from(d).ok();
        }
        set!("tune", c.tune);
        set!("tune_restarts", c.tune_restarts);
        set!("tune_iterations", c.tune_iterations);
        c.decoder.max_phrase_len = c.max_phrase_len;

        if let Some((key, (n, _))) = values.into_iter().next() {
            return Err(Error::Config(format!("line {n}: unknown key `{key}`")));
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.id.is_empty() || self.id.contains(|c: char| c.is_whitespace() || c == '/' || c == '\\') {
            return bad("id must be non-empty without whitespace or slashes");
        }
        if !(1..=crate::lm::MAX_ORDER).contains(&self.lm_order) {
            return bad("lm_order out of range");
        }
        if self.dev_size == 0 || self.test_size == 0 {
            return bad("dev_size and test_size must be positive");
        }
        if self.align_iterations == 0 || self.max_phrase_len == 0 || self.decoder.beam_size == 0 {
            return bad("align_iterations, max_phrase_len and beam_size must be positive");
        }
        if !(self.reordering_smoothing >= 0.0 && self.reordering_smoothing.is_finite()) {
            return bad("reordering_smoothing must be a non-negative number");
        }
        if self.tune && (self.tune_restarts == 0 || self.tune_iterations == 0) {
            return bad("tune_restarts and tune_iterations must be positive when tuning");
        }
        Ok(())
    }

    /// Every setting as sorted `key = value` lines; the basis of run hashes.
    pub fn canonical(&self) -> String {
        let mut out = String::from("[experiment]\n");
        for (k, v) in self.entries() {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    fn entries(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("id", self.id.clone());
        m.insert("source", self.corpus_source.display().to_string());
        m.insert("target", self.corpus_target.display().to_string());
        m.insert("source_lang", self.source_lang.clone());
        m.insert("target_lang", self.target_lang.clone());
        let (a, b) = self.direction();
        m.insert("direction", format!("{a}-{b}"));
        m.insert("truecase", self.truecase.to_string());
        m.insert("stem_k", self.stem_k.unwrap_or(0).to_string());
        m.insert("fast_align", self.fast_align.to_string());
        m.insert("witten_bell", self.witten_bell.to_string());
        m.insert("hier_mslr", self.hier_mslr.to_string());
        m.insert("compound_split", self.compound_split.name().to_string());
        m.insert("lm_order", self.lm_order.to_string());
        m.insert("split_seed", self.split_seed.to_string());
        m.insert("tune_seed", self.tune_seed.to_string());
        m.insert("dev_size", self.dev_size.to_string());
        m.insert("test_size", self.test_size.to_string());
        m.insert("max_sentence_len", self.max_sentence_len.to_string());
        m.insert("align_iterations", self.align_iterations.to_string());
        m.insert("max_phrase_len", self.max_phrase_len.to_string());
        m.insert("reordering_smoothing", self.reordering_smoothing.to_string());
        m.insert("beam_size", self.decoder.beam_size.to_string());
        m.insert("recombination", self.decoder.recombination.to_string());
        m.insert(
            "distortion_limit",
            self.decoder.distortion_limit.map_or("-1".to_string(), |d| d.to_string()),
        );
        m.insert("tune", self.tune.to_string());
        m.insert("tune_restarts", self.tune_restarts.to_string());
        m.insert("tune_iterations", self.tune_iterations.to_string());
        m
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}
