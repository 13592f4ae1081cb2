use std::fmt;

use super::types::{Sentence, SentencePair};

pub const DEFAULT_NOISE_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CleanConfig {
    /// Inclusive token limit per side.
    pub max_len: usize,
    /// Longer/shorter side length ratio limit; `None` disables the check.
    pub max_ratio: Option<f64>,
}

impl Default for CleanConfig {
    fn default() -> Self {
        CleanConfig {
            max_len: 80,
            max_ratio: Some(9.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DropReason {
    Empty,
    TooLong,
    Ratio,
    Noise,
}

impl DropReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::Empty => "empty",
            DropReason::TooLong => "too_long",
            DropReason::Ratio => "ratio",
            DropReason::Noise => "noise",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CleanDecision {
    Keep,
    Drop(DropReason),
}

impl CleanDecision {
    pub fn is_keep(self) -> bool {
        self == CleanDecision::Keep
    }
}

pub fn clean_pair(pair: &SentencePair, config: &CleanConfig) -> CleanDecision {
    let (s, t) = (pair.source.len(), pair.target.len());
    if s == 0 || t == 0 {
        return CleanDecision::Drop(DropReason::Empty);
    }
    if s > config.max_len || t > config.max_len {
        return CleanDecision::Drop(DropReason::TooLong);
    }
    if let Some(max_ratio) = config.max_ratio {
        let (long, short) = (s.max(t) as f64, s.min(t) as f64);
        if long / short > max_ratio {
            return CleanDecision::Drop(DropReason::Ratio);
        }
    }
    CleanDecision::Keep
}

/// Writing systems recognised by the noise filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Script {
    Latin,
    Cyrillic,
    Greek,
}

impl Script {
    pub fn of(c: char) -> Option<Script> {
        match c as u32 {
            0x41..=0x5A | 0x61..=0x7A | 0xAA | 0xBA => Some(Script::Latin),
            0xC0..=0x24F if c != '\u{D7}' && c != '\u{F7}' => Some(Script::Latin),
            0x1E00..=0x1EFF | 0x2C60..=0x2C7F | 0xA720..=0xA7FF => Some(Script::Latin),
            0x370..=0x3FF | 0x1F00..=0x1FFF => Some(Script::Greek),
            0x400..=0x52F | 0x2DE0..=0x2DFF | 0xA640..=0xA69F => Some(Script::Cyrillic),
            _ => None,
        }
    }

    pub fn parse(name: &str) -> Option<Script> {
        match name.to_ascii_lowercase().as_str() {
            "latin" => Some(Script::Latin),
            "cyrillic" => Some(Script::Cyrillic),
            "greek" => Some(Script::Greek),
            _ => None,
        }
    }
}

/// Digits, punctuation and common symbols count as neutral for every script.
fn is_neutral(c: char) -> bool {
    c.is_ascii_punctuation()
        || c.is_numeric()
        || matches!(c as u32,
            0xA1..=0xBF | 0xD7 | 0xF7 | 0x300..=0x36F | 0x2000..=0x206F | 0x20A0..=0x20CF
            | 0x2100..=0x214F | 0x2190..=0x22FF)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseDecision {
    Keep { foreign_fraction: f64 },
    Drop { foreign_fraction: f64 },
}

impl NoiseDecision {
    pub fn is_keep(self) -> bool {
        matches!(self, NoiseDecision::Keep { .. })
    }
}

/// Drops a sentence when more than `threshold` of its characters belong to
/// neither an allowed script nor the neutral digit/punctuation classes.
pub fn filter_noise(sentence: &Sentence, allowed: &[Script], threshold: f64) -> NoiseDecision {
    let mut total = 0usize;
    let mut foreign = 0usize;
    for c in sentence.iter().flat_map(|t| t.chars()) {
        total += 1;
        let ok = is_neutral(c) || Script::of(c).is_some_and(|s| allowed.contains(&s));
        if !ok {
            foreign += 1;
        }
    }
    let foreign_fraction = if total == 0 {
        0.0
    } else {
        foreign as f64 / total as f64
    };
    if foreign_fraction > threshold {
        NoiseDecision::Drop { foreign_fraction }
    } else {
        NoiseDecision::Keep { foreign_fraction }
    }
}

/// Collapses runs of identical adjacent tokens ("the the" -> "the").
pub fn collapse_adjacent_duplicates(sentence: &Sentence) -> Sentence {
    let mut out: Vec<_> = Vec::with_capacity(sentence.len());
    for token in sentence {
        if out.last() != Some(token) {
            out.push(token.clone());
        }
    }
    Sentence::new(out)
}
