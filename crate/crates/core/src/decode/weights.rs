use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::phrase::{Orientation, ReorderingScheme};
use crate::textio;

pub const NUM_FEATURES: usize = 19;

pub const FEATURE_NAMES: [&str; NUM_FEATURES] = [
    "phi_f_e",
    "lex_f_e",
    "phi_e_f",
    "lex_e_f",
    "lm",
    "distortion",
    "word_penalty",
    "phrase_penalty",
    "oov",
    "reo_prev_M",
    "reo_prev_S",
    "reo_prev_D",
    "reo_prev_DL",
    "reo_prev_DR",
    "reo_next_M",
    "reo_next_S",
    "reo_next_D",
    "reo_next_DL",
    "reo_next_DR",
];

pub(crate) const LM: usize = 4;
pub(crate) const DISTORTION: usize = 5;
pub(crate) const WORD_PENALTY: usize = 6;
pub(crate) const PHRASE_PENALTY: usize = 7;
pub(crate) const OOV: usize = 8;
const REO_PREV: usize = 9;
const REO_NEXT: usize = 14;

pub(crate) fn orientation_slot(o: Orientation) -> usize {
    match o {
        Orientation::Monotone => 0,
        Orientation::Swap => 1,
        Orientation::Discontinuous => 2,
        Orientation::DiscontinuousLeft => 3,
        Orientation::DiscontinuousRight => 4,
    }
}

pub(crate) fn reo_prev(o: Orientation) -> usize {
    REO_PREV + orientation_slot(o)
}

pub(crate) fn reo_next(o: Orientation) -> usize {
    REO_NEXT + orientation_slot(o)
}

/// Feature values of a derivation, indexed like [`FEATURE_NAMES`].
pub type FeatureVector = [f64; NUM_FEATURES];

/// One weight per feature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights(pub FeatureVector);

impl Default for Weights {
    fn default() -> Self {
        let mut w = [0.3; NUM_FEATURES];
        w[..4].copy_from_slice(&[0.2; 4]);
        w[LM] = 0.5;
        w[DISTORTION] = 0.3;
        w[WORD_PENALTY] = 0.2;
        w[PHRASE_PENALTY] = 0.2;
        w[OOV] = 1.0;
        Weights(w)
    }
}

impl Weights {
    pub fn zero() -> Self {
        Weights([0.0; NUM_FEATURES])
    }

    pub fn index(name: &str) -> Option<usize> {
        FEATURE_NAMES.iter().position(|&n| n == name)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Self::index(name).map(|i| self.0[i])
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let i = Self::index(name).ok_or_else(|| Error::InvalidArgument(format!("unknown feature {name:?}")))?;
        if !value.is_finite() {
            return Err(Error::InvalidArgument(format!("weight for {name} is not finite")));
        }
        self.0[i] = value;
        Ok(())
    }

    pub fn dot(&self, h: &FeatureVector) -> f64 {
        self.0.iter().zip(h).map(|(w, h)| w * h).sum()
    }

    pub fn scaled(&self, k: f64) -> Weights {
        Weights(self.0.map(|w| w * k))
    }

    /// Features that can be non-zero given the reordering scheme in use.
    pub fn active_features(scheme: Option<ReorderingScheme>) -> Vec<usize> {
        let mut out: Vec<usize> = (0..REO_PREV).collect();
        if let Some(s) = scheme {
            for &o in s.orientations() {
                out.push(reo_prev(o));
            }
            for &o in s.orientations() {
                out.push(reo_next(o));
            }
        }
        out
    }

    /// `name<TAB>value` per line, all features.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, w) in FEATURE_NAMES.iter().zip(self.0) {
            let _ = writeln!(out, "{name}\t{w}");
        }
        out
    }

    /// Missing features keep their default values.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut w = Weights::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse("weights file", i + 1, "expected name<TAB>value"))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::parse("weights file", i + 1, "bad value"))?;
            w.set(name.trim(), value)
                .map_err(|e| Error::parse("weights file", i + 1, e.to_string()))?;
        }
        Ok(w)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        textio::write_string(path, &self.to_text())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&textio::read_string(path)?)
    }
}
