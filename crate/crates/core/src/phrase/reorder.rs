use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::extract::{consistent_boxes, ExtractedPhrase, PhrasePair, Span};
use crate::align::AlignmentLinks;
use crate::error::{Error, Result};
use crate::textio;

pub const DEFAULT_SMOOTHING: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Monotone,
    Swap,
    Discontinuous,
    DiscontinuousLeft,
    DiscontinuousRight,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Monotone => "M",
            Orientation::Swap => "S",
            Orientation::Discontinuous => "D",
            Orientation::DiscontinuousLeft => "DL",
            Orientation::DiscontinuousRight => "DR",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "M" => Orientation::Monotone,
            "S" => Orientation::Swap,
            "D" => Orientation::Discontinuous,
            "DL" => Orientation::DiscontinuousLeft,
            "DR" => Orientation::DiscontinuousRight,
            _ => return Err(Error::InvalidArgument(format!("unknown orientation {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReorderingScheme {
    /// monotone / swap / discontinuous, word-based, both directions
    Msd,
    /// monotone / swap / discontinuous-left / discontinuous-right against
    /// merged blocks, both directions
    HierMslr,
}

impl ReorderingScheme {
    pub fn name(self) -> &'static str {
        match self {
            ReorderingScheme::Msd => "msd-bidirectional-fe",
            ReorderingScheme::HierMslr => "hier-mslr-bidirectional-fe",
        }
    }

    pub fn orientations(self) -> &'static [Orientation] {
        use Orientation::*;
        match self {
            ReorderingScheme::Msd => &[Monotone, Swap, Discontinuous],
            ReorderingScheme::HierMslr => &[Monotone, Swap, DiscontinuousLeft, DiscontinuousRight],
        }
    }

    pub fn index(self, o: Orientation) -> Option<usize> {
        self.orientations().iter().position(|&x| x == o)
    }
}

impl fmt::Display for ReorderingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReorderingScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "msd" | "msd-bidirectional-fe" => Ok(ReorderingScheme::Msd),
            "hier-mslr" | "hier_mslr" | "hier-mslr-bidirectional-fe" => Ok(ReorderingScheme::HierMslr),
            _ => Err(Error::InvalidArgument(format!("unknown reordering scheme {s:?}"))),
        }
    }
}

/// Source and target spans of one phrase in a derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhraseSpan {
    pub source: Span,
    pub target: Span,
}

impl PhraseSpan {
    pub fn new(source: Span, target: Span) -> Self {
        PhraseSpan { source, target }
    }
}

impl From<&PhrasePair> for PhraseSpan {
    fn from(p: &PhrasePair) -> Self {
        PhraseSpan::new(p.source_span, p.target_span)
    }
}

fn check_disjoint(others: &[PhraseSpan], current: &PhraseSpan) -> Result<()> {
    for o in others {
        if o.source.overlaps(&current.source) || o.target.overlaps(&current.target) {
            return Err(Error::InvalidArgument(format!(
                "phrase {}x{} overlaps {}x{}",
                current.source, current.target, o.source, o.target
            )));
        }
    }
    Ok(())
}

/// Maximal contiguous source interval covered by `phrases` that contains
/// `seed`.
fn merged_block(phrases: &[PhraseSpan], seed: Span) -> Span {
    let mut block = seed;
    loop {
        let mut grew = false;
        for p in phrases {
            let s = p.source;
            if s.end == block.start || s.start == block.end {
                block = Span::new(block.start.min(s.start), block.end.max(s.end));
                grew = true;
            }
        }
        if !grew {
            return block;
        }
    }
}

/// Orientation of `current` with respect to the phrases translated before
/// it (`history`, in target order, last is the previous phrase). An empty
/// history means `current` starts the sentence.
pub fn classify_orientation(history: &[PhraseSpan], current: &PhraseSpan, scheme: ReorderingScheme) -> Result<Orientation> {
    check_disjoint(history, current)?;
    let cur = current.source;
    let Some(prev) = history.last() else {
        return Ok(if cur.start == 0 {
            Orientation::Monotone
        } else {
            discontinuous(scheme, true)
        });
    };
    let block = match scheme {
        ReorderingScheme::Msd => prev.source,
        ReorderingScheme::HierMslr => merged_block(history, prev.source),
    };
    Ok(if block.end == cur.start {
        Orientation::Monotone
    } else if block.start == cur.end {
        Orientation::Swap
    } else {
        discontinuous(scheme, cur.start >= block.end)
    })
}

/// Orientation of the phrase following `current` with respect to it. `None`
/// means `current` ends the sentence of `source_len` words. Only the next
/// phrase itself is consulted, since later phrases are unknown while
/// decoding left to right.
pub fn classify_next_orientation(
    next: Option<&PhraseSpan>,
    current: &PhraseSpan,
    source_len: usize,
    scheme: ReorderingScheme,
) -> Result<Orientation> {
    let cur = current.source;
    let Some(next) = next else {
        return Ok(if cur.end == source_len {
            Orientation::Monotone
        } else {
            discontinuous(scheme, true)
        });
    };
    check_disjoint(std::slice::from_ref(next), current)?;
    let block = next.source;
    Ok(if cur.end == block.start {
        Orientation::Monotone
    } else if cur.start == block.end {
        Orientation::Swap
    } else {
        discontinuous(scheme, block.start >= cur.end)
    })
}

fn discontinuous(scheme: ReorderingScheme, right: bool) -> Orientation {
    match (scheme, right) {
        (ReorderingScheme::Msd, _) => Orientation::Discontinuous,
        (ReorderingScheme::HierMslr, true) => Orientation::DiscontinuousRight,
        (ReorderingScheme::HierMslr, false) => Orientation::DiscontinuousLeft,
    }
}

/// Training-time orientations of extracted phrases, read off the word
/// alignment. Returns `((msd_prev, msd_next), (hier_prev, hier_next))`.
/// msd tests single links at the corners; hier tests for any consistent
/// block at the corners.
pub fn training_orientations(
    alignment: &AlignmentLinks,
    phrases: &[PhrasePair],
) -> Vec<((Orientation, Orientation), (Orientation, Orientation))> {
    use Orientation::*;
    let (n, m) = (alignment.source_len(), alignment.target_len());
    let boxes = consistent_boxes(alignment);
    let bottom_right: HashSet<(usize, usize)> = boxes.iter().map(|(s, t)| (s.end, t.end)).collect();
    let bottom_left: HashSet<(usize, usize)> = boxes.iter().map(|(s, t)| (s.start, t.end)).collect();
    let top_left: HashSet<(usize, usize)> = boxes.iter().map(|(s, t)| (s.start, t.start)).collect();
    let top_right: HashSet<(usize, usize)> = boxes.iter().map(|(s, t)| (s.end, t.start)).collect();
    let mut tgt_sources: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (s, t) in alignment.iter() {
        tgt_sources[t].push(s);
    }
    let link = |s: usize, t: usize| alignment.contains(s, t);
    phrases
        .iter()
        .map(|p| {
            let (s, t) = (p.source_span, p.target_span);
            let msd_prev = if (s.start == 0 && t.start == 0) || (s.start > 0 && t.start > 0 && link(s.start - 1, t.start - 1)) {
                Monotone
            } else if t.start > 0 && s.end < n && link(s.end, t.start - 1) {
                Swap
            } else {
                Discontinuous
            };
            let msd_next = if (s.end == n && t.end == m) || (s.end < n && t.end < m && link(s.end, t.end)) {
                Monotone
            } else if t.end < m && s.start > 0 && link(s.start - 1, t.end) {
                Swap
            } else {
                Discontinuous
            };
            let hier_prev = if (s.start == 0 && t.start == 0) || bottom_right.contains(&(s.start, t.start)) {
                Monotone
            } else if bottom_left.contains(&(s.end, t.start)) {
                Swap
            } else {
                // nearest aligned target word before the phrase
                let left = (0..t.start)
                    .rev()
                    .find(|&j| !tgt_sources[j].is_empty())
                    .is_none_or(|j| tgt_sources[j].iter().any(|&i| i < s.start));
                if left {
                    DiscontinuousRight
                } else {
                    DiscontinuousLeft
                }
            };
            let hier_next = if (s.end == n && t.end == m) || top_left.contains(&(s.end, t.end)) {
                Monotone
            } else if top_right.contains(&(s.start, t.end)) {
                Swap
            } else {
                let right = (t.end..m)
                    .find(|&j| !tgt_sources[j].is_empty())
                    .is_none_or(|j| tgt_sources[j].iter().any(|&i| i >= s.end));
                if right {
                    DiscontinuousRight
                } else {
                    DiscontinuousLeft
                }
            };
            ((msd_prev, msd_next), (hier_prev, hier_next))
        })
        .collect()
}

/// `(c_o + σ·K·g_o) / (c + σ·K)` for `K` orientations.
pub fn smoothed_probability(count: f64, total: f64, global: f64, sigma: f64, k: usize) -> f64 {
    let sk = sigma * k as f64;
    (count + sk * global) / (total + sk)
}

/// One orientation distribution in scheme order.
pub type OrientationDist = Vec<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct ReorderingModel {
    pub scheme: ReorderingScheme,
    pub global_prev: OrientationDist,
    pub global_next: OrientationDist,
    /// (source phrase, target phrase) → (previous, next) distributions.
    pub table: BTreeMap<(String, String), (OrientationDist, OrientationDist)>,
}

impl ReorderingModel {
    pub fn get(&self, source: &str, target: &str) -> Option<(&OrientationDist, &OrientationDist)> {
        self.table
            .get(&(source.to_string(), target.to_string()))
            .map(|(p, n)| (p, n))
    }

    /// Stored distributions, or the global ones for unseen pairs.
    pub fn distributions(&self, source: &str, target: &str) -> (&OrientationDist, &OrientationDist) {
        self.get(source, target).unwrap_or((&self.global_prev, &self.global_next))
    }

    pub fn to_text(&self) -> String {
        let fmt = |d: &[f64]| d.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        let names: Vec<&str> = self.scheme.orientations().iter().map(|o| o.as_str()).collect();
        let mut out = format!(
            "# scheme={} orientations={} global_prev={} global_next={}\n",
            self.scheme,
            names.join(","),
            fmt(&self.global_prev).replace(' ', ","),
            fmt(&self.global_next).replace(' ', ",")
        );
        for ((s, t), (p, n)) in &self.table {
            let _ = writeln!(out, "{s} ||| {t} ||| {} {}", fmt(p), fmt(n));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("reordering table", 1, "missing header"))?;
        let bad = |line: usize, m: &str| Error::parse("reordering table", line, m.to_string());
        let mut scheme = None;
        let (mut gp, mut gn) = (None, None);
        let floats = |s: &str| -> Result<Vec<f64>> {
            s.split(',')
                .map(|x| x.parse::<f64>().map_err(|_| bad(1, "bad global distribution")))
                .collect()
        };
        for field in header.trim_start_matches('#').split_whitespace() {
            match field.split_once('=') {
                Some(("scheme", v)) => scheme = Some(v.parse::<ReorderingScheme>()?),
                Some(("global_prev", v)) => gp = Some(floats(v)?),
                Some(("global_next", v)) => gn = Some(floats(v)?),
                Some(("orientations", _)) => {}
                _ => return Err(bad(1, "unknown header field")),
            }
        }
        let scheme = scheme.ok_or_else(|| bad(1, "header lacks scheme"))?;
        let k = scheme.orientations().len();
        let (global_prev, global_next) = (gp.ok_or_else(|| bad(1, "no global_prev"))?, gn.ok_or_else(|| bad(1, "no global_next"))?);
        if global_prev.len() != k || global_next.len() != k {
            return Err(bad(1, "global distribution arity"));
        }
        let mut table = BTreeMap::new();
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(" ||| ").collect();
            if fields.len() != 3 {
                return Err(bad(i + 2, "expected 3 fields"));
            }
            let probs: Vec<f64> = fields[2]
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| bad(i + 2, "bad probability")))
                .collect::<Result<_>>()?;
            if probs.len() != 2 * k {
                return Err(bad(i + 2, "wrong number of probabilities for scheme"));
            }
            table.insert(
                (fields[0].to_string(), fields[1].to_string()),
                (probs[..k].to_vec(), probs[k..].to_vec()),
            );
        }
        Ok(ReorderingModel {
            scheme,
            global_prev,
            global_next,
            table,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        textio::write_string(path, &self.to_text())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&textio::read_string(path)?)
    }
}

/// Relative orientation frequencies per phrase pair, smoothed towards the
/// (itself add-σ smoothed) global distribution.
pub fn estimate_reordering(phrases: &[ExtractedPhrase], scheme: ReorderingScheme, sigma: f64) -> Result<ReorderingModel> {
    if phrases.is_empty() {
        return Err(Error::InvalidArgument("no extracted phrases to estimate reordering from".into()));
    }
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument("smoothing must be positive".into()));
    }
    let k = scheme.orientations().len();
    let mut counts: BTreeMap<(String, String), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let (mut gp, mut gn) = (vec![0.0; k], vec![0.0; k]);
    for p in phrases {
        let (prev, next) = p.orientations(scheme);
        let (ip, inx) = (
            scheme.index(prev).ok_or_else(|| Error::InvalidArgument(format!("{prev} is not a {scheme} orientation")))?,
            scheme.index(next).ok_or_else(|| Error::InvalidArgument(format!("{next} is not a {scheme} orientation")))?,
        );
        let slot = counts
            .entry((p.pair.source_phrase(), p.pair.target_phrase()))
            .or_insert_with(|| (vec![0.0; k], vec![0.0; k]));
        slot.0[ip] += 1.0;
        slot.1[inx] += 1.0;
        gp[ip] += 1.0;
        gn[inx] += 1.0;
    }
    let global = |g: &[f64]| -> Vec<f64> {
        let total: f64 = g.iter().sum();
        g.iter().map(|&c| smoothed_probability(c, total, 1.0 / k as f64, sigma, k)).collect()
    };
    let (global_prev, global_next) = (global(&gp), global(&gn));
    let smooth = |c: &[f64], g: &[f64]| -> Vec<f64> {
        let total: f64 = c.iter().sum();
        c.iter().zip(g).map(|(&c, &g)| smoothed_probability(c, total, g, sigma, k)).collect()
    };
    let table = counts
        .into_iter()
        .map(|(key, (p, n))| (key, (smooth(&p, &global_prev), smooth(&n, &global_next))))
        .collect();
    Ok(ReorderingModel {
        scheme,
        global_prev,
        global_next,
        table,
    })
}
