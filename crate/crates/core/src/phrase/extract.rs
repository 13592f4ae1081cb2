use std::fmt;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use super::reorder::{training_orientations, Orientation, ReorderingScheme};
use crate::align::AlignmentLinks;
use crate::corpus::{ParallelCorpus, SentencePair};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_PHRASE_LEN: usize = 7;

/// Half-open token range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, i: usize) -> bool {
        self.start <= i && i < self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhrasePair {
    pub source_span: Span,
    pub target_span: Span,
    pub source_tokens: Vec<String>,
    pub target_tokens: Vec<String>,
    /// Links inside the box, relative to the span starts.
    pub alignment: Vec<(usize, usize)>,
}

impl PhrasePair {
    pub fn source_phrase(&self) -> String {
        self.source_tokens.join(" ")
    }

    pub fn target_phrase(&self) -> String {
        self.target_tokens.join(" ")
    }
}

struct Projection {
    src_min: Vec<usize>,
    src_max: Vec<usize>,
    tgt_min: Vec<usize>,
    tgt_max: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl Projection {
    fn new(a: &AlignmentLinks) -> Self {
        let (n, m) = (a.source_len(), a.target_len());
        let mut p = Projection {
            src_min: vec![NONE; m],
            src_max: vec![0; m],
            tgt_min: vec![NONE; n],
            tgt_max: vec![0; n],
        };
        for (s, t) in a.iter() {
            p.src_min[t] = p.src_min[t].min(s);
            p.src_max[t] = p.src_max[t].max(s);
            p.tgt_min[s] = p.tgt_min[s].min(t);
            p.tgt_max[s] = p.tgt_max[s].max(t);
        }
        p
    }

    fn source_aligned(&self, s: usize) -> bool {
        self.tgt_min[s] != NONE
    }

    /// Every consistent box whose source and target lengths are at most
    /// `max_len`, as (source span, target span).
    fn boxes(&self, max_len: usize) -> Vec<(Span, Span)> {
        let (n, m) = (self.tgt_min.len(), self.src_min.len());
        let mut out = Vec::new();
        for ts in 0..m {
            let (mut fs, mut fe) = (NONE, 0);
            for te in ts..m.min(ts + max_len) {
                if self.src_min[te] != NONE {
                    fs = fs.min(self.src_min[te]);
                    fe = fe.max(self.src_max[te]);
                }
                if fs == NONE || fe - fs + 1 > max_len {
                    continue;
                }
                let consistent =
                    (fs..=fe).all(|s| !self.source_aligned(s) || (self.tgt_min[s] >= ts && self.tgt_max[s] <= te));
                if !consistent {
                    continue;
                }
                let mut s0 = fs;
                loop {
                    let mut s1 = fe;
                    loop {
                        if s1 - s0 < max_len {
                            out.push((Span::new(s0, s1 + 1), Span::new(ts, te + 1)));
                        }
                        s1 += 1;
                        if s1 >= n || self.source_aligned(s1) || s1 - s0 >= max_len {
                            break;
                        }
                    }
                    if s0 == 0 || self.source_aligned(s0 - 1) || fe + 1 - s0 >= max_len {
                        break;
                    }
                    s0 -= 1;
                }
            }
        }
        out.sort();
        out
    }
}

/// All consistent boxes of an alignment with no length limit.
pub fn consistent_boxes(alignment: &AlignmentLinks) -> Vec<(Span, Span)> {
    let limit = alignment.source_len().max(alignment.target_len()).max(1);
    Projection::new(alignment).boxes(limit)
}

fn check_dims(pair: &SentencePair, alignment: &AlignmentLinks) -> Result<()> {
    if pair.source.len() != alignment.source_len() || pair.target.len() != alignment.target_len() {
        return Err(Error::Dimension(format!(
            "line {}: sentence pair is {}x{} but its alignment is {}x{}",
            pair.line_number,
            pair.source.len(),
            pair.target.len(),
            alignment.source_len(),
            alignment.target_len()
        )));
    }
    Ok(())
}

fn make_pair(pair: &SentencePair, alignment: &AlignmentLinks, s: Span, t: Span) -> PhrasePair {
    let words = |sent: &crate::corpus::Sentence, span: Span| -> Vec<String> {
        sent.tokens()[span.start..span.end].iter().map(|t| t.to_string()).collect()
    };
    PhrasePair {
        source_span: s,
        target_span: t,
        source_tokens: words(&pair.source, s),
        target_tokens: words(&pair.target, t),
        alignment: alignment
            .iter()
            .filter(|&(a, b)| s.contains(a) && t.contains(b))
            .map(|(a, b)| (a - s.start, b - t.start))
            .collect(),
    }
}

/// Every alignment-consistent phrase pair up to `max_len` tokens per side,
/// sorted by (source span, target span).
pub fn extract_phrases(pair: &SentencePair, alignment: &AlignmentLinks, max_len: usize) -> Result<Vec<PhrasePair>> {
    check_dims(pair, alignment)?;
    if max_len == 0 {
        return Err(Error::InvalidArgument("max phrase length must be at least 1".into()));
    }
    Ok(Projection::new(alignment)
        .boxes(max_len)
        .into_iter()
        .map(|(s, t)| make_pair(pair, alignment, s, t))
        .collect())
}

/// A phrase instance with its training orientations under both schemes,
/// as (previous, next).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedPhrase {
    pub pair: PhrasePair,
    pub msd: (Orientation, Orientation),
    pub hier: (Orientation, Orientation),
}

impl ExtractedPhrase {
    pub fn orientations(&self, scheme: ReorderingScheme) -> (Orientation, Orientation) {
        match scheme {
            ReorderingScheme::Msd => self.msd,
            ReorderingScheme::HierMslr => self.hier,
        }
    }

    /// `src ||| tgt ||| links ||| msd_prev msd_next hier_prev hier_next`
    pub fn to_line(&self) -> String {
        let links: Vec<String> = self.pair.alignment.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        format!(
            "{} ||| {} ||| {} ||| {} {} {} {}",
            self.pair.source_phrase(),
            self.pair.target_phrase(),
            links.join(" "),
            self.msd.0,
            self.msd.1,
            self.hier.0,
            self.hier.1
        )
    }

    /// Parses [`to_line`](Self::to_line) output. Spans are not stored, so they
    /// are reported relative to the phrase itself.
    pub fn from_line(line: &str, line_no: usize) -> Result<Self> {
        let bad = |m: &str| Error::parse("extract file", line_no, m.to_string());
        let fields: Vec<&str> = line.split(" ||| ").collect();
        if fields.len() != 4 {
            return Err(bad("expected 4 fields"));
        }
        let source_tokens: Vec<String> = fields[0].split_whitespace().map(String::from).collect();
        let target_tokens: Vec<String> = fields[1].split_whitespace().map(String::from).collect();
        if source_tokens.is_empty() || target_tokens.is_empty() {
            return Err(bad("empty phrase"));
        }
        let mut alignment = Vec::new();
        for item in fields[2].split_whitespace() {
            let (a, b) = item.split_once('-').ok_or_else(|| bad("bad link"))?;
            let (a, b): (usize, usize) = (a.parse().map_err(|_| bad("bad link"))?, b.parse().map_err(|_| bad("bad link"))?);
            if a >= source_tokens.len() || b >= target_tokens.len() {
                return Err(bad("link outside phrase"));
            }
            alignment.push((a, b));
        }
        let o: Vec<Orientation> = fields[3]
            .split_whitespace()
            .map(|s| s.parse())
            .collect::<Result<_>>()
            .map_err(|_| bad("bad orientation"))?;
        if o.len() != 4 {
            return Err(bad("expected 4 orientations"));
        }
        Ok(ExtractedPhrase {
            pair: PhrasePair {
                source_span: Span::new(0, source_tokens.len()),
                target_span: Span::new(0, target_tokens.len()),
                source_tokens,
                target_tokens,
                alignment,
            },
            msd: (o[0], o[1]),
            hier: (o[2], o[3]),
        })
    }
}

/// Extracts every pair of every sentence with its orientations, in corpus
/// order.
pub fn extract_corpus(corpus: &ParallelCorpus, alignments: &[AlignmentLinks], max_len: usize) -> Result<Vec<ExtractedPhrase>> {
    if corpus.len() != alignments.len() {
        return Err(Error::LineCountMismatch {
            source_lines: corpus.len(),
            target_lines: alignments.len(),
        });
    }
    let per_sentence: Vec<Vec<ExtractedPhrase>> = corpus
        .pairs
        .par_iter()
        .zip(alignments.par_iter())
        .map(|(pair, a)| {
            let phrases = extract_phrases(pair, a, max_len)?;
            let orient = training_orientations(a, &phrases);
            Ok(phrases
                .into_iter()
                .zip(orient)
                .map(|(pair, (msd, hier))| ExtractedPhrase { pair, msd, hier })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_sentence.into_iter().flatten().collect())
}

pub fn write_extract(path: &Path, phrases: &[ExtractedPhrase]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for p in phrases {
        writeln!(w, "{}", p.to_line()).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_extract(path: &Path) -> Result<Vec<ExtractedPhrase>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if !line.is_empty() {
            out.push(ExtractedPhrase::from_line(&line, i + 1)?);
        }
    }
    Ok(out)
}
