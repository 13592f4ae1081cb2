use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use super::extract::PhrasePair;
use crate::align::{LexicalTable, FLOOR_PROB};
use crate::corpus::stem;
use crate::error::{Error, Result};
use crate::textio;

/// Word translation tables used for lexical weighting: `forward` holds
/// t(source | target), `backward` holds t(target | source). With `stem_k`
/// set, words are stemmed before lookup (for tables trained on stems).
#[derive(Debug, Clone)]
pub struct LexicalWeights {
    pub forward: LexicalTable,
    pub backward: LexicalTable,
    pub stem_k: Option<usize>,
}

impl LexicalWeights {
    fn key<'a>(&self, w: &'a str) -> std::borrow::Cow<'a, str> {
        match self.stem_k {
            Some(k) => stem(w, k).into(),
            None => w.into(),
        }
    }

    fn t(table: &LexicalTable, w: &str, given: Option<&str>) -> f64 {
        table.prob(w, given).clamp(FLOOR_PROB, 1.0)
    }

    /// lex(e|f) when `generate_target`, else lex(f|e).
    fn weight(&self, pair: &PhrasePair, alignment: &[(usize, usize)], generate_target: bool) -> f64 {
        let (gen, cond, table) = if generate_target {
            (&pair.target_tokens, &pair.source_tokens, &self.backward)
        } else {
            (&pair.source_tokens, &pair.target_tokens, &self.forward)
        };
        let mut product = 1.0;
        for (i, w) in gen.iter().enumerate() {
            let w = self.key(w);
            let linked: Vec<usize> = alignment
                .iter()
                .filter_map(|&(s, t)| match generate_target {
                    true => (t == i).then_some(s),
                    false => (s == i).then_some(t),
                })
                .collect();
            product *= if linked.is_empty() {
                Self::t(table, &w, None)
            } else {
                linked
                    .iter()
                    .map(|&j| Self::t(table, &w, Some(&self.key(&cond[j]))))
                    .sum::<f64>()
                    / linked.len() as f64
            };
        }
        product
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhraseScores {
    pub phi_f_e: f64,
    pub lex_f_e: f64,
    pub phi_e_f: f64,
    pub lex_e_f: f64,
}

impl PhraseScores {
    pub fn as_array(&self) -> [f64; 4] {
        [self.phi_f_e, self.lex_f_e, self.phi_e_f, self.lex_e_f]
    }
}

/// Scored phrase pairs keyed by (source phrase, target phrase).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhraseTable {
    pub entries: BTreeMap<(String, String), PhraseScores>,
}

impl PhraseTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, source: &str, target: &str) -> Option<&PhraseScores> {
        self.entries.get(&(source.to_string(), target.to_string()))
    }

    pub fn insert(&mut self, source: &str, target: &str, scores: PhraseScores) {
        self.entries.insert((source.to_string(), target.to_string()), scores);
    }

    /// Target options per source phrase.
    pub fn by_source(&self) -> BTreeMap<&str, Vec<(&str, &PhraseScores)>> {
        let mut out: BTreeMap<&str, Vec<(&str, &PhraseScores)>> = BTreeMap::new();
        for ((s, t), sc) in &self.entries {
            out.entry(s.as_str()).or_default().push((t.as_str(), sc));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for ((s, t), sc) in &self.entries {
            let _ = writeln!(out, "{s} ||| {t} ||| {} {} {} {}", sc.phi_f_e, sc.lex_f_e, sc.phi_e_f, sc.lex_e_f);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut table = PhraseTable::default();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::parse("phrase table", i + 1, m.to_string());
            let fields: Vec<&str> = line.split(" ||| ").collect();
            if fields.len() != 3 {
                return Err(bad("expected src ||| tgt ||| scores"));
            }
            let (s, t) = (fields[0].trim(), fields[1].trim());
            if s.is_empty() || t.is_empty() {
                return Err(bad("empty phrase"));
            }
            let v: Vec<f64> = fields[2]
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| bad("bad score")))
                .collect::<Result<_>>()?;
            if v.len() != 4 {
                return Err(bad("expected 4 scores"));
            }
            if v.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
                return Err(bad("scores must lie in (0, 1]"));
            }
            table.insert(
                s,
                t,
                PhraseScores {
                    phi_f_e: v[0],
                    lex_f_e: v[1],
                    phi_e_f: v[2],
                    lex_e_f: v[3],
                },
            );
        }
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        textio::write_string(path, &self.to_text())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&textio::read_string(path)?)
    }
}

/// Relative-frequency phrase probabilities plus lexical weights computed
/// from each pair's most frequent internal alignment.
pub fn score_phrase_table<'a, I>(phrases: I, lex: &LexicalWeights) -> Result<PhraseTable>
where
    I: IntoIterator<Item = &'a PhrasePair>,
{
    let mut pair_counts: BTreeMap<(String, String), (u64, HashMap<Vec<(usize, usize)>, u64>, &'a PhrasePair)> =
        BTreeMap::new();
    let mut src_counts: HashMap<String, u64> = HashMap::new();
    let mut tgt_counts: HashMap<String, u64> = HashMap::new();
    for p in phrases {
        let (s, t) = (p.source_phrase(), p.target_phrase());
        *src_counts.entry(s.clone()).or_insert(0) += 1;
        *tgt_counts.entry(t.clone()).or_insert(0) += 1;
        let slot = pair_counts.entry((s, t)).or_insert_with(|| (0, HashMap::new(), p));
        slot.0 += 1;
        *slot.1.entry(p.alignment.clone()).or_insert(0) += 1;
    }
    if pair_counts.is_empty() {
        return Err(Error::InvalidArgument("no phrase pairs to score".into()));
    }
    let mut table = PhraseTable::default();
    for ((s, t), (c, aligns, example)) in pair_counts {
        let best = aligns
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(a, _)| a.clone())
            .unwrap_or_default();
        let scores = PhraseScores {
            phi_f_e: c as f64 / tgt_counts[&t] as f64,
            lex_f_e: lex.weight(example, &best, false),
            phi_e_f: c as f64 / src_counts[&s] as f64,
            lex_e_f: lex.weight(example, &best, true),
        };
        table.entries.insert((s, t), scores);
    }
    Ok(table)
}
