//! Exhaustive enumeration of phrase derivations.

use std::collections::BTreeMap;

use mtsmt::corpus::Sentence;
use mtsmt::decode::{score_derivation, AppliedPhrase, DecoderConfig, Models, Weights};
use mtsmt::lm::{count_ngrams, estimate_kneser_ney, estimate_witten_bell, NGramModel};
use mtsmt::phrase::{PhraseScores, PhraseTable, ReorderingModel, ReorderingScheme, Span};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// (span, source, target, copied) for every usable phrase of `words`. A
/// single word with no single-word table entry may be copied.
pub fn options(words: &[&str], table: &PhraseTable) -> Vec<(Span, String, String, bool)> {
    let mut out = Vec::new();
    for i in 0..words.len() {
        for j in i + 1..=words.len() {
            let src = words[i..j].join(" ");
            let mut found = false;
            for ((s, t), _) in &table.entries {
                if *s == src {
                    out.push((Span::new(i, j), src.clone(), t.clone(), false));
                    found = true;
                }
            }
            if j == i + 1 && !found {
                out.push((Span::new(i, j), src.clone(), src.clone(), true));
            }
        }
    }
    out
}

/// Every ordered sequence of non-overlapping options covering the sentence.
pub fn all_derivations(sentence: &Sentence, table: &PhraseTable) -> Vec<Vec<AppliedPhrase>> {
    let words = sentence.words();
    let opts = options(&words, table);
    let mut out = Vec::new();
    let mut covered = vec![false; words.len()];
    let mut current = Vec::new();
    walk(&opts, &mut covered, &mut current, 0, &mut out);
    out
}

fn walk(
    opts: &[(Span, String, String, bool)],
    covered: &mut Vec<bool>,
    current: &mut Vec<AppliedPhrase>,
    t: usize,
    out: &mut Vec<Vec<AppliedPhrase>>,
) {
    if covered.iter().all(|&c| c) {
        out.push(current.clone());
        return;
    }
    for (span, s, tgt, oov) in opts {
        if covered[span.start..span.end].iter().any(|&c| c) {
            continue;
        }
        let len = tgt.split_whitespace().count();
        for c in &mut covered[span.start..span.end] {
            *c = true;
        }
        current.push(AppliedPhrase {
            source_span: *span,
            target_span: Span::new(t, t + len),
            source: s.clone(),
            target: tgt.clone(),
            oov: *oov,
        });
        walk(opts, covered, current, t + len, out);
        current.pop();
        for c in &mut covered[span.start..span.end] {
            *c = false;
        }
    }
}

/// Weighted score without reordering, written out term by term:
/// phrase log scores, log10 LM with sentence end, negative linear
/// distortion, word count, phrase count, minus one per copied word.
pub fn plain_score(
    derivation: &[AppliedPhrase],
    table: &PhraseTable,
    lm: &NGramModel,
    w: &[f64],
) -> f64 {
    let mut total = 0.0;
    let mut prev_end = 0i64;
    let mut history: Vec<String> = vec!["<s>".into()];
    for d in derivation {
        if !d.oov {
            let sc = table.get(&d.source, &d.target).unwrap();
            total += w[0] * sc.phi_f_e.ln() + w[1] * sc.lex_f_e.ln() + w[2] * sc.phi_e_f.ln() + w[3] * sc.lex_e_f.ln();
        } else {
            total -= w[8];
        }
        total -= w[5] * (d.source_span.start as i64 - prev_end).abs() as f64;
        prev_end = d.source_span.end as i64;
        for word in d.target.split_whitespace() {
            let h: Vec<&str> = history.iter().map(String::as_str).collect();
            total += w[4] * lm.logprob(word, &h);
            history.push(word.to_string());
            total += w[6];
        }
        total += w[7];
    }
    let h: Vec<&str> = history.iter().map(String::as_str).collect();
    total += w[4] * lm.logprob("</s>", &h);
    total
}

pub const SRC: [&str; 4] = ["a", "b", "c", "d"];
pub const TGT: [&str; 5] = ["x", "y", "z", "u", "v"];

pub fn random_words(rng: &mut ChaCha8Rng, alphabet: &[&str], lo: usize, hi: usize) -> Vec<String> {
    let n = rng.random_range(lo..=hi);
    (0..n).map(|_| alphabet[rng.random_range(0..alphabet.len())].to_string()).collect()
}

pub fn score(rng: &mut ChaCha8Rng) -> PhraseScores {
    let mut p = || rng.random_range(0.05..=1.0);
    PhraseScores {
        phi_f_e: p(),
        lex_f_e: p(),
        phi_e_f: p(),
        lex_e_f: p(),
    }
}

pub struct Instance {
    pub sentence: Sentence,
    pub table: PhraseTable,
    pub lm: NGramModel,
    pub reordering: Option<ReorderingModel>,
    pub weights: Weights,
}

impl Instance {
    pub fn models(&self) -> Models<'_> {
        Models {
            table: &self.table,
            lm: &self.lm,
            reordering: self.reordering.as_ref(),
        }
    }
}

pub fn random_dist(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / z).collect()
}

pub fn random_instance(rng: &mut ChaCha8Rng, scheme: Option<ReorderingScheme>) -> Instance {
    let words = random_words(rng, &SRC, 1, 4);
    let mut table = PhraseTable::default();
    let entries = rng.random_range(1..=12);
    while table.entries.len() < entries {
        let start = rng.random_range(0..words.len());
        let end = rng.random_range(start + 1..=words.len().min(start + 2));
        let tgt = random_words(rng, &TGT, 1, 2).join(" ");
        let sc = score(rng);
        table.insert(&words[start..end].join(" "), &tgt, sc);
        // occasionally drop a word's only single-word entry to force a copy
        if rng.random_bool(0.1) {
            break;
        }
    }
    let lm_data: Vec<Sentence> = (0..6)
        .map(|_| Sentence::from_words(random_words(rng, &TGT, 1, 5)))
        .collect();
    let counts = count_ngrams(&lm_data, rng.random_range(1..=3));
    let lm = if rng.random_bool(0.5) {
        estimate_kneser_ney(&counts).unwrap()
    } else {
        estimate_witten_bell(&counts).unwrap()
    };
    let reordering = scheme.map(|s| {
        let k = s.orientations().len();
        let mut t = BTreeMap::new();
        for (src, tgt) in table.entries.keys() {
            if rng.random_bool(0.7) {
                t.insert((src.clone(), tgt.clone()), (random_dist(rng, k), random_dist(rng, k)));
            }
        }
        ReorderingModel {
            scheme: s,
            global_prev: random_dist(rng, k),
            global_next: random_dist(rng, k),
            table: t,
        }
    });
    let mut weights = Weights::default();
    for w in weights.0.iter_mut() {
        *w = rng.random_range(-0.2..1.0);
    }
    Instance {
        sentence: Sentence::from_words(words),
        table,
        lm,
        reordering,
        weights,
    }
}

pub fn exhaustive() -> DecoderConfig {
    DecoderConfig {
        beam_size: 1_000_000,
        distortion_limit: None,
        ..DecoderConfig::default()
    }
}

pub fn brute_force_best(inst: &Instance) -> f64 {
    brute_force_argmax(inst).1
}

/// Best derivation under the tie rules: score, then smaller output, then
/// smaller source span sequence.
pub fn brute_force_argmax(inst: &Instance) -> (Vec<AppliedPhrase>, f64) {
    let scored: Vec<(Vec<AppliedPhrase>, f64)> = all_derivations(&inst.sentence, &inst.table)
        .into_iter()
        .map(|d| {
            let s = score_derivation(&inst.sentence, &d, inst.models(), &inst.weights).unwrap();
            (d, s)
        })
        .collect();
    let best = scored.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
    let key = |d: &[AppliedPhrase]| {
        let out: Vec<String> = d.iter().flat_map(|p| p.target.split_whitespace().map(String::from)).collect();
        let spans: Vec<_> = d.iter().map(|p| p.source_span).collect();
        (out, spans)
    };
    scored
        .into_iter()
        .filter(|x| best - x.1 <= 1e-9 * best.abs().max(1.0))
        .min_by(|a, b| key(&a.0).cmp(&key(&b.0)))
        .unwrap()
}

