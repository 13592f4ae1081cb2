//! Seeded synthetic parallel corpus with a known phrase lexicon.
//!
//! Source sentences follow `[Name] NP verb NP [compound] .` where an NP is
//! an inflected noun followed by an optional adjective. The target puts
//! the adjective before the noun and renders the inflection as a
//! preposition, so every source unit maps to one target phrase and the
//! only reordering is the local adjective swap. Compounds are
//! concatenations of two noun stems and translate as the two nouns.
//! With `ambiguity > 0` nouns are sometimes rendered by a synonym.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SYLLABLES: [&str; 16] = [
    "ka", "lo", "mi", "ste", "pra", "wo", "zy", "ne", "dor", "bu", "ri", "sa", "tem", "gol", "fi", "ju",
];
const CASES: [(&str, &str); 4] = [("", ""), ("a", "of"), ("om", "to"), ("ami", "with")];

pub struct Lexicon {
    pub nouns: Vec<(String, String, String)>,
    pub adjectives: Vec<(String, String)>,
    pub verbs: Vec<(String, String)>,
    pub names: Vec<String>,
    pub compounds: Vec<(usize, usize)>,
}

fn word(rng: &mut ChaCha8Rng, syllables: usize, used: &mut std::collections::HashSet<String>) -> String {
    loop {
        let w: String = (0..syllables).map(|_| *SYLLABLES.choose(rng).unwrap()).collect();
        if used.insert(w.clone()) {
            return w;
        }
    }
}

impl Lexicon {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut used = std::collections::HashSet::new();
        let mut t = 0;
        let mut target = |prefix: &str| {
            t += 1;
            format!("{prefix}{t}")
        };
        let nouns = (0..30)
            .map(|_| (word(&mut rng, 2, &mut used), target("n"), target("syn")))
            .collect();
        let adjectives = (0..15).map(|_| (word(&mut rng, 3, &mut used), target("adj"))).collect();
        let verbs = (0..15).map(|_| (word(&mut rng, 3, &mut used), target("v"))).collect();
        let names = (0..8)
            .map(|_| {
                let w = word(&mut rng, 2, &mut used);
                let mut c = w.chars();
                let first = c.next().unwrap().to_uppercase().collect::<String>();
                first + c.as_str()
            })
            .collect();
        let compounds = (0..15).map(|i| (i, 29 - i)).collect();
        Lexicon {
            nouns,
            adjectives,
            verbs,
            names,
            compounds,
        }
    }
}

pub struct Synthetic {
    pub source: Vec<String>,
    pub target: Vec<String>,
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

fn noun_phrase(rng: &mut ChaCha8Rng, lex: &Lexicon, ambiguity: f64, src: &mut Vec<String>, tgt: &mut Vec<String>) {
    let (stem, en, syn) = lex.nouns.choose(rng).unwrap();
    let (suffix, prep) = CASES.choose(rng).unwrap();
    src.push(format!("{stem}{suffix}"));
    if !prep.is_empty() {
        tgt.push(prep.to_string());
    }
    let noun = if rng.random_bool(ambiguity) { syn } else { en };
    if rng.random_bool(0.5) {
        let (a_src, a_en) = lex.adjectives.choose(rng).unwrap();
        src.push(a_src.clone());
        tgt.push(a_en.clone());
    }
    tgt.push(noun.clone());
}

/// `n` sentence pairs of raw (untokenized) text.
pub fn synthetic_corpus(n: usize, seed: u64, ambiguity: f64) -> Synthetic {
    let lex = Lexicon::new(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut source, mut target) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let (mut s, mut t) = (Vec::new(), Vec::new());
        if rng.random_bool(0.3) {
            let name = lex.names.choose(&mut rng).unwrap();
            s.push(name.clone());
            t.push(name.clone());
        }
        noun_phrase(&mut rng, &lex, ambiguity, &mut s, &mut t);
        let (v_src, v_en) = lex.verbs.choose(&mut rng).unwrap();
        s.push(v_src.clone());
        t.push(v_en.clone());
        noun_phrase(&mut rng, &lex, ambiguity, &mut s, &mut t);
        if rng.random_bool(0.1) {
            let &(a, b) = lex.compounds.choose(&mut rng).unwrap();
            s.push(format!("{}{}", lex.nouns[a].0, lex.nouns[b].0));
            t.push(lex.nouns[a].1.clone());
            t.push(lex.nouns[b].1.clone());
        }
        let quoted = rng.random_bool(0.15);
        let mut src_line = capitalize(&s.join(" "));
        let mut tgt_line = capitalize(&t.join(" "));
        if quoted {
            src_line = format!("\u{201E}{src_line}\u{201D}");
            tgt_line = format!("\u{201C}{tgt_line}\u{201D}");
        }
        source.push(format!("{src_line}."));
        target.push(format!("{tgt_line}."));
    }
    Synthetic { source, target }
}

/// Writes the corpus as two files and returns their paths.
pub fn write_synthetic(dir: &std::path::Path, corpus: &Synthetic) -> (std::path::PathBuf, std::path::PathBuf) {
    let s = dir.join("corpus.pl");
    let t = dir.join("corpus.en");
    std::fs::write(&s, corpus.source.join("\n") + "\n").unwrap();
    std::fs::write(&t, corpus.target.join("\n") + "\n").unwrap();
    (s, t)
}
