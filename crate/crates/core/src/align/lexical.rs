use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::textio;

/// Reserved conditioning id of the null word.
pub(crate) const NULL_ID: u32 = 0;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Interner {
    words: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    /// An interner whose id 0 is reserved for the null word.
    pub(crate) fn with_null() -> Self {
        Interner {
            words: vec![String::new()],
            index: HashMap::new(),
        }
    }

    pub(crate) fn intern(&mut self, w: &str) -> u32 {
        if let Some(&id) = self.index.get(w) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(w.to_string());
        self.index.insert(w.to_string(), id);
        id
    }

    pub(crate) fn get(&self, w: &str) -> Option<u32> {
        self.index.get(w).copied()
    }

    pub(crate) fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }
}

fn key(e: u32, f: u32) -> u64 {
    ((e as u64) << 32) | f as u64
}

/// Translation probabilities `t(f | e)`, with `e` possibly the null word.
#[derive(Debug, Clone, PartialEq)]
pub struct LexicalTable {
    pub(crate) generated: Interner,
    pub(crate) conditioning: Interner,
    pub(crate) probs: HashMap<u64, f64>,
}

impl LexicalTable {
    pub(crate) fn new(generated: Interner, conditioning: Interner) -> Self {
        LexicalTable {
            generated,
            conditioning,
            probs: HashMap::new(),
        }
    }

    pub(crate) fn get_ids(&self, e: u32, f: u32) -> f64 {
        self.probs.get(&key(e, f)).copied().unwrap_or(0.0)
    }

    pub(crate) fn set_ids(&mut self, e: u32, f: u32, p: f64) {
        self.probs.insert(key(e, f), p);
    }

    pub(crate) fn f_id(&self, f: &str) -> Option<u32> {
        self.generated.get(f)
    }

    pub(crate) fn e_id(&self, e: Option<&str>) -> Option<u32> {
        match e {
            None => Some(NULL_ID),
            Some(w) => self.conditioning.get(w),
        }
    }

    /// `t(f | e)`; `e = None` is the null word. Unseen pairs give 0.
    pub fn prob(&self, f: &str, e: Option<&str>) -> f64 {
        match (self.f_id(f), self.e_id(e)) {
            (Some(f), Some(e)) => self.get_ids(e, f),
            _ => 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Sum of `t(. | e)` for every conditioning word with entries.
    pub fn row_sums(&self) -> Vec<(Option<String>, f64)> {
        let mut sums: HashMap<u32, f64> = HashMap::new();
        for (&k, &p) in &self.probs {
            *sums.entry((k >> 32) as u32).or_insert(0.0) += p;
        }
        let mut out: Vec<_> = sums
            .into_iter()
            .map(|(e, s)| {
                let word = (e != NULL_ID).then(|| self.conditioning.word(e).to_string());
                (word, s)
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Lines of `e<TAB>f<TAB>prob`, with an empty `e` field for the null
    /// word, sorted by `e` then `f`.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<(&str, &str, f64)> = self
            .probs
            .iter()
            .map(|(&k, &p)| {
                let e = (k >> 32) as u32;
                let f = (k & 0xffff_ffff) as u32;
                (self.conditioning.word(e), self.generated.word(f), p)
            })
            .collect();
        rows.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut out = String::new();
        for (e, f, p) in rows {
            let _ = writeln!(out, "{e}\t{f}\t{p}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut table = LexicalTable::new(Interner::default(), Interner::with_null());
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse("lexical table", i + 1, "expected e<TAB>f<TAB>prob"));
            }
            let p: f64 = fields[2]
                .parse()
                .map_err(|_| Error::parse("lexical table", i + 1, "bad probability"))?;
            let e = if fields[0].is_empty() {
                NULL_ID
            } else {
                table.conditioning.intern(fields[0])
            };
            let f = table.generated.intern(fields[1]);
            table.set_ids(e, f, p);
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
