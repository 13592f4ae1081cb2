//! Model serialization: a versioned little-endian binary format and ARPA text.
//!
//! Binary layout:
//!
//! ```text
//! magic    8 bytes   "MTSMTLM\0"
//! version  u32       1
//! order    u32
//! smoothing u8       0 = kn, 1 = wb, 2 = uniform
//! vocab    u32 count, then per word: u32 byte length + UTF-8 bytes
//! per order k = 1..=order:
//!          u64 entry count, then per entry (sorted by ids):
//!          k x u32 ids, f64 log10 prob, f64 log10 backoff
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::model::{Entry, NGramModel, Smoothing, BOS_LOGPROB};
use super::vocab::{LmVocab, BOS_ID};
use super::MAX_ORDER;
use crate::error::{Error, Result};
use crate::textio;

const MAGIC: &[u8; 8] = b"MTSMTLM\0";
const VERSION: u32 = 1;

fn sorted_entries(table: &HashMap<Vec<u32>, Entry>) -> Vec<(&Vec<u32>, &Entry)> {
    let mut entries: Vec<_> = table.iter().collect();
    entries.sort_by(|a, b| a.0.cmp(b.0));
    entries
}

struct Reader<'a> {
    bytes: &'a [u8],
    offset: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() - self.offset < n {
            return Err(Error::Binary {
                offset: self.offset,
                message: format!("unexpected end of stream, needed {n} more bytes"),
            });
        }
        let out = &self.bytes[self.offset..self.offset + n];
        self.offset += n;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }

    fn fail<T>(&self, at: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Binary {
            offset: at,
            message: message.into(),
        })
    }
}

impl NGramModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.order as u32).to_le_bytes());
        out.push(match self.smoothing {
            Smoothing::KneserNeyInterpolated => 0,
            Smoothing::WittenBell => 1,
            Smoothing::Uniform => 2,
        });
        out.extend_from_slice(&(self.vocab.len() as u32).to_le_bytes());
        for w in self.vocab.words() {
            out.extend_from_slice(&(w.len() as u32).to_le_bytes());
            out.extend_from_slice(w.as_bytes());
        }
        for table in &self.tables {
            out.extend_from_slice(&(table.len() as u64).to_le_bytes());
            for (gram, e) in sorted_entries(table) {
                for id in gram {
                    out.extend_from_slice(&id.to_le_bytes());
                }
                out.extend_from_slice(&e.logprob.to_bits().to_le_bytes());
                out.extend_from_slice(&e.logbow.to_bits().to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<NGramModel> {
        let mut r = Reader { bytes, offset: 0 };
        if r.take(8)? != MAGIC {
            return r.fail(0, "bad magic header");
        }
        let at = r.offset;
        let version = r.u32()?;
        if version != VERSION {
            return r.fail(at, format!("unsupported version {version}"));
        }
        let at = r.offset;
        let order = r.u32()? as usize;
        if !(1..=MAX_ORDER).contains(&order) {
            return r.fail(at, format!("order {order} out of range"));
        }
        let at = r.offset;
        let smoothing = match r.u8()? {
            0 => Smoothing::KneserNeyInterpolated,
            1 => Smoothing::WittenBell,
            2 => Smoothing::Uniform,
            other => return r.fail(at, format!("unknown smoothing tag {other}")),
        };
        let vocab_len = r.u32()? as usize;
        let mut vocab = LmVocab::new();
        for i in 0..vocab_len {
            let len = r.u32()? as usize;
            let at = r.offset;
            let raw = r.take(len)?;
            let word = std::str::from_utf8(raw).or_else(|_| r.fail(at, "word is not UTF-8"))?;
            if vocab.intern(word) as usize != i {
                return r.fail(at, format!("duplicate or misplaced vocabulary word {word:?}"));
            }
        }
        let mut tables = Vec::with_capacity(order);
        for k in 1..=order {
            let at = r.offset;
            let n = r.u64()? as usize;
            if n > (bytes.len() - r.offset) / (4 * k + 16) {
                return r.fail(at, format!("order {k} declares {n} entries, more than the stream holds"));
            }
            let mut table = HashMap::with_capacity(n);
            for _ in 0..n {
                let at = r.offset;
                let mut gram = Vec::with_capacity(k);
                for _ in 0..k {
                    let id = r.u32()?;
                    if id as usize >= vocab_len {
                        return r.fail(at, format!("word id {id} out of range"));
                    }
                    gram.push(id);
                }
                let logprob = r.f64()?;
                let logbow = r.f64()?;
                table.insert(gram, Entry { logprob, logbow });
            }
            tables.push(table);
        }
        if r.offset != bytes.len() {
            return r.fail(r.offset, "trailing bytes after model");
        }
        if vocab_len < 3 || !tables[0].contains_key(&vec![0]) {
            return r.fail(0, "model lacks the reserved <unk>/<s>/</s> entries");
        }
        Ok(NGramModel {
            order,
            smoothing,
            vocab,
            tables,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<NGramModel> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        NGramModel::from_bytes(&bytes)
    }

    /// ARPA text with tab-separated fields. Values are written with
    /// shortest round-trip formatting, so re-reading is exact.
    pub fn to_arpa(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# smoothing: {}", self.smoothing);
        out.push_str("\n\\data\\\n");
        for (k, table) in self.tables.iter().enumerate() {
            let _ = writeln!(out, "ngram {}={}", k + 1, table.len());
        }
        for (k, table) in self.tables.iter().enumerate() {
            let _ = write!(out, "\n\\{}-grams:\n", k + 1);
            for (gram, e) in sorted_entries(table) {
                let words: Vec<&str> = gram.iter().map(|&id| self.vocab.word(id)).collect();
                let _ = write!(out, "{}\t{}", e.logprob, words.join(" "));
                if k + 1 < self.order {
                    let _ = write!(out, "\t{}", e.logbow);
                }
                out.push('\n');
            }
        }
        out.push_str("\n\\end\\\n");
        out
    }

    pub fn from_arpa(text: &str) -> Result<NGramModel> {
        let what = "ARPA model";
        let mut smoothing = Smoothing::KneserNeyInterpolated;
        let mut declared: Vec<usize> = Vec::new();
        let mut section: Option<usize> = None;
        let mut in_data = false;
        let mut ended = false;
        let mut rows: Vec<Vec<(Vec<String>, f64, f64)>> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end();
            if ended {
                break;
            }
            if let Some(rest) = line.strip_prefix("# smoothing: ") {
                smoothing = Smoothing::parse(rest.trim())
                    .ok_or_else(|| Error::parse(what, line_no, format!("unknown smoothing {rest}")))?;
                continue;
            }
            if line.is_empty() {
                continue;
            }
            if line == "\\data\\" {
                in_data = true;
                continue;
            }
            if line == "\\end\\" {
                ended = true;
                continue;
            }
            if let Some(rest) = line.strip_prefix("ngram ") {
                let (k, n) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(what, line_no, "malformed ngram count"))?;
                let k: usize = k.trim().parse().map_err(|_| Error::parse(what, line_no, "bad order"))?;
                let n: usize = n.trim().parse().map_err(|_| Error::parse(what, line_no, "bad count"))?;
                if k != declared.len() + 1 || k > MAX_ORDER {
                    return Err(Error::parse(what, line_no, "ngram counts out of order"));
                }
                declared.push(n);
                continue;
            }
            if line.starts_with('\\') && line.ends_with("-grams:") {
                let k: usize = line[1..line.len() - 7]
                    .parse()
                    .map_err(|_| Error::parse(what, line_no, "bad section header"))?;
                if k != rows.len() + 1 || k > declared.len() {
                    return Err(Error::parse(what, line_no, "unexpected section"));
                }
                rows.push(Vec::new());
                section = Some(k);
                continue;
            }
            if !in_data {
                continue;
            }
            let k = section.ok_or_else(|| Error::parse(what, line_no, "entry outside a section"))?;
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(Error::parse(what, line_no, "expected prob<TAB>words[<TAB>backoff]"));
            }
            let logprob: f64 = fields[0]
                .parse()
                .map_err(|_| Error::parse(what, line_no, "bad probability"))?;
            let words: Vec<String> = fields[1].split(' ').map(str::to_string).collect();
            if words.len() != k {
                return Err(Error::parse(what, line_no, format!("expected {k} words")));
            }
            let logbow = match fields.get(2) {
                Some(b) => b.parse().map_err(|_| Error::parse(what, line_no, "bad backoff"))?,
                None => 0.0,
            };
            rows[k - 1].push((words, logprob, logbow));
        }

        if !ended || rows.len() != declared.len() || rows.is_empty() {
            return Err(Error::parse(what, text.lines().count(), "truncated ARPA model"));
        }
        for (k, (r, &n)) in rows.iter().zip(&declared).enumerate() {
            if r.len() != n {
                return Err(Error::parse(
                    what,
                    0,
                    format!("order {} declares {n} entries but lists {}", k + 1, r.len()),
                ));
            }
        }

        let mut vocab = LmVocab::new();
        for (words, _, _) in &rows[0] {
            vocab.intern(&words[0]);
        }
        let mut tables = Vec::with_capacity(rows.len());
        for level in &rows {
            let mut table = HashMap::with_capacity(level.len());
            for (words, logprob, logbow) in level {
                let gram: Option<Vec<u32>> = words.iter().map(|w| vocab.get(w)).collect();
                let gram = gram.ok_or_else(|| {
                    Error::parse(what, 0, format!("n-gram {words:?} uses a word missing from the unigrams"))
                })?;
                table.insert(
                    gram,
                    Entry {
                        logprob: *logprob,
                        logbow: *logbow,
                    },
                );
            }
            tables.push(table);
        }
        tables[0].entry(vec![BOS_ID]).or_insert(Entry {
            logprob: BOS_LOGPROB,
            logbow: 0.0,
        });
        Ok(NGramModel {
            order: tables.len(),
            smoothing,
            vocab,
            tables,
        })
    }

    pub fn save_arpa(&self, path: &Path) -> Result<()> {
        textio::write_string(path, &self.to_arpa())
    }

    pub fn load_arpa(path: &Path) -> Result<NGramModel> {
        NGramModel::from_arpa(&textio::read_string(path)?)
    }
}
