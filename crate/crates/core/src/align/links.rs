use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Links `(source_index, target_index)` for one sentence pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlignmentLinks {
    links: BTreeSet<(usize, usize)>,
    source_len: usize,
    target_len: usize,
}

impl AlignmentLinks {
    pub fn empty(source_len: usize, target_len: usize) -> Self {
        AlignmentLinks {
            links: BTreeSet::new(),
            source_len,
            target_len,
        }
    }

    pub fn new<I>(source_len: usize, target_len: usize, links: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out = Self::empty(source_len, target_len);
        for (s, t) in links {
            out.insert(s, t)?;
        }
        Ok(out)
    }

    pub fn insert(&mut self, source: usize, target: usize) -> Result<bool> {
        if source >= self.source_len || target >= self.target_len {
            return Err(Error::Dimension(format!(
                "link {source}-{target} outside a {}x{} pair",
                self.source_len, self.target_len
            )));
        }
        Ok(self.links.insert((source, target)))
    }

    pub fn contains(&self, source: usize, target: usize) -> bool {
        self.links.contains(&(source, target))
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Links in `(source, target)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.links.iter().copied()
    }

    pub fn is_subset(&self, other: &AlignmentLinks) -> bool {
        self.links.is_subset(&other.links)
    }

    /// Same links with the roles of the two sides exchanged.
    pub fn transposed(&self) -> AlignmentLinks {
        AlignmentLinks {
            links: self.links.iter().map(|&(s, t)| (t, s)).collect(),
            source_len: self.target_len,
            target_len: self.source_len,
        }
    }

    /// Space-separated `s-t` pairs.
    pub fn to_pharaoh(&self) -> String {
        self.to_string()
    }

    pub fn from_pharaoh(line: &str, source_len: usize, target_len: usize) -> Result<Self> {
        let mut out = Self::empty(source_len, target_len);
        for item in line.split_whitespace() {
            let (s, t) = item
                .split_once('-')
                .ok_or_else(|| Error::parse("Pharaoh alignment", 0, format!("bad link {item:?}")))?;
            let s = s
                .parse()
                .map_err(|_| Error::parse("Pharaoh alignment", 0, format!("bad link {item:?}")))?;
            let t = t
                .parse()
                .map_err(|_| Error::parse("Pharaoh alignment", 0, format!("bad link {item:?}")))?;
            out.insert(s, t)?;
        }
        Ok(out)
    }
}

impl fmt::Display for AlignmentLinks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, t)) in self.links.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}-{t}")?;
        }
        Ok(())
    }
}
