use std::collections::HashMap;

pub const UNK: &str = "<unk>";
pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";

pub(crate) const UNK_ID: u32 = 0;
pub(crate) const BOS_ID: u32 = 1;
pub(crate) const EOS_ID: u32 = 2;

/// Word ids for a language model. Ids 0, 1 and 2 are always `<unk>`, `<s>`
/// and `</s>`; training words follow in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LmVocab {
    words: Vec<String>,
    index: HashMap<String, u32>,
}

impl Default for LmVocab {
    fn default() -> Self {
        let mut vocab = LmVocab {
            words: Vec::new(),
            index: HashMap::new(),
        };
        for w in [UNK, BOS, EOS] {
            vocab.intern(w);
        }
        vocab
    }
}

impl LmVocab {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, word: &str) -> u32 {
        if let Some(&id) = self.index.get(word) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(word.to_string());
        self.index.insert(word.to_string(), id);
        id
    }

    /// Id of `word`, or the `<unk>` id for out-of-vocabulary words.
    pub fn id(&self, word: &str) -> u32 {
        self.index.get(word).copied().unwrap_or(UNK_ID)
    }

    pub fn get(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Every id that can be predicted: all words except `<s>`.
    pub fn predictable(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.words.len() as u32).filter(|&id| id != BOS_ID)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}
