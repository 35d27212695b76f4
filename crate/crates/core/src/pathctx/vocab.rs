use super::EditPathContexts;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap};

pub const PAD: u32 = 0;
pub const UNK: u32 = 1;
pub const PAD_TOKEN: &str = "<pad>";
pub const UNK_TOKEN: &str = "<unk>";

/// A dense string→id table with PAD and UNK reserved at 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Lexicon {
    words: Vec<String>,
    #[serde(skip)]
    ids: HashMap<String, u32>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Self::from(vec![PAD_TOKEN.to_string(), UNK_TOKEN.to_string()])
    }
}

impl From<Vec<String>> for Lexicon {
    fn from(words: Vec<String>) -> Self {
        let ids = words
            .iter()
            .enumerate()
            .skip(2)
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        Self { words, ids }
    }
}

impl From<Lexicon> for Vec<String> {
    fn from(l: Lexicon) -> Self {
        l.words
    }
}

impl Lexicon {
    /// Ids go to every string seen at least `min_count` times, most frequent
    /// first, ties broken lexicographically.
    pub fn from_counts(counts: &HashMap<String, usize>, min_count: usize) -> Self {
        let mut kept: Vec<(&String, usize)> = counts
            .iter()
            .filter(|(_, &c)| c >= min_count.max(1))
            .map(|(w, &c)| (w, c))
            .collect();
        kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let mut words = vec![PAD_TOKEN.to_string(), UNK_TOKEN.to_string()];
        words.extend(kept.into_iter().map(|(w, _)| w.clone()));
        Self::from(words)
    }

    pub fn id(&self, word: &str) -> u32 {
        self.ids.get(word).copied().unwrap_or(UNK)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.ids.contains_key(word)
    }

    pub fn word(&self, id: u32) -> Option<&str> {
        self.words.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.len() <= 2
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub subtokens: Lexicon,
    pub path_labels: Lexicon,
    pub tokens: Lexicon,
}

fn bump<'a>(counts: &mut HashMap<String, usize>, words: impl IntoIterator<Item = &'a String>) {
    for w in words {
        *counts.entry(w.clone()).or_default() += 1;
    }
}

/// Builds the three lexicons from (training) path-contexts and token sequences.
pub fn build_vocabulary(
    corpus: &[EditPathContexts],
    token_corpus: &[Vec<String>],
    min_count: usize,
) -> Vocabulary {
    let mut sub = HashMap::new();
    let mut path = HashMap::new();
    let mut tok = HashMap::new();
    for edit in corpus {
        for c in edit.old_contexts.iter().chain(&edit.new_contexts) {
            bump(&mut sub, c.left_subtokens.iter().chain(&c.right_subtokens));
            bump(&mut path, &c.path_labels);
        }
    }
    for seq in token_corpus {
        bump(&mut tok, seq);
    }
    Vocabulary {
        subtokens: Lexicon::from_counts(&sub, min_count),
        path_labels: Lexicon::from_counts(&path, min_count),
        tokens: Lexicon::from_counts(&tok, min_count),
    }
}

impl Vocabulary {
    /// Hex SHA-256 over the three id tables, for checkpoint sidecars.
    pub fn sha256(&self) -> String {
        let mut h = Sha256::new();
        let tables: BTreeMap<&str, &Lexicon> = [
            ("path_labels", &self.path_labels),
            ("subtokens", &self.subtokens),
            ("tokens", &self.tokens),
        ]
        .into_iter()
        .collect();
        for (name, lex) in tables {
            h.update(name.as_bytes());
            h.update([0]);
            for w in lex.words() {
                h.update(w.as_bytes());
                h.update([0]);
            }
            h.update([1]);
        }
        hex::encode(h.finalize())
    }
}
