use std::collections::HashMap;

use crate::error::{Error, Result};

/// The 17 Universal POS tags in canonical (alphabetical) order.
pub const UNIVERSAL_TAGS: [&str; 17] = [
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART", "PRON", "PROPN",
    "PUNCT", "SCONJ", "SYM", "VERB", "X",
];

pub const ADV: &str = "ADV";

/// Catch-all tag that out-of-tagset symbols are mapped to.
pub const OTHER: &str = "X";

/// Index into a [`Tagset`].
pub type TagId = usize;

/// An ordered set of tag symbols. Order matters: it breaks decoding ties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tagset {
    tags: Vec<String>,
    index: HashMap<String, TagId>,
}

impl Tagset {
    /// Builds a tagset from `tags` in the given order. `ADV` is required; the
    /// reserved `X` is appended when absent.
    pub fn new<I, S>(tags: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Vec::new();
        let mut index = HashMap::new();
        for tag in tags {
            let tag = tag.into();
            if tag.is_empty() || tag.chars().any(|c| c.is_whitespace() || c == ',') {
                return Err(Error::Invalid(format!("invalid tag symbol {tag:?}")));
            }
            if index.contains_key(&tag) {
                return Err(Error::Invalid(format!("duplicate tag {tag}")));
            }
            index.insert(tag.clone(), out.len());
            out.push(tag);
        }
        if !index.contains_key(ADV) {
            return Err(Error::Invalid("tagset must contain ADV".into()));
        }
        if !index.contains_key(OTHER) {
            index.insert(OTHER.to_string(), out.len());
            out.push(OTHER.to_string());
        }
        Ok(Tagset { tags: out, index })
    }

    pub fn universal() -> Self {
        Tagset::new(UNIVERSAL_TAGS).expect("universal tagset is valid")
    }

    pub fn id(&self, tag: &str) -> Option<TagId> {
        self.index.get(tag).copied()
    }

    pub fn symbol(&self, id: TagId) -> &str {
        &self.tags[id]
    }

    pub fn adv(&self) -> TagId {
        self.index[ADV]
    }

    pub fn other(&self) -> TagId {
        self.index[OTHER]
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.index.contains_key(tag)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tags.iter().map(String::as_str)
    }
}

impl Default for Tagset {
    fn default() -> Self {
        Tagset::universal()
    }
}
