//! Reader for the parts of CoNLL-U the tagger needs: word form (column 2)
//! and universal POS tag (column 4).

use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fsutil;
use crate::tagset::Tagset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedSentence {
    pub tokens: Vec<String>,
    pub tags: Vec<String>,
}

impl TaggedSentence {
    pub fn new(tokens: Vec<String>, tags: Vec<String>) -> Result<Self> {
        if tokens.len() != tags.len() {
            return Err(Error::Invalid(format!(
                "{} tokens but {} tags",
                tokens.len(),
                tags.len()
            )));
        }
        Ok(TaggedSentence { tokens, tags })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Positions carrying `tag`.
    pub fn positions_of<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.tags
            .iter()
            .enumerate()
            .filter(move |(_, t)| *t == tag)
            .map(|(i, _)| i)
    }
}

/// Sentences with gold tags, all drawn from `tagset`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedCorpus {
    tagset: Tagset,
    sentences: Vec<TaggedSentence>,
}

impl TaggedCorpus {
    pub fn new(tagset: Tagset, sentences: Vec<TaggedSentence>) -> Result<Self> {
        for (i, s) in sentences.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::Invalid(format!("sentence {i} is empty")));
            }
            if s.tokens.len() != s.tags.len() {
                return Err(Error::Invalid(format!(
                    "sentence {i}: token/tag count mismatch"
                )));
            }
            if let Some(t) = s.tags.iter().find(|t| !tagset.contains(t)) {
                return Err(Error::Invalid(format!(
                    "sentence {i}: tag {t} not in tagset"
                )));
            }
        }
        Ok(TaggedCorpus { tagset, sentences })
    }

    pub fn tagset(&self) -> &Tagset {
        &self.tagset
    }

    pub fn sentences(&self) -> &[TaggedSentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(TaggedSentence::len).sum()
    }

    /// First `n` sentences (or all of them).
    pub fn head(&self, n: usize) -> TaggedCorpus {
        TaggedCorpus {
            tagset: self.tagset.clone(),
            sentences: self.sentences.iter().take(n).cloned().collect(),
        }
    }
}

pub fn load_conllu(path: &Path, tagset: &Tagset) -> Result<TaggedCorpus> {
    let file = fsutil::open(path)?;
    read_conllu(BufReader::new(file), tagset).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_conllu<R: BufRead>(reader: R, tagset: &Tagset) -> Result<TaggedCorpus> {
    let other = tagset.symbol(tagset.other()).to_string();
    let mut sentences = Vec::new();
    let mut tokens = Vec::new();
    let mut tags = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io("<conllu>", e))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            if !tokens.is_empty() {
                sentences.push(TaggedSentence {
                    tokens: std::mem::take(&mut tokens),
                    tags: std::mem::take(&mut tags),
                });
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 4 {
            return Err(Error::parse(
                lineno,
                format!(
                    "expected at least 4 tab-separated columns, found {}",
                    cols.len()
                ),
            ));
        }
        // multiword-token ranges ("3-4") and empty nodes ("5.1") carry no UPOS
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        if cols[1].is_empty() {
            return Err(Error::parse(lineno, "empty word form"));
        }
        tokens.push(cols[1].to_string());
        tags.push(if tagset.contains(cols[3]) {
            cols[3].to_string()
        } else {
            other.clone()
        });
    }
    if !tokens.is_empty() {
        sentences.push(TaggedSentence { tokens, tags });
    }
    TaggedCorpus::new(tagset.clone(), sentences)
}
