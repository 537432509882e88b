use std::collections::HashMap;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fsutil;

/// Synonym table keyed by lowercased headword.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    entries: HashMap<String, Vec<String>>,
}

impl SynonymLexicon {
    /// Builds a lexicon, dropping synonyms equal to their headword and
    /// entries left without synonyms.
    pub fn from_entries<I, K, V, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lex = SynonymLexicon::default();
        for (head, syns) in entries {
            lex.insert(head.as_ref(), syns);
        }
        lex
    }

    fn insert<V, S>(&mut self, head: &str, syns: V)
    where
        V: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let head = head.trim().to_lowercase();
        let list = self.entries.entry(head.clone()).or_default();
        for s in syns {
            let s = s.as_ref().trim();
            if !s.is_empty() && s.to_lowercase() != head && !list.iter().any(|x| x == s) {
                list.push(s.to_string());
            }
        }
        if list.is_empty() {
            self.entries.remove(&head);
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let reader = BufReader::new(fsutil::open(path)?);
        let mut lex = SynonymLexicon::default();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, syns) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(idx + 1, "expected headword<TAB>synonyms"))?;
            if head.trim().is_empty() {
                return Err(Error::parse(idx + 1, "empty headword"));
            }
            lex.insert(head, syns.split(','));
        }
        Ok(lex)
    }

    pub fn get(&self, word: &str) -> Option<&[String]> {
        self.entries.get(&word.to_lowercase()).map(Vec::as_slice)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.get(word).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_tsv() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("syn.tsv");
        std::fs::write(
            &p,
            "# comment\nfilm\tmovie,picture,Film\n\nsame\tsame\nGood\tfine, decent\n",
        )
        .unwrap();
        let lex = SynonymLexicon::load(&p).unwrap();
        assert_eq!(lex.get("FILM").unwrap(), ["movie", "picture"]);
        assert_eq!(lex.get("good").unwrap(), ["fine", "decent"]);
        assert!(!lex.contains("same"));
        assert_eq!(lex.len(), 2);
    }

    #[test]
    fn rejects_lines_without_tab() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("syn.tsv");
        std::fs::write(&p, "ok\tfine\nbroken line\n").unwrap();
        assert!(matches!(
            SynonymLexicon::load(&p),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
