use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::features::{push_features, START_TAG};
use crate::corpus::{TaggedCorpus, TaggedSentence};
use crate::error::{Error, Result};
use crate::fsutil;
use crate::tagset::{TagId, Tagset};

pub const MODEL_MAGIC: &str = "advaug-tagger";
pub const MODEL_VERSION: &str = "1";

/// Averaged-perceptron tagging model.
///
/// Weights are stored per feature as one value per tag, in tagset order.
/// `lookup` holds closed-class words that are tagged by dictionary instead of
/// being scored.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggerModel {
    tagset: Tagset,
    weights: HashMap<String, Vec<f64>>,
    lookup: HashMap<String, TagId>,
}

impl TaggerModel {
    /// An all-zero model: every token gets the first tag of `tagset`.
    pub fn new(tagset: Tagset) -> Self {
        TaggerModel {
            tagset,
            weights: HashMap::new(),
            lookup: HashMap::new(),
        }
    }

    pub(crate) fn from_parts(
        tagset: Tagset,
        weights: HashMap<String, Vec<f64>>,
        lookup: HashMap<String, TagId>,
    ) -> Self {
        TaggerModel {
            tagset,
            weights,
            lookup,
        }
    }

    pub fn tagset(&self) -> &Tagset {
        &self.tagset
    }

    pub fn version(&self) -> &'static str {
        MODEL_VERSION
    }

    pub fn weight(&self, feature: &str, tag: &str) -> f64 {
        match (self.weights.get(feature), self.tagset.id(tag)) {
            (Some(w), Some(t)) => w[t],
            _ => 0.0,
        }
    }

    pub fn set_weight(&mut self, feature: &str, tag: &str, weight: f64) -> Result<()> {
        let t = self
            .tagset
            .id(tag)
            .ok_or_else(|| Error::Invalid(format!("tag {tag} not in tagset")))?;
        if !weight.is_finite() {
            return Err(Error::Invalid(format!("non-finite weight {weight}")));
        }
        let n = self.tagset.len();
        self.weights
            .entry(feature.to_string())
            .or_insert_with(|| vec![0.0; n])[t] = weight;
        Ok(())
    }

    /// Forces `word` (matched case-insensitively) to `tag`.
    pub fn set_lookup(&mut self, word: &str, tag: &str) -> Result<()> {
        let t = self
            .tagset
            .id(tag)
            .ok_or_else(|| Error::Invalid(format!("tag {tag} not in tagset")))?;
        self.lookup.insert(word.to_lowercase(), t);
        Ok(())
    }

    pub fn lookup_len(&self) -> usize {
        self.lookup.len()
    }

    pub fn feature_count(&self) -> usize {
        self.weights.len()
    }

    pub(crate) fn lookup_tag(&self, word: &str) -> Option<TagId> {
        if self.lookup.is_empty() {
            return None;
        }
        self.lookup.get(&word.to_lowercase()).copied()
    }

    /// Highest-scoring tag for a feature list; ties go to the earlier tag.
    pub(crate) fn best_tag(&self, features: &[String], scores: &mut Vec<f64>) -> TagId {
        scores.clear();
        scores.resize(self.tagset.len(), 0.0);
        for f in features {
            if let Some(w) = self.weights.get(f) {
                for (s, x) in scores.iter_mut().zip(w) {
                    *s += x;
                }
            }
        }
        argmax_first(scores)
    }

    pub(crate) fn tag_ids<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<TagId> {
        let mut out = Vec::with_capacity(tokens.len());
        let mut features = Vec::with_capacity(16);
        let mut scores = Vec::with_capacity(self.tagset.len());
        for (i, tok) in tokens.iter().enumerate() {
            let tag = match self.lookup_tag(tok.as_ref()) {
                Some(t) => t,
                None => {
                    let (p1, p2) = previous_tags(&self.tagset, &out, i);
                    features.clear();
                    push_features(tokens, i, p1, p2, &mut features);
                    self.best_tag(&features, &mut scores)
                }
            };
            out.push(tag);
        }
        out
    }

    /// Greedy left-to-right tagging.
    pub fn tag<S: AsRef<str>>(&self, tokens: &[S]) -> TaggedSentence {
        let tags = self
            .tag_ids(tokens)
            .into_iter()
            .map(|t| self.tagset.symbol(t).to_string())
            .collect();
        TaggedSentence {
            tokens: tokens.iter().map(|t| t.as_ref().to_string()).collect(),
            tags,
        }
    }

    /// Token-level accuracy against the gold tags of `corpus`.
    pub fn evaluate(&self, corpus: &TaggedCorpus) -> Result<f64> {
        if corpus.is_empty() {
            return Err(Error::Empty("evaluation corpus"));
        }
        let (mut correct, mut total) = (0usize, 0usize);
        for s in corpus.sentences() {
            let predicted = self.tag_ids(&s.tokens);
            for (p, gold) in predicted.iter().zip(&s.tags) {
                total += 1;
                if self.tagset.symbol(*p) == gold {
                    correct += 1;
                }
            }
        }
        Ok(correct as f64 / total as f64)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fsutil::write_atomic(path, |w| self.write_to(w))
    }

    pub fn write_to<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        let tags: Vec<&str> = self.tagset.iter().collect();
        writeln!(w, "{MODEL_MAGIC}\t{MODEL_VERSION}\t{}", tags.join(","))?;
        let mut lookup: Vec<_> = self.lookup.iter().collect();
        lookup.sort();
        for (word, tag) in lookup {
            writeln!(w, "lookup\t{}\t{}", escape(word), self.tagset.symbol(*tag))?;
        }
        let mut features: Vec<_> = self.weights.iter().collect();
        features.sort_by(|a, b| a.0.cmp(b.0));
        for (feature, ws) in features {
            for (t, &x) in ws.iter().enumerate() {
                if x != 0.0 {
                    writeln!(
                        w,
                        "weight\t{}\t{}\t{x:?}",
                        escape(feature),
                        self.tagset.symbol(t)
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = fsutil::open(path)?;
        Self::read_from(BufReader::new(file)).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    pub fn read_from<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = match lines.next() {
            Some(line) => line.map_err(|e| Error::io("<model>", e))?,
            None => return Err(Error::parse(1, "empty model file")),
        };
        let fields: Vec<&str> = header.split('\t').collect();
        if fields.len() != 3 || fields[0] != MODEL_MAGIC {
            return Err(Error::parse(1, "not a tagger model header"));
        }
        if fields[1] != MODEL_VERSION {
            return Err(Error::ModelVersion(fields[1].to_string()));
        }
        let tagset =
            Tagset::new(fields[2].split(',')).map_err(|e| Error::parse(1, e.to_string()))?;
        let mut model = TaggerModel::new(tagset);
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            let line = line.map_err(|e| Error::io("<model>", e))?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let bad = |msg: &str| Error::parse(lineno, msg.to_string());
            match fields.as_slice() {
                ["lookup", word, tag] => {
                    let word = unescape(word).ok_or_else(|| bad("bad escape"))?;
                    model
                        .set_lookup(&word, tag)
                        .map_err(|e| bad(&e.to_string()))?;
                }
                ["weight", feature, tag, value] => {
                    let feature = unescape(feature).ok_or_else(|| bad("bad escape"))?;
                    let value: f64 = value.parse().map_err(|_| bad("bad weight"))?;
                    model
                        .set_weight(&feature, tag, value)
                        .map_err(|e| bad(&e.to_string()))?;
                }
                _ => return Err(bad("unrecognized model line")),
            }
        }
        Ok(model)
    }
}

pub(crate) fn previous_tags<'a>(
    tagset: &'a Tagset,
    decoded: &[TagId],
    i: usize,
) -> (&'a str, &'a str) {
    let p1 = if i >= 1 {
        tagset.symbol(decoded[i - 1])
    } else {
        START_TAG
    };
    let p2 = if i >= 2 {
        tagset.symbol(decoded[i - 2])
    } else {
        START_TAG
    };
    (p1, p2)
}

pub(crate) fn argmax_first(scores: &[f64]) -> TagId {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next()? {
            '\\' => '\\',
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            _ => return None,
        });
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universal() -> TaggerModel {
        TaggerModel::new(Tagset::universal())
    }

    #[test]
    fn single_weight_selects_adv() {
        let mut m = universal();
        m.set_weight("w=quickly", "ADV", 1.0).unwrap();
        assert_eq!(m.tag(&["quickly"]).tags, ["ADV"]);
    }

    #[test]
    fn zero_model_ties_to_first_tag() {
        let m = universal();
        assert_eq!(
            m.tag(&["anything", "at", "all"]).tags,
            ["ADJ", "ADJ", "ADJ"]
        );
        assert!(m.tag::<&str>(&[]).tags.is_empty());
    }

    #[test]
    fn lookup_overrides_scores() {
        let mut m = universal();
        m.set_weight("w=very", "ADJ", 5.0).unwrap();
        m.set_lookup("Very", "ADV").unwrap();
        assert_eq!(m.tag(&["VERY"]).tags, ["ADV"]);
    }

    #[test]
    fn evaluate_counts_tokens() {
        let m = universal();
        let t = Tagset::universal();
        let s = |tags: &[&str]| TaggedSentence {
            tokens: tags.iter().map(|_| "w".to_string()).collect(),
            tags: tags.iter().map(|x| x.to_string()).collect(),
        };
        let all_noun = TaggedCorpus::new(t.clone(), vec![s(&["NOUN", "VERB"])]).unwrap();
        assert_eq!(m.evaluate(&all_noun).unwrap(), 0.0);
        let half =
            TaggedCorpus::new(t.clone(), vec![s(&["ADJ", "NOUN"]), s(&["ADJ", "VERB"])]).unwrap();
        assert_eq!(m.evaluate(&half).unwrap(), 0.5);
        let perfect = TaggedCorpus::new(t.clone(), vec![s(&["ADJ"])]).unwrap();
        assert_eq!(m.evaluate(&perfect).unwrap(), 1.0);
        assert!(m.evaluate(&TaggedCorpus::new(t, vec![]).unwrap()).is_err());
    }

    #[test]
    fn file_round_trip() {
        let mut m = universal();
        m.set_weight("w=odd\tfeature\\x", "ADV", 0.1 + 0.2).unwrap();
        m.set_weight("bias", "NOUN", -1e-17).unwrap();
        m.set_weight("suf1=y", "ADJ", 123456.789).unwrap();
        m.set_lookup("never", "ADV").unwrap();
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        let back = TaggerModel::read_from(buf.as_slice()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn empty_model_round_trip() {
        let m = universal();
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        let back = TaggerModel::read_from(buf.as_slice()).unwrap();
        assert_eq!(back.tag(&["x", "y"]).tags, ["ADJ", "ADJ"]);
    }

    #[test]
    fn rejects_unknown_version() {
        let err = TaggerModel::read_from("advaug-tagger\t99\tADJ,ADV,X\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("unsupported model version"));
    }

    #[test]
    fn malformed_line_reports_line() {
        let text = "advaug-tagger\t1\tADJ,ADV,X\nweight\tbias\tADV\t1.0\nweight\tbias\tADV\tnope\n";
        match TaggerModel::read_from(text.as_bytes()) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let text = "advaug-tagger\t1\tADJ,ADV,X\nweight\tbias\tNOPE\t1.0\n";
        assert!(matches!(
            TaggerModel::read_from(text.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
