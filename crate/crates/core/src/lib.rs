//! Rule-based text data augmentation by adverb deletion.
//!
//! The crate bundles everything needed to run the method without external
//! NLP frameworks: a whitespace/punctuation [`tokenizer`], a trainable
//! averaged-perceptron POS [`tagger`], the [`augment`] strategies (adverb
//! deletion plus the EDA, AEDA and softEDA baselines), and a small
//! [`curriculum`] harness that trains a hashed bag-of-words classifier so
//! strategies can be compared end to end.

pub mod augment;
pub mod corpus;
pub mod curriculum;
pub mod error;
pub mod fsutil;
mod rng;
pub mod tagger;
pub mod tagset;
pub mod tokenizer;

pub use corpus::{
    Dataset, Example, Format, Provenance, Schema, SoftLabel, TaggedCorpus, TaggedSentence,
};
pub use error::{Error, Result};
pub use tagger::TaggerModel;
pub use tagset::Tagset;
pub use tokenizer::{detokenize, tokenize, TokenSequence};
