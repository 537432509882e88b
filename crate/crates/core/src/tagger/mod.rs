//! Averaged-perceptron part-of-speech tagger with greedy decoding.

mod features;
mod model;
mod train;

pub use features::{extract_features, END_WORD, START_TAG, START_WORD};
pub use model::{TaggerModel, MODEL_MAGIC, MODEL_VERSION};
pub use train::{train, train_with, TrainOptions, DEFAULT_LOOKUP_MIN_COUNT};

use crate::corpus::{TaggedCorpus, TaggedSentence};
use crate::error::Result;
use std::path::Path;

pub fn tag<S: AsRef<str>>(model: &TaggerModel, tokens: &[S]) -> TaggedSentence {
    model.tag(tokens)
}

pub fn evaluate(model: &TaggerModel, corpus: &TaggedCorpus) -> Result<f64> {
    model.evaluate(corpus)
}

pub fn save_model(model: &TaggerModel, path: &Path) -> Result<()> {
    model.save(path)
}

pub fn load_model(path: &Path) -> Result<TaggerModel> {
    TaggerModel::load(path)
}
