//! Reading and writing classification datasets and POS-tagged corpora.

mod conllu;
mod dataset;

pub use conllu::{load_conllu, read_conllu, TaggedCorpus, TaggedSentence};
pub use dataset::{
    example_to_json_line, load_dataset, save_dataset, split_train_valid, write_jsonl, Dataset,
    Example, Format, Provenance, Schema, SoftLabel, DEFAULT_VALID_FRACTION, LABEL_SUM_TOLERANCE,
};
