use crate::corpus::TaggedSentence;
use crate::tagger::TaggerModel;
use crate::tagset::ADV;
use crate::tokenizer::{detokenize, tokenize};

/// Adverbs that express negation. Kept only when negation preservation is
/// requested.
pub const NEGATION_ADVERBS: [&str; 3] = ["not", "n't", "never"];

/// The outcome of deleting adverbs from one sentence.
#[derive(Clone, Debug, PartialEq)]
pub struct AdverbDeletion {
    /// The input as tokenized and tagged.
    pub tagged: TaggedSentence,
    /// Positions removed, ascending. Never empty.
    pub deleted: Vec<usize>,
    /// Surviving tokens in their original order.
    pub kept: Vec<String>,
}

impl AdverbDeletion {
    pub fn text(&self) -> String {
        detokenize(&self.kept)
    }
}

fn is_negation(word: &str) -> bool {
    let lower = word.to_lowercase();
    NEGATION_ADVERBS.contains(&lower.as_str())
}

/// Tags `text` and removes every ADV token. Returns `None` when nothing is
/// tagged ADV, i.e. the sentence is skipped.
pub fn delete_adverbs(
    model: &TaggerModel,
    text: &str,
    preserve_negation: bool,
) -> Option<AdverbDeletion> {
    let tokens = tokenize(text);
    let tagged = model.tag(&tokens);
    let deleted: Vec<usize> = tagged
        .positions_of(ADV)
        .filter(|&i| !(preserve_negation && is_negation(&tagged.tokens[i])))
        .collect();
    if deleted.is_empty() {
        return None;
    }
    let mut drop = deleted.iter().peekable();
    let kept = tagged
        .tokens
        .iter()
        .enumerate()
        .filter(|(i, _)| drop.next_if_eq(&i).is_none())
        .map(|(_, t)| t.clone())
        .collect();
    Some(AdverbDeletion {
        tagged,
        deleted,
        kept,
    })
}

/// `x \ {adverbs}` as a surface string, or `None` if `text` has no adverb.
pub fn adverb_delete(model: &TaggerModel, text: &str) -> Option<String> {
    delete_adverbs(model, text, false).map(|d| d.text())
}
