//! The frozen feature template. Changing anything here changes what saved
//! models mean and needs a model-format version bump.

use crate::error::{Error, Result};

pub const START_WORD: &str = "<s>";
pub const END_WORD: &str = "</s>";
pub const START_TAG: &str = "<S>";

fn suffix(word: &str, n: usize) -> &str {
    match word.char_indices().rev().nth(n - 1) {
        Some((i, _)) => &word[i..],
        None => word,
    }
}

fn flag(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

/// Feature strings for the token at `position`, given the two tags decoded
/// before it (`START_TAG` at the sentence start).
pub fn extract_features<S: AsRef<str>>(
    tokens: &[S],
    position: usize,
    prev_tag: &str,
    prev2_tag: &str,
) -> Result<Vec<String>> {
    if position >= tokens.len() {
        return Err(Error::Invalid(format!(
            "position {position} out of range for {} tokens",
            tokens.len()
        )));
    }
    let mut out = Vec::with_capacity(14);
    push_features(tokens, position, prev_tag, prev2_tag, &mut out);
    Ok(out)
}

pub(crate) fn push_features<S: AsRef<str>>(
    tokens: &[S],
    position: usize,
    prev_tag: &str,
    prev2_tag: &str,
    out: &mut Vec<String>,
) {
    let raw = tokens[position].as_ref();
    let word = raw.to_lowercase();
    let prev_word = match position {
        0 => START_WORD.to_string(),
        p => tokens[p - 1].as_ref().to_lowercase(),
    };
    let next_word = match tokens.get(position + 1) {
        Some(w) => w.as_ref().to_lowercase(),
        None => END_WORD.to_string(),
    };
    let is_cap = raw.chars().next().is_some_and(char::is_uppercase);
    let is_digit = raw.chars().all(|c| c.is_ascii_digit());
    let has_hyphen = raw.contains('-');

    out.push("bias".to_string());
    out.push(format!("w={word}"));
    out.push(format!("suf1={}", suffix(&word, 1)));
    out.push(format!("suf2={}", suffix(&word, 2)));
    out.push(format!("suf3={}", suffix(&word, 3)));
    out.push(format!("cap={}", flag(is_cap)));
    out.push(format!("digit={}", flag(is_digit)));
    out.push(format!("hyph={}", flag(has_hyphen)));
    out.push(format!("w-1={prev_word}"));
    out.push(format!("w+1={next_word}"));
    out.push(format!("t-1={prev_tag}"));
    out.push(format!("t-2,t-1={prev2_tag},{prev_tag}"));
    out.push(format!("t-1,w={prev_tag},{word}"));
}
