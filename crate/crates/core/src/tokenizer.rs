//! Whitespace tokenization with punctuation peeling, and its inverse.
//!
//! Words are split on whitespace, then any run of the characters
//! `.,;:!?"()[]` at either end of a word is peeled off one character per
//! token. Everything inside a word (apostrophes, hyphens, inner periods) is
//! left alone, so `i've` and `well-made` stay single tokens. Case is never
//! touched.

use std::fmt;
use std::ops::Deref;

/// Characters split off the edges of whitespace-delimited words.
pub const EDGE_PUNCT: &[char] = &['.', ',', ';', ':', '!', '?', '"', '(', ')', '[', ']'];

/// Tokens that attach to the previous token without a space.
const CLOSING: &[char] = &['.', ',', ';', ':', '!', '?'];

/// An ordered list of non-empty, whitespace-free tokens.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    pub fn new(tokens: Vec<String>) -> Self {
        debug_assert!(tokens
            .iter()
            .all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
        TokenSequence(tokens)
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }
}

impl Deref for TokenSequence {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl From<Vec<String>> for TokenSequence {
    fn from(tokens: Vec<String>) -> Self {
        TokenSequence::new(tokens)
    }
}

impl<'a> From<&[&'a str]> for TokenSequence {
    fn from(tokens: &[&'a str]) -> Self {
        TokenSequence::new(tokens.iter().map(|t| t.to_string()).collect())
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&detokenize(&self.0))
    }
}

fn is_edge(c: char) -> bool {
    EDGE_PUNCT.contains(&c)
}

pub fn tokenize(text: &str) -> TokenSequence {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let body_start = word
            .char_indices()
            .find(|&(_, c)| !is_edge(c))
            .map(|(i, _)| i);
        let Some(start) = body_start else {
            // all punctuation
            out.extend(word.chars().map(String::from));
            continue;
        };
        let end = word
            .char_indices()
            .rev()
            .find(|&(_, c)| !is_edge(c))
            .map(|(i, c)| i + c.len_utf8())
            .unwrap_or(word.len());
        out.extend(word[..start].chars().map(String::from));
        out.push(word[start..end].to_string());
        out.extend(word[end..].chars().map(String::from));
    }
    TokenSequence(out)
}

/// Joins tokens with single spaces, attaching sentence punctuation and
/// closing brackets to the left and opening brackets to the right. Double
/// quotes alternate between opening and closing.
pub fn detokenize<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    let mut glue_next = true;
    let mut open_quote = false;
    for tok in tokens {
        let tok = tok.as_ref();
        let (attach_left, attach_right) = match tok {
            "(" | "[" => (false, true),
            ")" | "]" => (true, false),
            "\"" => {
                open_quote = !open_quote;
                if open_quote {
                    (false, true)
                } else {
                    (true, false)
                }
            }
            _ if !tok.is_empty() && tok.chars().all(|c| CLOSING.contains(&c)) => (true, false),
            _ => (false, false),
        };
        if !glue_next && !attach_left {
            out.push(' ');
        }
        out.push_str(tok);
        glue_next = attach_right;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s).into_inner()
    }

    #[test]
    fn splits_trailing_period() {
        assert_eq!(
            toks("The film is strictly routine."),
            ["The", "film", "is", "strictly", "routine", "."]
        );
    }

    #[test]
    fn keeps_contractions() {
        assert_eq!(
            toks("Perhaps the best sports movie i've ever seen."),
            ["Perhaps", "the", "best", "sports", "movie", "i've", "ever", "seen", "."]
        );
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t\n").is_empty());
        assert_eq!(detokenize::<&str>(&[]), "");
    }

    #[test]
    fn peels_brackets_and_quotes() {
        assert_eq!(toks("(\"hi!\")"), ["(", "\"", "hi", "!", "\"", ")"]);
        assert_eq!(
            toks("well-made U.S. film"),
            ["well-made", "U.S", ".", "film"]
        );
        assert_eq!(toks("?!"), ["?", "!"]);
    }

    #[test]
    fn detokenize_rules() {
        assert_eq!(
            detokenize(&["The", "film", "is", "routine", "."]),
            "The film is routine."
        );
        assert_eq!(detokenize(&["a", ",", "b"]), "a, b");
        assert_eq!(
            detokenize(&["he", "said", "\"", "no", "\"", "(", "twice", ")", "."]),
            "he said \"no\" (twice)."
        );
    }

    #[test]
    fn normalized_sentences_round_trip() {
        for s in [
            "The film is routine.",
            "This is a ambitious project for a inexperienced filmmaker, but good actors, good poetry and good music help sustain it.",
            "the best sports movie i've seen.",
            "he said \"no\" (twice).",
        ] {
            assert_eq!(detokenize(&tokenize(s)), s);
        }
    }

    fn text_strategy() -> impl Strategy<Value = String> {
        proptest::collection::vec(
            prop_oneof![
                "[a-zA-Z']{1,6}",
                "[.,;:!?\"()\\[\\]]{1,2}",
                "[a-z]{1,3}[.,!?]",
                "[(\"][a-z]{1,3}",
                Just("-".to_string()),
                Just("é".to_string()),
            ],
            0..12,
        )
        .prop_map(|parts| parts.join(" "))
    }

    proptest! {
        #[test]
        fn conserves_characters(s in text_strategy()) {
            let joined: String = tokenize(&s).concat();
            let stripped: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(joined, stripped);
        }

        #[test]
        fn tokens_are_nonempty_and_whitespace_free(s in "\\PC{0,40}") {
            for t in tokenize(&s).iter() {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(char::is_whitespace));
            }
        }

        #[test]
        fn normalized_form_is_idempotent(s in text_strategy()) {
            let t = tokenize(&s);
            prop_assert_eq!(tokenize(&detokenize(&t)), t);
        }

        #[test]
        fn never_recases(s in text_strategy()) {
            let out = detokenize(&tokenize(&s));
            let a: String = out.chars().filter(|c| !c.is_whitespace()).collect();
            let b: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(a, b);
        }
    }
}
