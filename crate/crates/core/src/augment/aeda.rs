//! Punctuation insertion.

use rand::seq::{index, IndexedRandom};
use rand::Rng;

pub const AEDA_MARKS: [&str; 6] = [".", ";", "?", ":", "!", ","];

/// Largest number of marks inserted into `len` tokens.
pub fn max_marks(ratio: f64, len: usize) -> usize {
    ((ratio * len as f64).floor() as usize).max(1)
}

/// Inserts `k ~ U[1, max_marks]` punctuation marks into `k` distinct gaps
/// (including both ends). Original tokens keep their order.
pub fn aeda_insert<R: Rng + ?Sized>(tokens: &[String], ratio: f64, rng: &mut R) -> Vec<String> {
    if tokens.is_empty() {
        return Vec::new();
    }
    let k = rng.random_range(1..=max_marks(ratio, tokens.len()));
    let mut gaps = index::sample(rng, tokens.len() + 1, k).into_vec();
    gaps.sort_unstable();
    let mut out = Vec::with_capacity(tokens.len() + k);
    let mut next_gap = gaps.into_iter().peekable();
    for gap in 0..=tokens.len() {
        if next_gap.next_if_eq(&gap).is_some() {
            out.push(AEDA_MARKS.choose(rng).unwrap().to_string());
        }
        if let Some(t) = tokens.get(gap) {
            out.push(t.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn three_tokens_get_one_mark() {
        assert_eq!(max_marks(0.3, 3), 1);
        let toks: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        for seed in 0..50 {
            let out = aeda_insert(&toks, 0.3, &mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(out.len(), 4);
        }
    }

    proptest! {
        #[test]
        fn only_inserts_marks(toks in proptest::collection::vec("[a-z]{1,4}", 1..30), seed: u64) {
            let out = aeda_insert(&toks, 0.3, &mut ChaCha8Rng::seed_from_u64(seed));
            let k = out.len() - toks.len();
            prop_assert!(k >= 1 && k <= max_marks(0.3, toks.len()));
            let stripped: Vec<String> = out.into_iter().filter(|t| !AEDA_MARKS.contains(&t.as_str())).collect();
            prop_assert_eq!(stripped, toks);
        }
    }
}
