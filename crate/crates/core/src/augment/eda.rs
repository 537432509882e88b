//! The four EDA token operations: synonym replacement, random insertion,
//! random swap and random deletion.

use rand::seq::{index, IndexedRandom};
use rand::Rng;

use super::lexicon::SynonymLexicon;
use super::stopwords::is_stopword;

fn synonym_tokens<R: Rng + ?Sized>(syns: &[String], rng: &mut R) -> Vec<String> {
    let pick = syns.choose(rng).expect("lexicon entries are non-empty");
    pick.split_whitespace().map(str::to_string).collect()
}

/// Replaces up to `n` distinct non-stopword tokens that have lexicon entries
/// with a uniformly chosen synonym each.
pub fn synonym_replacement<R: Rng + ?Sized>(
    tokens: &[String],
    n: usize,
    lex: &SynonymLexicon,
    rng: &mut R,
) -> Vec<String> {
    let eligible: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| !is_stopword(t) && lex.contains(t))
        .map(|(i, _)| i)
        .collect();
    if eligible.is_empty() || n == 0 {
        return tokens.to_vec();
    }
    let mut chosen: Vec<usize> = index::sample(rng, eligible.len(), n.min(eligible.len()))
        .into_iter()
        .map(|k| eligible[k])
        .collect();
    chosen.sort_unstable();
    let mut replacement: Vec<Option<Vec<String>>> = vec![None; tokens.len()];
    for &pos in &chosen {
        let syns = lex.get(&tokens[pos]).expect("eligible tokens have entries");
        replacement[pos] = Some(synonym_tokens(syns, rng));
    }
    let mut out = Vec::with_capacity(tokens.len() + 2);
    for (tok, rep) in tokens.iter().zip(replacement) {
        match rep {
            Some(r) => out.extend(r),
            None => out.push(tok.clone()),
        }
    }
    out
}

/// `n` times: takes a random token that has synonyms and inserts one of its
/// synonyms at a random position.
pub fn random_insertion<R: Rng + ?Sized>(
    tokens: &[String],
    n: usize,
    lex: &SynonymLexicon,
    rng: &mut R,
) -> Vec<String> {
    let mut out = tokens.to_vec();
    for _ in 0..n {
        let covered: Vec<usize> = (0..out.len()).filter(|&i| lex.contains(&out[i])).collect();
        let Some(&src) = covered.choose(rng) else {
            break;
        };
        let syn = synonym_tokens(lex.get(&out[src]).unwrap(), rng);
        let at = rng.random_range(0..=out.len());
        out.splice(at..at, syn);
    }
    out
}

/// `n` times: swaps two distinct random positions.
pub fn random_swap<R: Rng + ?Sized>(tokens: &[String], n: usize, rng: &mut R) -> Vec<String> {
    let mut out = tokens.to_vec();
    if out.len() < 2 {
        return out;
    }
    for _ in 0..n {
        let i = rng.random_range(0..out.len());
        let mut j = rng.random_range(0..out.len() - 1);
        if j >= i {
            j += 1;
        }
        out.swap(i, j);
    }
    out
}

/// Drops each token with probability `p`; if every token would go, keeps
/// one chosen uniformly.
pub fn random_deletion<R: Rng + ?Sized>(tokens: &[String], p: f64, rng: &mut R) -> Vec<String> {
    if tokens.len() <= 1 {
        return tokens.to_vec();
    }
    let out: Vec<String> = tokens
        .iter()
        .filter(|_| rng.random::<f64>() >= p)
        .cloned()
        .collect();
    if out.is_empty() {
        return vec![tokens[rng.random_range(0..tokens.len())].clone()];
    }
    out
}

/// Number of tokens each counted operation touches: `max(1, round(alpha * len))`.
pub fn change_count(alpha: f64, len: usize) -> usize {
    ((alpha * len as f64).round() as usize).max(1)
}

/// All four operations in sequence: replacement, insertion, swap, deletion.
pub fn eda<R: Rng + ?Sized>(
    tokens: &[String],
    alpha: f64,
    lex: &SynonymLexicon,
    rng: &mut R,
) -> Vec<String> {
    if tokens.is_empty() {
        return Vec::new();
    }
    let n = change_count(alpha, tokens.len());
    let out = synonym_replacement(tokens, n, lex, rng);
    let out = random_insertion(&out, n, lex, rng);
    let out = random_swap(&out, n, rng);
    random_deletion(&out, alpha, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|x| x.to_string()).collect()
    }

    fn lex() -> SynonymLexicon {
        SynonymLexicon::from_entries([
            ("film", vec!["movie", "picture"]),
            ("routine", vec!["everyday"]),
            ("the", vec!["thee"]),
            ("good", vec!["fine", "very good"]),
        ])
    }

    fn is_subsequence(sub: &[String], full: &[String]) -> bool {
        let mut it = full.iter();
        sub.iter().all(|s| it.any(|f| f == s))
    }

    #[test]
    fn swap_two_tokens() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(random_swap(&v(&["a", "b"]), 1, &mut rng), v(&["b", "a"]));
    }

    #[test]
    fn deletion_keeps_single_token() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for p in [0.0, 0.5, 0.99, 1.0] {
            assert_eq!(random_deletion(&v(&["a"]), p, &mut rng), v(&["a"]));
        }
        let out = random_deletion(&v(&["a", "b", "c"]), 1.0, &mut rng);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn replacement_skips_stopwords_and_unknowns() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let toks = v(&["the", "film", "is", "routine"]);
        let out = synonym_replacement(&toks, 10, &lex(), &mut rng);
        assert_eq!(out[0], "the");
        assert!(["movie", "picture"].contains(&out[1].as_str()));
        assert_eq!(out[3], "everyday");
        let none = synonym_replacement(&v(&["nothing", "here"]), 3, &lex(), &mut rng);
        assert_eq!(none, v(&["nothing", "here"]));
    }

    #[test]
    fn replacement_splits_multiword_synonyms() {
        let lex = SynonymLexicon::from_entries([("good", vec!["very good"])]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            synonym_replacement(&v(&["good", "x"]), 1, &lex, &mut rng),
            v(&["very", "good", "x"])
        );
    }

    #[test]
    fn insertion_adds_synonyms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let toks = v(&["a", "film"]);
        let out = random_insertion(&toks, 2, &lex(), &mut rng);
        assert_eq!(out.len(), 4);
        assert!(is_subsequence(&toks, &out));
        assert_eq!(random_insertion(&v(&["x"]), 3, &lex(), &mut rng), v(&["x"]));
    }

    #[test]
    fn change_count_rule() {
        assert_eq!(change_count(0.1, 3), 1);
        assert_eq!(change_count(0.1, 15), 2);
        assert_eq!(change_count(0.1, 25), 3);
    }

    proptest! {
        #[test]
        fn swap_preserves_multiset(toks in proptest::collection::vec("[a-c]{1,2}", 1..12), n in 0usize..5, seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut a = random_swap(&toks, n, &mut rng);
            let mut b = toks.clone();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn deletion_is_nonempty_subsequence(toks in proptest::collection::vec("[a-z]{1,3}", 1..12), p in 0.0f64..=1.0, seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = random_deletion(&toks, p, &mut rng);
            prop_assert!(!out.is_empty());
            prop_assert!(is_subsequence(&out, &toks));
        }
    }
}
