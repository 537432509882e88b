//! Averaged perceptron training.
//!
//! Weights are averaged lazily: every (feature, tag) cell remembers the step
//! at which it last changed and the running sum of its past values, so an
//! update costs O(1) regardless of how many steps have elapsed.

use std::collections::HashMap;

use rand::seq::SliceRandom;

use super::features::push_features;
use super::model::{previous_tags, TaggerModel};
use crate::corpus::TaggedCorpus;
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};
use crate::tagset::TagId;

/// Minimum number of occurrences before an unambiguous word is tagged by
/// dictionary lookup.
pub const DEFAULT_LOOKUP_MIN_COUNT: usize = 20;

#[derive(Clone, Debug)]
pub struct TrainOptions {
    pub epochs: usize,
    pub seed: u64,
    /// `None` disables the closed-class lookup table.
    pub lookup_min_count: Option<usize>,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            epochs: 5,
            seed: 0,
            lookup_min_count: Some(DEFAULT_LOOKUP_MIN_COUNT),
        }
    }
}

#[derive(Clone, Debug, Default)]
struct Cell {
    weight: f64,
    total: f64,
    stamp: u64,
}

pub(crate) struct Perceptron {
    num_tags: usize,
    cells: HashMap<String, Vec<Cell>>,
    steps: u64,
}

impl Perceptron {
    pub(crate) fn new(num_tags: usize) -> Self {
        Perceptron {
            num_tags,
            cells: HashMap::new(),
            steps: 0,
        }
    }

    fn score(&self, features: &[String], scores: &mut Vec<f64>) -> TagId {
        scores.clear();
        scores.resize(self.num_tags, 0.0);
        for f in features {
            if let Some(cells) = self.cells.get(f) {
                for (s, c) in scores.iter_mut().zip(cells) {
                    *s += c.weight;
                }
            }
        }
        super::model::argmax_first(scores)
    }

    /// Records one prediction. The averaged weight is the mean of the weight
    /// values held after each step.
    fn update(&mut self, features: &[String], gold: TagId, guess: TagId) {
        let now = self.steps;
        self.steps += 1;
        if gold == guess {
            return;
        }
        for f in features {
            let n = self.num_tags;
            let cells = self
                .cells
                .entry(f.clone())
                .or_insert_with(|| vec![Cell::default(); n]);
            for (tag, delta) in [(gold, 1.0), (guess, -1.0)] {
                let c = &mut cells[tag];
                c.total += (now - c.stamp) as f64 * c.weight;
                c.stamp = now;
                c.weight += delta;
            }
        }
    }

    fn weights(&self, averaged: bool) -> HashMap<String, Vec<f64>> {
        let steps = self.steps.max(1) as f64;
        self.cells
            .iter()
            .filter_map(|(f, cells)| {
                let ws: Vec<f64> = cells
                    .iter()
                    .map(|c| {
                        if averaged {
                            (c.total + (self.steps - c.stamp) as f64 * c.weight) / steps
                        } else {
                            c.weight
                        }
                    })
                    .collect();
                ws.iter().any(|w| *w != 0.0).then(|| (f.clone(), ws))
            })
            .collect()
    }
}

/// Words seen at least `min_count` times, always with the same tag.
fn build_lookup(corpus: &TaggedCorpus, min_count: usize) -> HashMap<String, TagId> {
    let tagset = corpus.tagset();
    let mut counts: HashMap<String, (TagId, usize, bool)> = HashMap::new();
    for s in corpus.sentences() {
        for (tok, tag) in s.tokens.iter().zip(&s.tags) {
            let id = tagset.id(tag).expect("corpus tags belong to its tagset");
            let entry = counts.entry(tok.to_lowercase()).or_insert((id, 0, true));
            entry.1 += 1;
            if entry.0 != id {
                entry.2 = false;
            }
        }
    }
    counts
        .into_iter()
        .filter(|(_, (_, n, unique))| *unique && *n >= min_count)
        .map(|(w, (t, _, _))| (w, t))
        .collect()
}

pub fn train(corpus: &TaggedCorpus, epochs: usize, seed: u64) -> Result<TaggerModel> {
    train_with(
        corpus,
        &TrainOptions {
            epochs,
            seed,
            ..TrainOptions::default()
        },
    )
}

pub fn train_with(corpus: &TaggedCorpus, opts: &TrainOptions) -> Result<TaggerModel> {
    Ok(run(corpus, opts)?.0)
}

/// Trains and returns both the averaged model and the final (unaveraged) one.
pub(crate) fn run(
    corpus: &TaggedCorpus,
    opts: &TrainOptions,
) -> Result<(TaggerModel, TaggerModel)> {
    if opts.epochs == 0 {
        return Err(Error::Config("epochs must be positive".into()));
    }
    if corpus.is_empty() {
        return Err(Error::Empty("training corpus"));
    }
    let tagset = corpus.tagset().clone();
    let lookup = opts
        .lookup_min_count
        .map(|n| build_lookup(corpus, n))
        .unwrap_or_default();
    let gold: Vec<Vec<TagId>> = corpus
        .sentences()
        .iter()
        .map(|s| s.tags.iter().map(|t| tagset.id(t).unwrap()).collect())
        .collect();

    let mut p = Perceptron::new(tagset.len());
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    let mut features = Vec::with_capacity(16);
    let mut scores = Vec::with_capacity(tagset.len());
    for epoch in 0..opts.epochs {
        order.shuffle(&mut rng::stream(
            Purpose::TaggerShuffle,
            opts.seed,
            epoch as u64,
        ));
        let mut mistakes = 0usize;
        for &si in &order {
            let tokens = &corpus.sentences()[si].tokens;
            let mut decoded: Vec<TagId> = Vec::with_capacity(tokens.len());
            for (i, tok) in tokens.iter().enumerate() {
                if let Some(&t) = lookup.get(&tok.to_lowercase()) {
                    decoded.push(t);
                    continue;
                }
                let (p1, p2) = previous_tags(&tagset, &decoded, i);
                features.clear();
                push_features(tokens, i, p1, p2, &mut features);
                let guess = p.score(&features, &mut scores);
                let g = gold[si][i];
                if guess != g {
                    mistakes += 1;
                }
                p.update(&features, g, guess);
                decoded.push(guess);
            }
        }
        log::debug!("tagger epoch {}: {mistakes} mistakes", epoch + 1);
    }

    let averaged = TaggerModel::from_parts(tagset.clone(), p.weights(true), lookup.clone());
    let last = TaggerModel::from_parts(tagset, p.weights(false), lookup);
    Ok((averaged, last))
}
