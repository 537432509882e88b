//! Hashed bag-of-words softmax regression trained with minibatch SGD.

use rand::seq::SliceRandom;

use super::schedule::{CurriculumSchedule, EpochData};
use crate::corpus::{Dataset, Example};
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};
use crate::tokenizer::tokenize;

pub const DEFAULT_FEATURE_BITS: u32 = 18;
pub const DEFAULT_BATCH_SIZE: usize = 32;
pub const DEFAULT_LEARNING_RATE: f64 = 0.1;

/// Sorted `(index, count)` pairs with distinct indices.
pub type SparseVector = Vec<(usize, f64)>;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Maps a token into `[0, 2^bits)` by multiplicative hashing of its FNV-1a
/// digest.
fn bucket(token: &str, bits: u32) -> usize {
    if bits == 0 {
        return 0;
    }
    (fnv1a(token.as_bytes()).wrapping_mul(0x9e37_79b9_7f4a_7c15) >> (64 - bits)) as usize
}

fn add_counts(text: &str, bits: u32, offset: usize, out: &mut Vec<(usize, f64)>) {
    for tok in tokenize(text).iter() {
        out.push((offset + bucket(&tok.to_lowercase(), bits), 1.0));
    }
}

/// Unigram counts over `2^bits` buckets. A pair hashes `text_a` into the
/// lower half and `text_b` into the upper half.
pub fn featurize(text_a: &str, text_b: Option<&str>, bits: u32) -> SparseVector {
    let mut raw = Vec::new();
    match text_b {
        None => add_counts(text_a, bits, 0, &mut raw),
        Some(b) => {
            let half_bits = bits.saturating_sub(1);
            add_counts(text_a, half_bits, 0, &mut raw);
            add_counts(b, half_bits, 1 << half_bits, &mut raw);
        }
    }
    raw.sort_unstable_by_key(|&(i, _)| i);
    let mut out: SparseVector = Vec::with_capacity(raw.len());
    for (i, c) in raw {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc += c,
            _ => out.push((i, c)),
        }
    }
    out
}

/// Loss and logit gradient of cross-entropy between `softmax(logits)` and a
/// target distribution. The gradient is `softmax(logits) - target`.
pub fn softmax_cross_entropy(logits: &[f64], target: &[f64]) -> (f64, Vec<f64>) {
    assert_eq!(
        logits.len(),
        target.len(),
        "logits and target differ in length"
    );
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_z = max + logits.iter().map(|&z| (z - max).exp()).sum::<f64>().ln();
    let mut loss = 0.0;
    let mut grad = Vec::with_capacity(logits.len());
    for (&z, &t) in logits.iter().zip(target) {
        let log_p = z - log_z;
        if t > 0.0 {
            loss -= t * log_p;
        }
        grad.push(log_p.exp() - t);
    }
    (loss, grad)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub feature_bits: u32,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: super::DEFAULT_TOTAL_EPOCHS,
            batch_size: DEFAULT_BATCH_SIZE,
            learning_rate: DEFAULT_LEARNING_RATE,
            seed: 0,
            feature_bits: DEFAULT_FEATURE_BITS,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be positive".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(1..=30).contains(&self.feature_bits) {
            return Err(Error::Config(format!(
                "feature bits must lie in [1, 30], got {}",
                self.feature_bits
            )));
        }
        Ok(())
    }
}

/// `K × 2^bits` weights, row per class, plus a bias per class.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearClassifier {
    num_classes: usize,
    feature_bits: u32,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl LinearClassifier {
    pub fn zeros(num_classes: usize, feature_bits: u32) -> Self {
        LinearClassifier {
            num_classes,
            feature_bits,
            weights: vec![0.0; num_classes << feature_bits],
            bias: vec![0.0; num_classes],
        }
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn num_features(&self) -> usize {
        1 << self.feature_bits
    }

    pub fn feature_bits(&self) -> u32 {
        self.feature_bits
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn featurize(&self, ex: &Example) -> SparseVector {
        featurize(&ex.text_a, ex.text_b.as_deref(), self.feature_bits)
    }

    pub fn logits(&self, x: &[(usize, f64)]) -> Vec<f64> {
        let f = self.num_features();
        (0..self.num_classes)
            .map(|k| {
                let row = &self.weights[k * f..(k + 1) * f];
                self.bias[k] + x.iter().map(|&(i, v)| row[i] * v).sum::<f64>()
            })
            .collect()
    }

    /// Argmax of the logits; the lowest class index wins ties.
    pub fn predict(&self, ex: &Example) -> usize {
        argmax(&self.logits(&self.featurize(ex)))
    }

    /// One SGD step on the mean loss of `batch`. Returns that mean loss.
    fn step(&mut self, batch: &[(&SparseVector, &[f64])], lr: f64) -> f64 {
        let f = self.num_features();
        let scale = lr / batch.len() as f64;
        let grads: Vec<(f64, Vec<f64>)> = batch
            .iter()
            .map(|(x, t)| softmax_cross_entropy(&self.logits(x), t))
            .collect();
        let mut loss = 0.0;
        for ((x, _), (l, g)) in batch.iter().zip(&grads) {
            loss += l;
            for (k, &gk) in g.iter().enumerate() {
                self.bias[k] -= scale * gk;
                let row = &mut self.weights[k * f..(k + 1) * f];
                for &(i, v) in x.iter() {
                    row[i] -= scale * gk * v;
                }
            }
        }
        loss / batch.len() as f64
    }
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// What one epoch consumed.
#[derive(Clone, Debug, PartialEq)]
pub struct EpochTrace {
    pub data: EpochData,
    pub original_seen: usize,
    pub augmented_seen: usize,
    /// Mean loss of each minibatch, measured before its update.
    pub batch_losses: Vec<f64>,
}

#[derive(Clone, Copy)]
enum Source {
    Original,
    Augmented,
}

fn check_compatible(train: &Dataset, augmented: &Dataset) -> Result<()> {
    if train.num_classes() != augmented.num_classes() {
        return Err(Error::Invalid(format!(
            "augmented data has {} classes, training data has {}",
            augmented.num_classes(),
            train.num_classes()
        )));
    }
    if train.schema() != augmented.schema() {
        return Err(Error::Invalid(format!(
            "augmented data schema {} differs from training schema {}",
            augmented.schema(),
            train.schema()
        )));
    }
    Ok(())
}

pub fn train_classifier(
    train: &Dataset,
    augmented: &Dataset,
    schedule: &CurriculumSchedule,
    cfg: &TrainConfig,
) -> Result<LinearClassifier> {
    Ok(train_classifier_traced(train, augmented, schedule, cfg)?.0)
}

/// Trains and records, per epoch, how many original and augmented examples
/// were fed and the loss of every batch. `schedule` fixes the epoch count;
/// `cfg.epochs` is ignored here.
pub fn train_classifier_traced(
    train: &Dataset,
    augmented: &Dataset,
    schedule: &CurriculumSchedule,
    cfg: &TrainConfig,
) -> Result<(LinearClassifier, Vec<EpochTrace>)> {
    cfg.validate()?;
    check_compatible(train, augmented)?;
    if train.is_empty() {
        return Err(Error::Empty("training data"));
    }
    let mut clf = LinearClassifier::zeros(train.num_classes(), cfg.feature_bits);
    let encode = |ds: &Dataset| -> Vec<(SparseVector, Vec<f64>)> {
        ds.examples()
            .iter()
            .map(|ex| (clf.featurize(ex), ex.label.probs().to_vec()))
            .collect()
    };
    let orig = encode(train);
    let aug = encode(augmented);

    let mut traces = Vec::with_capacity(schedule.total_epochs());
    for (epoch, &data) in schedule.per_epoch().iter().enumerate() {
        let mut feed: Vec<(Source, usize)> =
            (0..orig.len()).map(|i| (Source::Original, i)).collect();
        if data == EpochData::OriginalPlusAugmented {
            feed.extend((0..aug.len()).map(|i| (Source::Augmented, i)));
        }
        feed.shuffle(&mut rng::stream(
            Purpose::ClassifierShuffle,
            cfg.seed,
            epoch as u64,
        ));

        let mut trace = EpochTrace {
            data,
            original_seen: 0,
            augmented_seen: 0,
            batch_losses: Vec::with_capacity(feed.len().div_ceil(cfg.batch_size)),
        };
        for chunk in feed.chunks(cfg.batch_size) {
            let batch: Vec<(&SparseVector, &[f64])> = chunk
                .iter()
                .map(|&(src, i)| {
                    let (x, t) = match src {
                        Source::Original => {
                            trace.original_seen += 1;
                            &orig[i]
                        }
                        Source::Augmented => {
                            trace.augmented_seen += 1;
                            &aug[i]
                        }
                    };
                    (x, t.as_slice())
                })
                .collect();
            trace.batch_losses.push(clf.step(&batch, cfg.learning_rate));
        }
        log::debug!(
            "epoch {} ({data}): {} original, {} augmented",
            epoch + 1,
            trace.original_seen,
            trace.augmented_seen
        );
        traces.push(trace);
    }
    Ok((clf, traces))
}

/// Fraction of `test` whose predicted class equals the label's argmax.
pub fn evaluate_classifier(clf: &LinearClassifier, test: &Dataset) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::Empty("test data"));
    }
    if test.num_classes() != clf.num_classes() {
        return Err(Error::Invalid(format!(
            "test data has {} classes, classifier has {}",
            test.num_classes(),
            clf.num_classes()
        )));
    }
    let correct = test
        .examples()
        .iter()
        .filter(|ex| clf.predict(ex) == ex.label.argmax())
        .count();
    Ok(correct as f64 / test.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Schema, SoftLabel};
    use crate::curriculum::build_schedule;

    fn ds(rows: &[(&str, usize)]) -> Dataset {
        let examples = rows
            .iter()
            .enumerate()
            .map(|(i, &(t, c))| {
                Example::single(i.to_string(), t, SoftLabel::one_hot(2, c).unwrap())
            })
            .collect();
        Dataset::new(examples, 2, Schema::Single).unwrap()
    }

    fn toy() -> Dataset {
        ds(&[
            ("good great", 1),
            ("great fun", 1),
            ("bad awful", 0),
            ("awful dull", 0),
        ])
    }

    fn small_cfg() -> TrainConfig {
        TrainConfig {
            feature_bits: 10,
            batch_size: 2,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn featurize_cases() {
        let a = featurize("Good film", None, 18);
        assert_eq!(a, featurize("good FILM", None, 18));
        assert_eq!(a.iter().map(|x| x.1).sum::<f64>(), 2.0);
        assert_eq!(featurize("a a a", None, 18), vec![(bucket("a", 18), 3.0)]);
        assert!(featurize("", None, 18).is_empty());
        assert!(featurize("", Some(""), 18).is_empty());
        let ab = featurize("cat", Some("dog"), 18);
        let ba = featurize("dog", Some("cat"), 18);
        assert_ne!(ab, ba);
        let half = 1 << 17;
        assert!(ab[0].0 < half && ab[1].0 >= half);
    }

    #[test]
    fn separable_data_is_fit() {
        let train = toy();
        let empty = Dataset::empty(2, Schema::Single).unwrap();
        let schedule = build_schedule(50, 50).unwrap();
        let clf = train_classifier(&train, &empty, &schedule, &small_cfg()).unwrap();
        assert_eq!(evaluate_classifier(&clf, &train).unwrap(), 1.0);
    }

    #[test]
    fn loss_decreases_in_first_epoch() {
        let rows: Vec<(String, usize)> = (0..64)
            .map(|i| {
                if i % 2 == 0 {
                    (format!("good great w{i}"), 1)
                } else {
                    (format!("bad awful w{i}"), 0)
                }
            })
            .collect();
        let refs: Vec<(&str, usize)> = rows.iter().map(|(t, c)| (t.as_str(), *c)).collect();
        let train = ds(&refs);
        let empty = Dataset::empty(2, Schema::Single).unwrap();
        let cfg = TrainConfig {
            batch_size: 4,
            ..small_cfg()
        };
        let (_, trace) =
            train_classifier_traced(&train, &empty, &build_schedule(1, 1).unwrap(), &cfg).unwrap();
        let losses = &trace[0].batch_losses;
        assert_eq!(losses.len(), 16);
        assert!((losses[0] - 2f64.ln()).abs() < 1e-12);
        assert!(losses.last().unwrap() < &losses[0]);
    }

    #[test]
    fn full_warmup_ignores_augmented_data() {
        let train = toy();
        let aug = ds(&[("good awful", 0), ("bad great", 1)]);
        let none = Dataset::empty(2, Schema::Single).unwrap();
        let schedule = build_schedule(3, 3).unwrap();
        let a = train_classifier(&train, &aug, &schedule, &small_cfg()).unwrap();
        let b = train_classifier(&train, &none, &schedule, &small_cfg()).unwrap();
        assert_eq!(a, b);
        let c = train_classifier(&train, &aug, &schedule, &small_cfg()).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn traced_counts_follow_schedule() {
        let train = toy();
        let aug = ds(&[("good", 1), ("bad", 0), ("dull", 0)]);
        let (_, trace) =
            train_classifier_traced(&train, &aug, &CurriculumSchedule::default(), &small_cfg())
                .unwrap();
        let counts: Vec<(usize, usize)> = trace
            .iter()
            .map(|t| (t.original_seen, t.augmented_seen))
            .collect();
        assert_eq!(counts, [(4, 0), (4, 0), (4, 3), (4, 3), (4, 3)]);
    }

    #[test]
    fn mismatched_classes_rejected() {
        let train = toy();
        let aug = Dataset::empty(3, Schema::Single).unwrap();
        assert!(
            train_classifier(&train, &aug, &CurriculumSchedule::default(), &small_cfg()).is_err()
        );
    }

    #[test]
    fn accuracy_definition() {
        let clf = LinearClassifier::zeros(2, 4);
        // The zero model predicts class 0 everywhere.
        assert_eq!(
            evaluate_classifier(&clf, &ds(&[("a", 0), ("b", 1)])).unwrap(),
            0.5
        );
        assert_eq!(
            evaluate_classifier(&clf, &ds(&[("a", 0), ("b", 0), ("c", 0), ("d", 1)])).unwrap(),
            0.75
        );
        assert_eq!(evaluate_classifier(&clf, &ds(&[("a", 0)])).unwrap(), 1.0);
        assert!(evaluate_classifier(&clf, &Dataset::empty(2, Schema::Single).unwrap()).is_err());
    }

    #[test]
    fn cross_entropy_values() {
        let (loss, grad) = softmax_cross_entropy(&[0.0, 0.0], &[1.0, 0.0]);
        assert!((loss - 2f64.ln()).abs() < 1e-15);
        assert_eq!(grad, [-0.5, 0.5]);
        let (loss, _) = softmax_cross_entropy(&[1000.0, 0.0], &[1.0, 0.0]);
        assert!(loss.abs() < 1e-12);
    }
}
