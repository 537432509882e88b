//! Augmentation strategies over [`Example`]s.
//!
//! `adverb_delete` tags each sentence and removes the ADV tokens, skipping
//! sentences that have none. The baselines are EDA (all four token
//! operations in sequence), AEDA (punctuation insertion) and softEDA (EDA
//! text with a label-smoothed target).

mod adverb;
mod aeda;
mod eda;
mod lexicon;
mod stopwords;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

pub use adverb::{adverb_delete, delete_adverbs, AdverbDeletion, NEGATION_ADVERBS};
pub use aeda::{aeda_insert, max_marks, AEDA_MARKS};
pub use eda::{
    change_count, eda, random_deletion, random_insertion, random_swap, synonym_replacement,
};
pub use lexicon::SynonymLexicon;
pub use stopwords::{is_stopword, STOPWORDS};

use crate::corpus::{Dataset, Example, Provenance, SoftLabel};
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};
use crate::tagger::TaggerModel;
use crate::tokenizer::{detokenize, tokenize};

pub const DEFAULT_SOFTEDA_ALPHA: f64 = 0.2;
pub const DEFAULT_EDA_ALPHA: f64 = 0.1;
pub const DEFAULT_AEDA_RATIO: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    AdverbDelete,
    Eda,
    Aeda,
    SoftEda,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::AdverbDelete,
        Strategy::Eda,
        Strategy::Aeda,
        Strategy::SoftEda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::AdverbDelete => "adverb_delete",
            Strategy::Eda => "eda",
            Strategy::Aeda => "aeda",
            Strategy::SoftEda => "softeda",
        }
    }

    pub fn needs_lexicon(self) -> bool {
        matches!(self, Strategy::Eda | Strategy::SoftEda)
    }

    pub fn needs_tagger(self) -> bool {
        self == Strategy::AdverbDelete
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Strategy::ALL.iter().map(|s| s.name()).collect();
                Error::Config(format!(
                    "unknown strategy {s:?}; valid: {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AugmentationConfig {
    pub strategy: Strategy,
    pub seed: u64,
    /// Augmented copies per original.
    pub n_aug: usize,
    /// Smoothing mass for softEDA labels, in `[0, 1)`.
    pub softeda_alpha: f64,
    /// Per-operation change rate for EDA, in `(0, 1)`.
    pub eda_alpha: f64,
    /// Upper bound on inserted marks per token for AEDA, in `(0, 1]`.
    pub aeda_ratio: f64,
    pub append_original: bool,
    /// Keep "not", "n't" and "never" when deleting adverbs.
    pub preserve_negation: bool,
}

impl AugmentationConfig {
    pub fn new(strategy: Strategy) -> Self {
        AugmentationConfig {
            strategy,
            seed: 0,
            n_aug: 1,
            softeda_alpha: DEFAULT_SOFTEDA_ALPHA,
            eda_alpha: DEFAULT_EDA_ALPHA,
            aeda_ratio: DEFAULT_AEDA_RATIO,
            append_original: true,
            preserve_negation: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_aug == 0 {
            return Err(Error::Config("n_aug must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.softeda_alpha) {
            return Err(Error::Config(format!(
                "softeda alpha must lie in [0, 1), got {}",
                self.softeda_alpha
            )));
        }
        if !(self.eda_alpha > 0.0 && self.eda_alpha < 1.0) {
            return Err(Error::Config(format!(
                "eda alpha must lie in (0, 1), got {}",
                self.eda_alpha
            )));
        }
        if !(self.aeda_ratio > 0.0 && self.aeda_ratio <= 1.0) {
            return Err(Error::Config(format!(
                "aeda ratio must lie in (0, 1], got {}",
                self.aeda_ratio
            )));
        }
        Ok(())
    }
}

/// `(1 - alpha) * onehot + alpha / K`.
pub fn soft_label(onehot: &SoftLabel, alpha: f64, num_classes: usize) -> Result<SoftLabel> {
    if onehot.num_classes() != num_classes {
        return Err(Error::Invalid(format!(
            "label has {} classes, expected {num_classes}",
            onehot.num_classes()
        )));
    }
    if onehot.hot_class().is_none() {
        return Err(Error::Invalid("soft_label expects a one-hot label".into()));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Config(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    let uniform = alpha / num_classes as f64;
    let probs = onehot
        .probs()
        .iter()
        .map(|&p| (1.0 - alpha) * p + uniform)
        .collect();
    SoftLabel::new(probs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedExample {
    pub source_id: String,
    pub text_a: String,
    pub text_b: Option<String>,
    pub label: SoftLabel,
    pub provenance: Provenance,
}

impl AugmentedExample {
    fn original(ex: &Example) -> Self {
        AugmentedExample {
            source_id: ex.id.clone(),
            text_a: ex.text_a.clone(),
            text_b: ex.text_b.clone(),
            label: ex.label.clone(),
            provenance: Provenance::Original,
        }
    }

    /// Converts to a dataset record. Originals keep the source id; the
    /// `copy`-th augmentation (1-based) becomes `<source>-aug<copy>`.
    pub fn into_example(self, copy: usize) -> Example {
        let id = match self.provenance {
            Provenance::Original => self.source_id,
            Provenance::Augmented => format!("{}-aug{copy}", self.source_id),
        };
        Example {
            id,
            text_a: self.text_a,
            text_b: self.text_b,
            label: self.label,
            provenance: Some(self.provenance),
        }
    }
}

/// Counts reported by [`Augmenter::augment_dataset_with_stats`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AugmentStats {
    pub inputs: usize,
    /// Inputs skipped because no adverb was found.
    pub skipped: usize,
    /// Inputs dropped because deleting their adverbs left an empty text.
    pub emptied: usize,
    pub augmented: usize,
    /// Records in the output, originals included.
    pub emitted: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Augmented,
    Skipped,
    Emptied,
}

/// A validated configuration bound to the resources its strategy needs.
#[derive(Clone, Copy, Debug)]
pub struct Augmenter<'a> {
    cfg: &'a AugmentationConfig,
    model: Option<&'a TaggerModel>,
    lexicon: Option<&'a SynonymLexicon>,
    copies: usize,
}

impl<'a> Augmenter<'a> {
    pub fn new(
        cfg: &'a AugmentationConfig,
        model: Option<&'a TaggerModel>,
        lexicon: Option<&'a SynonymLexicon>,
    ) -> Result<Self> {
        cfg.validate()?;
        if cfg.strategy.needs_lexicon() && lexicon.is_none() {
            return Err(Error::Config(format!(
                "{} requires a synonym lexicon",
                cfg.strategy
            )));
        }
        if cfg.strategy.needs_tagger() && model.is_none() {
            return Err(Error::Config(format!(
                "{} requires a tagger model",
                cfg.strategy
            )));
        }
        let copies = if cfg.strategy == Strategy::AdverbDelete && cfg.n_aug > 1 {
            log::warn!(
                "adverb_delete is deterministic; n_aug={} clamped to 1",
                cfg.n_aug
            );
            1
        } else {
            cfg.n_aug
        };
        Ok(Augmenter {
            cfg,
            model,
            lexicon,
            copies,
        })
    }

    pub fn config(&self) -> &AugmentationConfig {
        self.cfg
    }

    /// Copies produced per input after clamping.
    pub fn copies(&self) -> usize {
        self.copies
    }

    fn transform_text<R: Rng + ?Sized>(&self, text: &str, rng: &mut R) -> String {
        let tokens = tokenize(text).into_inner();
        let out = match self.cfg.strategy {
            Strategy::Eda | Strategy::SoftEda => {
                eda(&tokens, self.cfg.eda_alpha, self.lexicon.unwrap(), rng)
            }
            Strategy::Aeda => aeda_insert(&tokens, self.cfg.aeda_ratio, rng),
            Strategy::AdverbDelete => unreachable!("adverb deletion has its own path"),
        };
        detokenize(&out)
    }

    fn delete(&self, text: &str) -> Option<String> {
        delete_adverbs(self.model.unwrap(), text, self.cfg.preserve_negation).map(|d| d.text())
    }

    /// Augments one example; `index` selects its random stream.
    pub fn augment_example(&self, ex: &Example, index: usize) -> Result<Vec<AugmentedExample>> {
        Ok(self.augment_one(ex, index)?.0)
    }

    fn augment_one(&self, ex: &Example, index: usize) -> Result<(Vec<AugmentedExample>, Outcome)> {
        let mut outcome = Outcome::Augmented;
        let mut out = Vec::with_capacity(1 + self.copies);
        if self.cfg.append_original {
            out.push(AugmentedExample::original(ex));
        }
        let num_classes = ex.label.num_classes();
        match self.cfg.strategy {
            Strategy::AdverbDelete => {
                let a = self.delete(&ex.text_a);
                let b = ex.text_b.as_deref().map(|t| self.delete(t));
                let any = a.is_some() || b.as_ref().is_some_and(Option::is_some);
                // A side made only of adverbs would become empty text.
                let emptied = a.as_deref().is_some_and(str::is_empty)
                    || b.as_ref()
                        .is_some_and(|b| b.as_deref().is_some_and(str::is_empty));
                if !any {
                    outcome = Outcome::Skipped;
                } else if emptied {
                    outcome = Outcome::Emptied;
                } else {
                    out.push(AugmentedExample {
                        source_id: ex.id.clone(),
                        text_a: a.unwrap_or_else(|| ex.text_a.clone()),
                        text_b: match (b, &ex.text_b) {
                            (Some(Some(t)), _) => Some(t),
                            (_, orig) => orig.clone(),
                        },
                        label: ex.label.clone(),
                        provenance: Provenance::Augmented,
                    });
                }
            }
            strategy => {
                let mut rng = rng::stream(Purpose::Augment, self.cfg.seed, index as u64);
                let label = if strategy == Strategy::SoftEda {
                    soft_label(&ex.label, self.cfg.softeda_alpha, num_classes)?
                } else {
                    ex.label.clone()
                };
                for _ in 0..self.copies {
                    let text_a = self.transform_text(&ex.text_a, &mut rng);
                    let text_b = ex
                        .text_b
                        .as_deref()
                        .map(|t| self.transform_text(t, &mut rng));
                    out.push(AugmentedExample {
                        source_id: ex.id.clone(),
                        text_a,
                        text_b,
                        label: label.clone(),
                        provenance: Provenance::Augmented,
                    });
                }
            }
        }
        Ok((out, outcome))
    }

    pub fn augment_dataset(&self, ds: &Dataset) -> Result<Dataset> {
        Ok(self.augment_dataset_with_stats(ds)?.0)
    }

    /// Augments every example, in parallel. Output order and content do not
    /// depend on scheduling: each example draws from its own random stream.
    pub fn augment_dataset_with_stats(&self, ds: &Dataset) -> Result<(Dataset, AugmentStats)> {
        let per_example: Vec<_> = ds
            .examples()
            .par_iter()
            .enumerate()
            .map(|(i, ex)| self.augment_one(ex, i))
            .collect();
        self.collect(ds, per_example)
    }

    /// Single-threaded equivalent of [`Self::augment_dataset_with_stats`].
    pub fn augment_dataset_sequential(&self, ds: &Dataset) -> Result<(Dataset, AugmentStats)> {
        let per_example: Vec<_> = ds
            .examples()
            .iter()
            .enumerate()
            .map(|(i, ex)| self.augment_one(ex, i))
            .collect();
        self.collect(ds, per_example)
    }

    fn collect(
        &self,
        ds: &Dataset,
        per_example: Vec<Result<(Vec<AugmentedExample>, Outcome)>>,
    ) -> Result<(Dataset, AugmentStats)> {
        let mut stats = AugmentStats {
            inputs: ds.len(),
            ..AugmentStats::default()
        };
        let mut examples = Vec::new();
        for group in per_example {
            let (group, outcome) = group?;
            let mut copy = 0;
            let mut produced = 0;
            for aug in group {
                if aug.provenance == Provenance::Augmented {
                    copy += 1;
                    produced += 1;
                }
                examples.push(aug.into_example(copy));
            }
            match outcome {
                Outcome::Skipped => stats.skipped += 1,
                Outcome::Emptied => stats.emptied += 1,
                Outcome::Augmented => {}
            }
            stats.augmented += produced;
        }
        stats.emitted = examples.len();
        Ok((
            Dataset::new(examples, ds.num_classes(), ds.schema())?,
            stats,
        ))
    }
}

pub fn augment_example(
    model: Option<&TaggerModel>,
    ex: &Example,
    cfg: &AugmentationConfig,
    lex: Option<&SynonymLexicon>,
    index: usize,
) -> Result<Vec<AugmentedExample>> {
    Augmenter::new(cfg, model, lex)?.augment_example(ex, index)
}

pub fn augment_dataset(
    model: Option<&TaggerModel>,
    ds: &Dataset,
    cfg: &AugmentationConfig,
    lex: Option<&SynonymLexicon>,
) -> Result<Dataset> {
    Augmenter::new(cfg, model, lex)?.augment_dataset(ds)
}
