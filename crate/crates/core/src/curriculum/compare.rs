use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classifier::{evaluate_classifier, train_classifier, TrainConfig};
use super::schedule::CurriculumSchedule;
use crate::augment::{AugmentationConfig, Augmenter, SynonymLexicon};
use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::tagger::TaggerModel;

pub const NO_AUG: &str = "no_aug";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSummary {
    pub total_epochs: usize,
    pub warmup_epochs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub strategy: String,
    pub accuracy: f64,
    pub delta_vs_no_aug: f64,
    pub seed: u64,
    pub schedule: ScheduleSummary,
    /// Augmented examples added to the training pool.
    pub augmented_examples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub runs: Vec<RunResult>,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned plain-text table, one row per run.
    pub fn table(&self) -> String {
        let width = self
            .runs
            .iter()
            .map(|r| r.strategy.len())
            .chain(["strategy".len()])
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        writeln!(
            out,
            "{:<width$}  {:>8}  {:>8}  {:>9}",
            "strategy", "accuracy", "delta", "augmented"
        )
        .unwrap();
        for r in &self.runs {
            writeln!(
                out,
                "{:<width$}  {:>8.4}  {:>+8.4}  {:>9}",
                r.strategy, r.accuracy, r.delta_vs_no_aug, r.augmented_examples
            )
            .unwrap();
        }
        out
    }
}

struct Run<'a> {
    name: String,
    augmented: Dataset,
    schedule: &'a CurriculumSchedule,
}

/// Trains one classifier per strategy plus a no-augmentation baseline, all
/// with the same seed, and reports test accuracy. Rows keep the requested
/// order after the leading `no_aug` row.
///
/// Each strategy is run with `append_original` off; the originals are always
/// in the pool. The baseline trains on originals for every epoch.
#[allow(clippy::too_many_arguments)]
pub fn compare_strategies(
    train: &Dataset,
    test: &Dataset,
    strategies: &[AugmentationConfig],
    model: Option<&TaggerModel>,
    lex: Option<&SynonymLexicon>,
    schedule: &CurriculumSchedule,
    cfg: &TrainConfig,
) -> Result<ComparisonReport> {
    cfg.validate()?;
    if train.num_classes() != test.num_classes() || train.schema() != test.schema() {
        return Err(Error::Invalid(
            "training and test data differ in classes or schema".into(),
        ));
    }
    let baseline_schedule = CurriculumSchedule::originals_only(schedule.total_epochs())?;

    let mut runs = vec![Run {
        name: NO_AUG.to_string(),
        augmented: Dataset::empty(train.num_classes(), train.schema())?,
        schedule: &baseline_schedule,
    }];
    for s in strategies {
        let aug_cfg = AugmentationConfig {
            append_original: false,
            ..s.clone()
        };
        let augmenter = Augmenter::new(&aug_cfg, model, lex)?;
        let (augmented, stats) = augmenter.augment_dataset_with_stats(train)?;
        log::info!(
            "{}: {} inputs, {} skipped, {} augmented",
            s.strategy,
            stats.inputs,
            stats.skipped,
            stats.augmented
        );
        runs.push(Run {
            name: s.strategy.to_string(),
            augmented,
            schedule,
        });
    }

    let accuracies: Vec<f64> = runs
        .par_iter()
        .map(|run| {
            let clf = train_classifier(train, &run.augmented, run.schedule, cfg)?;
            evaluate_classifier(&clf, test)
        })
        .collect::<Result<_>>()?;

    let base = accuracies[0];
    let runs = runs
        .into_iter()
        .zip(accuracies)
        .map(|(run, accuracy)| RunResult {
            strategy: run.name,
            accuracy,
            delta_vs_no_aug: accuracy - base,
            seed: cfg.seed,
            schedule: ScheduleSummary {
                total_epochs: run.schedule.total_epochs(),
                warmup_epochs: run.schedule.warmup_epochs(),
            },
            augmented_examples: run.augmented.len(),
        })
        .collect();
    Ok(ComparisonReport { runs })
}
