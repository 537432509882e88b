//! Two-stage curriculum training and a linear classifier for comparing
//! augmentation strategies end to end.

mod classifier;
mod compare;
mod schedule;

pub use classifier::{
    evaluate_classifier, featurize, softmax_cross_entropy, train_classifier,
    train_classifier_traced, EpochTrace, LinearClassifier, SparseVector, TrainConfig,
    DEFAULT_BATCH_SIZE, DEFAULT_FEATURE_BITS, DEFAULT_LEARNING_RATE,
};
pub use compare::{compare_strategies, ComparisonReport, RunResult, ScheduleSummary, NO_AUG};
pub use schedule::{
    build_schedule, CurriculumSchedule, EpochData, DEFAULT_TOTAL_EPOCHS, DEFAULT_WARMUP_EPOCHS,
};
