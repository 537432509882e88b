use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOTAL_EPOCHS: usize = 5;
pub const DEFAULT_WARMUP_EPOCHS: usize = 2;

/// The data fed to the classifier in one epoch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EpochData {
    OriginalOnly,
    OriginalPlusAugmented,
}

impl fmt::Display for EpochData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpochData::OriginalOnly => "original_only",
            EpochData::OriginalPlusAugmented => "original_plus_augmented",
        })
    }
}

/// Two-stage schedule: `warmup_epochs` on originals, then originals pooled
/// with augmentations for the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurriculumSchedule {
    total_epochs: usize,
    warmup_epochs: usize,
    per_epoch: Vec<EpochData>,
}

impl CurriculumSchedule {
    pub fn total_epochs(&self) -> usize {
        self.total_epochs
    }

    pub fn warmup_epochs(&self) -> usize {
        self.warmup_epochs
    }

    pub fn per_epoch(&self) -> &[EpochData] {
        &self.per_epoch
    }

    /// Every epoch on originals only.
    pub fn originals_only(total_epochs: usize) -> Result<Self> {
        build_schedule(total_epochs, total_epochs)
    }
}

impl Default for CurriculumSchedule {
    fn default() -> Self {
        build_schedule(DEFAULT_TOTAL_EPOCHS, DEFAULT_WARMUP_EPOCHS).unwrap()
    }
}

pub fn build_schedule(total_epochs: usize, warmup_epochs: usize) -> Result<CurriculumSchedule> {
    if total_epochs == 0 {
        return Err(Error::Config("epochs must be positive".into()));
    }
    if warmup_epochs > total_epochs {
        return Err(Error::Config(format!(
            "warmup epochs ({warmup_epochs}) exceed total epochs ({total_epochs})"
        )));
    }
    let per_epoch = (0..total_epochs)
        .map(|e| {
            if e < warmup_epochs {
                EpochData::OriginalOnly
            } else {
                EpochData::OriginalPlusAugmented
            }
        })
        .collect();
    Ok(CurriculumSchedule {
        total_epochs,
        warmup_epochs,
        per_epoch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use EpochData::*;

    #[test]
    fn default_schedule() {
        let s = build_schedule(5, 2).unwrap();
        assert_eq!(
            s.per_epoch(),
            [
                OriginalOnly,
                OriginalOnly,
                OriginalPlusAugmented,
                OriginalPlusAugmented,
                OriginalPlusAugmented
            ]
        );
        assert_eq!(s, CurriculumSchedule::default());
    }

    #[test]
    fn degenerate_schedules() {
        assert!(build_schedule(5, 0)
            .unwrap()
            .per_epoch()
            .iter()
            .all(|&e| e == OriginalPlusAugmented));
        assert!(build_schedule(3, 3)
            .unwrap()
            .per_epoch()
            .iter()
            .all(|&e| e == OriginalOnly));
        assert!(build_schedule(5, 6).is_err());
        assert!(build_schedule(0, 0).is_err());
    }

    #[test]
    fn serializes_snake_case() {
        let json = serde_json::to_string(&build_schedule(2, 1).unwrap()).unwrap();
        assert_eq!(
            json,
            r#"{"total_epochs":2,"warmup_epochs":1,"per_epoch":["original_only","original_plus_augmented"]}"#
        );
    }
}
