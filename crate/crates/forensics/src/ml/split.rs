//! Temporal train/test splitting.

use crate::domain::ClassLabel;
use crate::ml::{FeatureMatrix, MlError};
use serde::{Deserialize, Serialize};

/// Inclusive time-step ranges, train strictly before test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: (u32, u32),
    pub test: (u32, u32),
}

impl SplitSpec {
    pub fn new(train: (u32, u32), test: (u32, u32)) -> Result<Self, MlError> {
        if train.0 == 0 || test.0 == 0 || train.0 > train.1 || test.0 > test.1 {
            return Err(MlError::ShapeMismatch(format!(
                "invalid step ranges {train:?} / {test:?}"
            )));
        }
        if train.1 >= test.0 {
            return Err(MlError::ShapeMismatch(
                "training steps must end before testing steps begin".into(),
            ));
        }
        Ok(SplitSpec { train, test })
    }

    /// The published configuration: steps 1-34 train, 35-49 test.
    pub fn published() -> Self {
        SplitSpec {
            train: (1, 34),
            test: (35, 49),
        }
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec::published()
    }
}

/// Partitions rows by time step. Unknown-class rows are dropped unless
/// `keep_unknown` is set; supervised runs evaluate illicit-vs-licit only.
pub fn temporal_split(
    m: &FeatureMatrix,
    spec: &SplitSpec,
    keep_unknown: bool,
) -> (FeatureMatrix, FeatureMatrix) {
    let admitted = |i: usize| keep_unknown || m.labels()[i] != ClassLabel::Unknown;
    let in_range = |i: usize, (lo, hi): (u32, u32)| {
        let s = m.steps()[i].index();
        s >= lo && s <= hi
    };
    let train_rows: Vec<usize> = (0..m.n_rows())
        .filter(|&i| admitted(i) && in_range(i, spec.train))
        .collect();
    let test_rows: Vec<usize> = (0..m.n_rows())
        .filter(|&i| admitted(i) && in_range(i, spec.test))
        .collect();
    (m.select_rows(&train_rows), m.select_rows(&test_rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::TimeStep;

    fn matrix(rows: &[(u32, ClassLabel)]) -> FeatureMatrix {
        FeatureMatrix::new(
            (0..rows.len()).map(|i| format!("r{i}")).collect(),
            vec!["x".into()],
            vec![0.0; rows.len()],
            rows.iter().map(|(_, c)| *c).collect(),
            rows.iter().map(|(s, _)| TimeStep(*s)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn boundary_steps_fall_on_the_documented_sides() {
        let m = matrix(&[(34, ClassLabel::Licit), (35, ClassLabel::Illicit)]);
        let (train, test) = temporal_split(&m, &SplitSpec::published(), false);
        assert_eq!(train.ids(), ["r0"]);
        assert_eq!(test.ids(), ["r1"]);
    }

    #[test]
    fn unknown_rows_are_excluded_from_both_sides() {
        let m = matrix(&[(10, ClassLabel::Unknown), (40, ClassLabel::Unknown)]);
        let (train, test) = temporal_split(&m, &SplitSpec::published(), false);
        assert_eq!(train.n_rows(), 0);
        assert_eq!(test.n_rows(), 0);
        let (train, test) = temporal_split(&m, &SplitSpec::published(), true);
        assert_eq!(train.n_rows() + test.n_rows(), 2);
    }

    #[test]
    fn overlapping_ranges_are_rejected() {
        assert!(SplitSpec::new((1, 35), (35, 49)).is_err());
        assert!(SplitSpec::new((1, 0), (35, 49)).is_err());
        assert!(SplitSpec::new((1, 34), (35, 49)).is_ok());
    }
}
