//! Random forest: bootstrapped gini trees with per-tree seeded randomness.

use crate::domain::ClassLabel;
use crate::ml::tree::{DecisionTree, TreeConfig};
use crate::ml::{FeatureMatrix, MlError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub estimators: usize,
    pub bootstrap: bool,
    pub seed: u64,
    pub tree: TreeConfig,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            estimators: 50,
            bootstrap: true,
            seed: 0,
            tree: TreeConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub feature_names: Vec<String>,
    pub trees: Vec<DecisionTree>,
    pub config: ForestConfig,
    /// Mean of the per-tree normalized impurity importances; sums to 1
    /// whenever any tree split.
    pub impurity_importance: Vec<f64>,
}

/// Stateless mixer used to derive independent per-tree seeds from the
/// master seed, so results do not depend on the worker count.
pub(crate) fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn signed_labels(m: &FeatureMatrix) -> Result<Vec<u8>, MlError> {
    let y: Vec<u8> = m
        .labels()
        .iter()
        .map(|l| u8::from(*l == ClassLabel::Illicit))
        .collect();
    let pos: usize = y.iter().map(|&v| v as usize).sum();
    if pos == 0 || pos == y.len() {
        return Err(MlError::SingleClassTrainingSet);
    }
    Ok(y)
}

/// Trains `estimators` trees in parallel. Each tree draws its bootstrap
/// sample and split candidates from a generator seeded by (master seed,
/// tree index), so the forest is bit-identical at any worker count.
pub fn train_random_forest(
    train: &FeatureMatrix,
    config: ForestConfig,
) -> Result<ForestModel, MlError> {
    if train.n_rows() == 0 {
        return Err(MlError::EmptyFit);
    }
    let y = signed_labels(train)?;
    let n = train.n_rows();
    let trees: Vec<DecisionTree> = (0..config.estimators)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(config.seed, i as u64 + 1));
            let rows: Vec<usize> = if config.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            DecisionTree::fit(train, &rows, &y, &config.tree, &mut rng)
        })
        .collect();

    let d = train.n_cols();
    let mut importance = vec![0.0; d];
    let mut contributing = 0usize;
    for tree in &trees {
        let total: f64 = tree.importance.iter().sum();
        if total > 0.0 {
            contributing += 1;
            for (acc, v) in importance.iter_mut().zip(&tree.importance) {
                *acc += v / total;
            }
        }
    }
    if contributing > 0 {
        for v in &mut importance {
            *v /= contributing as f64;
        }
    }
    Ok(ForestModel {
        feature_names: train.feature_names().to_vec(),
        trees,
        config,
        impurity_importance: importance,
    })
}

impl ForestModel {
    fn check_features(&self, m: &FeatureMatrix) -> Result<(), MlError> {
        if m.feature_names() != self.feature_names.as_slice() {
            return Err(MlError::FeatureMismatch(
                "prediction requires the training feature set".into(),
            ));
        }
        Ok(())
    }

    /// Trees voting illicit on one row.
    pub fn illicit_votes(&self, row: &[f64]) -> u32 {
        self.trees
            .iter()
            .map(|t| t.predict_row(row) as u32)
            .sum()
    }

    /// Fraction of trees voting illicit.
    pub fn vote_share(&self, row: &[f64]) -> f64 {
        self.illicit_votes(row) as f64 / self.trees.len() as f64
    }

    pub fn predict_row(&self, row: &[f64]) -> ClassLabel {
        if 2 * self.illicit_votes(row) as usize > self.trees.len() {
            ClassLabel::Illicit
        } else {
            ClassLabel::Licit
        }
    }

    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<ClassLabel>, MlError> {
        self.check_features(m)?;
        Ok((0..m.n_rows()).map(|i| self.predict_row(m.row(i))).collect())
    }
}

/// Cumulative illicit votes after each of the forest's trees, in training
/// order. The sequence is non-decreasing and its final value is the number
/// of trees predicting illicit.
pub fn tree_votes(model: &ForestModel, row: &[f64]) -> Vec<u32> {
    let mut total = 0;
    model
        .trees
        .iter()
        .map(|t| {
            total += t.predict_row(row) as u32;
            total
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::TimeStep;
    use crate::ml::tree::MaxFeatures;

    fn matrix(rows: &[(&[f64], ClassLabel)]) -> FeatureMatrix {
        let cols = rows[0].0.len();
        FeatureMatrix::new(
            (0..rows.len()).map(|i| format!("r{i}")).collect(),
            (0..cols).map(|i| format!("f{i}")).collect(),
            rows.iter().flat_map(|(v, _)| v.iter().copied()).collect(),
            rows.iter().map(|(_, c)| *c).collect(),
            vec![TimeStep(1); rows.len()],
        )
        .unwrap()
    }

    fn xor_matrix() -> FeatureMatrix {
        matrix(&[
            (&[0.0, 0.0], ClassLabel::Licit),
            (&[0.0, 1.0], ClassLabel::Illicit),
            (&[1.0, 0.0], ClassLabel::Illicit),
            (&[1.0, 1.0], ClassLabel::Licit),
        ])
    }

    fn small_config(seed: u64) -> ForestConfig {
        ForestConfig {
            estimators: 25,
            seed,
            bootstrap: false,
            tree: TreeConfig {
                max_features: MaxFeatures::All,
                ..TreeConfig::default()
            },
            ..ForestConfig::default()
        }
    }

    #[test]
    fn forest_memorizes_the_xor_toy_set() {
        let m = xor_matrix();
        let model = train_random_forest(&m, small_config(3)).unwrap();
        assert_eq!(model.predict(&m).unwrap(), m.labels());
    }

    #[test]
    fn same_seed_gives_identical_forests() {
        let m = xor_matrix();
        let a = train_random_forest(&m, ForestConfig { seed: 11, ..Default::default() }).unwrap();
        let b = train_random_forest(&m, ForestConfig { seed: 11, ..Default::default() }).unwrap();
        assert_eq!(a, b);
        let c = train_random_forest(&m, ForestConfig { seed: 12, ..Default::default() }).unwrap();
        assert_ne!(a.trees, c.trees);
    }

    #[test]
    fn tree_count_matches_the_configuration() {
        let m = xor_matrix();
        let model = train_random_forest(&m, ForestConfig { estimators: 7, seed: 1, ..Default::default() })
            .unwrap();
        assert_eq!(model.trees.len(), 7);
    }

    #[test]
    fn cumulative_votes_are_monotone_and_match_a_per_tree_loop() {
        let m = xor_matrix();
        let model = train_random_forest(&m, small_config(5)).unwrap();
        for i in 0..m.n_rows() {
            let votes = tree_votes(&model, m.row(i));
            assert_eq!(votes.len(), model.trees.len());
            for pair in votes.windows(2) {
                assert!(pair[1] >= pair[0] && pair[1] - pair[0] <= 1);
            }
            let by_loop: u32 = model.trees.iter().map(|t| t.predict_row(m.row(i)) as u32).sum();
            assert_eq!(*votes.last().unwrap(), by_loop);
            assert_eq!(by_loop, model.illicit_votes(m.row(i)));
        }
    }

    #[test]
    fn unanimous_rows_hit_the_extremes() {
        let m = matrix(&[
            (&[0.0], ClassLabel::Licit),
            (&[0.1], ClassLabel::Licit),
            (&[0.9], ClassLabel::Illicit),
            (&[1.0], ClassLabel::Illicit),
        ]);
        let model = train_random_forest(&m, small_config(9)).unwrap();
        let n = model.trees.len() as u32;
        let all_illicit = tree_votes(&model, &[1.0]);
        assert_eq!(*all_illicit.last().unwrap(), n);
        assert_eq!(all_illicit, (1..=n).collect::<Vec<_>>());
        let all_licit = tree_votes(&model, &[0.0]);
        assert!(all_licit.iter().all(|&v| v == 0));
    }

    #[test]
    fn impurity_importance_sums_to_one() {
        let m = xor_matrix();
        let model = train_random_forest(&m, small_config(2)).unwrap();
        let sum: f64 = model.impurity_importance.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert!(model.impurity_importance.iter().all(|&v| v >= 0.0));
    }
}
