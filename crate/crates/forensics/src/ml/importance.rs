//! Three-way feature importance: impurity (forests), permutation, and
//! drop-column, merged into one combined rank.

use crate::domain::ClassLabel;
use crate::eval::{confusion_aligned, metrics};
use crate::ml::forest::mix_seed;
use crate::ml::{
    train_logistic, train_random_forest, FeatureMatrix, MlError, TrainedModel,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportanceConfig {
    pub permutation_repeats: usize,
    pub seed: u64,
}

impl Default for ImportanceConfig {
    fn default() -> Self {
        ImportanceConfig {
            permutation_repeats: 5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub feature_names: Vec<String>,
    /// Forest impurity importances; empty slot for logistic models.
    pub impurity: Option<Vec<f64>>,
    /// Mean F1 drop over column shuffles.
    pub permutation: Vec<f64>,
    /// F1 drop after retraining without the column.
    pub drop_column: Vec<f64>,
    /// 1 = most important; mean of the per-method ranks, ties broken by
    /// column order.
    pub combined_rank: Vec<usize>,
}

fn f1_of(pred: &[ClassLabel], truth: &[ClassLabel]) -> f64 {
    let counts = confusion_aligned(pred, truth).expect("aligned predictions");
    metrics(&counts).f1
}

fn ranks_desc(scores: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("finite scores")
            .then(a.cmp(&b))
    });
    let mut rank = vec![0.0; scores.len()];
    for (pos, &f) in order.iter().enumerate() {
        rank[f] = (pos + 1) as f64;
    }
    rank
}

fn retrain_without(
    model: &TrainedModel,
    train: &FeatureMatrix,
    column: usize,
) -> Result<TrainedModel, MlError> {
    let keep: Vec<usize> = (0..train.n_cols()).filter(|&c| c != column).collect();
    let reduced = train.select_columns(&keep);
    Ok(match model {
        TrainedModel::Logistic(m) => TrainedModel::Logistic(train_logistic(&reduced, m.config)?),
        TrainedModel::Forest(m) => TrainedModel::Forest(train_random_forest(&reduced, m.config)?),
    })
}

/// Scores every feature of the model three ways. The validation matrix
/// drives the permutation and drop-column scores; the training matrix is
/// needed for the drop-column retrains. Forest impurity importances come
/// from the fitted trees; logistic models leave that slot empty.
pub fn importance_report(
    model: &TrainedModel,
    train: &FeatureMatrix,
    validation: &FeatureMatrix,
    config: &ImportanceConfig,
) -> Result<ImportanceReport, MlError> {
    if validation.feature_names() != model.feature_names() {
        return Err(MlError::FeatureMismatch(
            "validation matrix must match the model features".into(),
        ));
    }
    let d = validation.n_cols();
    let baseline = f1_of(&model.predict(validation)?, validation.labels());

    let permutation: Vec<f64> = (0..d)
        .into_par_iter()
        .map(|col| {
            let mut drops = 0.0;
            for repeat in 0..config.permutation_repeats {
                let salt = (col * config.permutation_repeats + repeat) as u64;
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(config.seed, salt));
                let mut column = validation.column(col);
                column.shuffle(&mut rng);
                let mut shuffled = validation.clone();
                for (row, v) in column.into_iter().enumerate() {
                    shuffled.set_value(row, col, v);
                }
                let f1 = f1_of(&model.predict(&shuffled).expect("same schema"), shuffled.labels());
                drops += baseline - f1;
            }
            drops / config.permutation_repeats.max(1) as f64
        })
        .collect();

    let drop_column: Vec<f64> = (0..d)
        .into_par_iter()
        .map(|col| {
            let retrained = retrain_without(model, train, col)?;
            let keep: Vec<usize> = (0..d).filter(|&c| c != col).collect();
            let reduced_validation = validation.select_columns(&keep);
            let f1 = f1_of(
                &retrained.predict(&reduced_validation)?,
                reduced_validation.labels(),
            );
            Ok(baseline - f1)
        })
        .collect::<Result<_, MlError>>()?;

    let impurity = match model {
        TrainedModel::Forest(f) => Some(f.impurity_importance.clone()),
        TrainedModel::Logistic(_) => None,
    };

    let mut rank_sets: Vec<Vec<f64>> = vec![ranks_desc(&permutation), ranks_desc(&drop_column)];
    if let Some(imp) = &impurity {
        rank_sets.push(ranks_desc(imp));
    }
    let mean_rank: Vec<f64> = (0..d)
        .map(|f| rank_sets.iter().map(|r| r[f]).sum::<f64>() / rank_sets.len() as f64)
        .collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        mean_rank[a]
            .partial_cmp(&mean_rank[b])
            .expect("finite ranks")
            .then(a.cmp(&b))
    });
    let mut combined_rank = vec![0usize; d];
    for (pos, &f) in order.iter().enumerate() {
        combined_rank[f] = pos + 1;
    }

    Ok(ImportanceReport {
        feature_names: validation.feature_names().to_vec(),
        impurity,
        permutation,
        drop_column,
        combined_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::TimeStep;
    use crate::ml::{ForestConfig, LogisticConfig};
    use rand::Rng;

    /// 120 rows: f0 copies the label, f1 is pure noise.
    fn label_copy_matrix(seed: u64) -> FeatureMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 120;
        let mut values = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let illicit = i % 3 == 0;
            values.push(if illicit { 1.0 } else { 0.0 });
            values.push(rng.gen::<f64>());
            labels.push(if illicit { ClassLabel::Illicit } else { ClassLabel::Licit });
        }
        FeatureMatrix::new(
            (0..n).map(|i| format!("r{i}")).collect(),
            vec!["copy".into(), "noise".into()],
            values,
            labels,
            vec![TimeStep(1); n],
        )
        .unwrap()
    }

    #[test]
    fn label_copy_outranks_noise_and_noise_scores_near_zero() {
        let train = label_copy_matrix(1);
        let validation = label_copy_matrix(2);
        let model = TrainedModel::Forest(
            train_random_forest(&train, ForestConfig { estimators: 15, seed: 4, ..Default::default() })
                .unwrap(),
        );
        let report = importance_report(
            &model,
            &train,
            &validation,
            &ImportanceConfig::default(),
        )
        .unwrap();
        assert_eq!(report.combined_rank[0], 1);
        assert!(report.permutation[1].abs() < 0.01);
        assert!(report.permutation[0] > 0.5);
    }

    #[test]
    fn logistic_models_leave_the_impurity_slot_empty() {
        let train = label_copy_matrix(3);
        let model = TrainedModel::Logistic(
            train_logistic(&train, LogisticConfig::default()).unwrap(),
        );
        let report = importance_report(
            &model,
            &train,
            &train,
            &ImportanceConfig { permutation_repeats: 2, seed: 0 },
        )
        .unwrap();
        assert!(report.impurity.is_none());
        assert_eq!(report.combined_rank.len(), 2);
    }
}
