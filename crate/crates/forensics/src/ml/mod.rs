//! Model training and evaluation machinery: feature matrices, scaling,
//! temporal splits, logistic regression, random forests, ensembles,
//! importance analysis, and feature refinement.

pub mod ensemble;
pub mod forest;
pub mod importance;
pub mod logistic;
pub mod matrix;
pub mod persist;
pub mod refine;
pub mod scale;
pub mod split;
pub mod tree;

pub use ensemble::{ensemble_predict, EnsembleRule, EnsembleSpec};
pub use forest::{train_random_forest, tree_votes, ForestConfig, ForestModel};
pub use importance::{importance_report, ImportanceConfig, ImportanceReport};
pub use logistic::{train_logistic, LogisticConfig, LogisticModel};
pub use matrix::{tx_matrix, wallet_matrix, FeatureMatrix};
pub use refine::{refine_features, RefinePolicy, RefineSelection};
pub use scale::{scale_min_max, MinMaxScaler};
pub use split::{temporal_split, SplitSpec};
pub use tree::{DecisionTree, MaxFeatures, TreeConfig};

use crate::domain::ClassLabel;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MlError {
    #[error("cannot fit on an empty row set")]
    EmptyFit,
    #[error("training set contains a single class")]
    SingleClassTrainingSet,
    #[error("operation requires a different model kind")]
    WrongModelKind,
    #[error("feature mismatch: {0}")]
    FeatureMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("ensembles take 2 or 3 members, got {0}")]
    MemberCount(usize),
    #[error("unknown feature {0}")]
    UnknownFeature(String),
}

/// A fitted classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrainedModel {
    Logistic(LogisticModel),
    Forest(ForestModel),
}

impl TrainedModel {
    pub fn kind_name(&self) -> &'static str {
        match self {
            TrainedModel::Logistic(_) => "LR",
            TrainedModel::Forest(_) => "RF",
        }
    }

    pub fn feature_names(&self) -> &[String] {
        match self {
            TrainedModel::Logistic(m) => &m.feature_names,
            TrainedModel::Forest(m) => &m.feature_names,
        }
    }

    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<ClassLabel>, MlError> {
        match self {
            TrainedModel::Logistic(model) => model.predict(m),
            TrainedModel::Forest(model) => model.predict(m),
        }
    }

    /// Illicit score of one row: vote share for forests, probability for
    /// logistic models.
    pub fn illicit_score(&self, row: &[f64]) -> f64 {
        match self {
            TrainedModel::Logistic(model) => model.probability(row),
            TrainedModel::Forest(model) => model.vote_share(row),
        }
    }

    pub fn as_forest(&self) -> Result<&ForestModel, MlError> {
        match self {
            TrainedModel::Forest(m) => Ok(m),
            _ => Err(MlError::WrongModelKind),
        }
    }
}
