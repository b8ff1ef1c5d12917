//! Ensembles of two or three classifiers.
//!
//! The default combination rule is conjunction voting: a row is illicit only
//! when every member says so. That trades recall for precision and
//! guarantees the ensemble's positive set is contained in every member's.

use crate::domain::ClassLabel;
use crate::ml::{FeatureMatrix, MlError, TrainedModel};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum EnsembleRule {
    #[default]
    Conjunction,
    Majority,
    Disjunction,
}

#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    pub members: Vec<TrainedModel>,
    pub rule: EnsembleRule,
}

impl EnsembleSpec {
    /// Builds a spec over 2 or 3 members trained on identical feature sets.
    pub fn new(members: Vec<TrainedModel>, rule: EnsembleRule) -> Result<Self, MlError> {
        if !(2..=3).contains(&members.len()) {
            return Err(MlError::MemberCount(members.len()));
        }
        let first = members[0].feature_names();
        if members.iter().any(|m| m.feature_names() != first) {
            return Err(MlError::FeatureMismatch(
                "ensemble members must share one feature set".into(),
            ));
        }
        Ok(EnsembleSpec { members, rule })
    }

    pub fn name(&self) -> String {
        self.members
            .iter()
            .map(|m| m.kind_name())
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Combines member label votes under the spec's rule.
pub fn combine_votes(rule: EnsembleRule, votes: &[ClassLabel]) -> ClassLabel {
    let illicit = votes.iter().filter(|v| **v == ClassLabel::Illicit).count();
    let is_illicit = match rule {
        EnsembleRule::Conjunction => illicit == votes.len(),
        EnsembleRule::Majority => 2 * illicit > votes.len(),
        EnsembleRule::Disjunction => illicit >= 1,
    };
    if is_illicit {
        ClassLabel::Illicit
    } else {
        ClassLabel::Licit
    }
}

/// Predicts every row of `m` with the ensemble.
pub fn ensemble_predict(
    spec: &EnsembleSpec,
    m: &FeatureMatrix,
) -> Result<Vec<ClassLabel>, MlError> {
    let member_predictions: Vec<Vec<ClassLabel>> = spec
        .members
        .iter()
        .map(|member| member.predict(m))
        .collect::<Result<_, _>>()?;
    Ok((0..m.n_rows())
        .map(|i| {
            let votes: Vec<ClassLabel> =
                member_predictions.iter().map(|p| p[i]).collect();
            combine_votes(spec.rule, &votes)
        })
        .collect())
}
