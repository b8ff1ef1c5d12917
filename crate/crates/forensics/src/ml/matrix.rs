//! Labeled feature matrix.

use crate::domain::{ClassLabel, TimeStep};
use crate::ingest::schema::{tx_feature_names, wallet_feature_names};
use crate::ingest::DatasetBundle;
use crate::ml::MlError;
use serde::{Deserialize, Serialize};

/// A rectangular matrix of named feature columns with one id, class label,
/// and time step per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    ids: Vec<String>,
    feature_names: Vec<String>,
    values: Vec<f64>,
    labels: Vec<ClassLabel>,
    steps: Vec<TimeStep>,
}

impl FeatureMatrix {
    pub fn new(
        ids: Vec<String>,
        feature_names: Vec<String>,
        values: Vec<f64>,
        labels: Vec<ClassLabel>,
        steps: Vec<TimeStep>,
    ) -> Result<Self, MlError> {
        let rows = ids.len();
        let cols = feature_names.len();
        if values.len() != rows * cols {
            return Err(MlError::ShapeMismatch(format!(
                "{} values for {rows} rows x {cols} columns",
                values.len()
            )));
        }
        if labels.len() != rows || steps.len() != rows {
            return Err(MlError::ShapeMismatch(
                "labels and steps must match the row count".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &feature_names {
            if !seen.insert(name) {
                return Err(MlError::ShapeMismatch(format!("duplicate column {name}")));
            }
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(MlError::NonFinite(bad.to_string()));
        }
        Ok(FeatureMatrix {
            ids,
            feature_names,
            values,
            labels,
            steps,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.feature_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = self.n_cols();
        &self.values[i * c..(i + 1) * c]
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols() + col]
    }

    pub fn set_value(&mut self, row: usize, col: usize, v: f64) {
        let c = self.n_cols();
        self.values[row * c + col] = v;
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n_rows()).map(|r| self.value(r, col)).collect()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn steps(&self) -> &[TimeStep] {
        &self.steps
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    /// New matrix with the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        let c = self.n_cols();
        let mut values = Vec::with_capacity(rows.len() * c);
        for &r in rows {
            values.extend_from_slice(self.row(r));
        }
        FeatureMatrix {
            ids: rows.iter().map(|&r| self.ids[r].clone()).collect(),
            feature_names: self.feature_names.clone(),
            values,
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            steps: rows.iter().map(|&r| self.steps[r]).collect(),
        }
    }

    /// New matrix keeping the given columns, original order preserved by the
    /// caller's index order.
    pub fn select_columns(&self, cols: &[usize]) -> FeatureMatrix {
        let mut values = Vec::with_capacity(self.n_rows() * cols.len());
        for r in 0..self.n_rows() {
            for &c in cols {
                values.push(self.value(r, c));
            }
        }
        FeatureMatrix {
            ids: self.ids.clone(),
            feature_names: cols.iter().map(|&c| self.feature_names[c].clone()).collect(),
            values,
            labels: self.labels.clone(),
            steps: self.steps.clone(),
        }
    }
}

/// Builds the transaction matrix from a bundle: all 182 features, labels
/// from the class file.
pub fn tx_matrix(bundle: &DatasetBundle) -> Result<FeatureMatrix, MlError> {
    let names = tx_feature_names();
    let mut ids = Vec::with_capacity(bundle.tx_records.len());
    let mut labels = Vec::with_capacity(bundle.tx_records.len());
    let mut steps = Vec::with_capacity(bundle.tx_records.len());
    let mut values = Vec::with_capacity(bundle.tx_records.len() * names.len());
    for r in &bundle.tx_records {
        let class = bundle
            .tx_classes
            .get(&r.txid)
            .copied()
            .ok_or_else(|| MlError::ShapeMismatch(format!("no class for {}", r.txid)))?;
        ids.push(r.txid.to_string());
        labels.push(class);
        steps.push(r.time_step);
        values.extend(r.feature_values());
    }
    FeatureMatrix::new(ids, names, values, labels, steps)
}

/// Builds the wallet matrix from a bundle. The class column is the label,
/// not a feature, so rows carry the remaining 55 values. Row ids are
/// `address|step` since an address occurs once per active step.
pub fn wallet_matrix(bundle: &DatasetBundle) -> Result<FeatureMatrix, MlError> {
    let names: Vec<String> = wallet_feature_names()
        .into_iter()
        .filter(|n| n != "class")
        .collect();
    let class_idx = wallet_feature_names()
        .iter()
        .position(|n| n == "class")
        .expect("schema has a class column");
    let mut ids = Vec::with_capacity(bundle.wallet_records.len());
    let mut labels = Vec::with_capacity(bundle.wallet_records.len());
    let mut steps = Vec::with_capacity(bundle.wallet_records.len());
    let mut values = Vec::with_capacity(bundle.wallet_records.len() * names.len());
    for r in &bundle.wallet_records {
        ids.push(format!("{}|{}", r.address, r.time_step));
        labels.push(r.features.class);
        steps.push(r.time_step);
        let row = r.features.values();
        values.extend(row.iter().enumerate().filter(|(i, _)| *i != class_idx).map(|(_, v)| *v));
    }
    FeatureMatrix::new(ids, names, values, labels, steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn toy(values: &[&[f64]], labels: &[ClassLabel]) -> FeatureMatrix {
        let cols = values[0].len();
        FeatureMatrix::new(
            (0..values.len()).map(|i| format!("r{i}")).collect(),
            (0..cols).map(|i| format!("f{i}")).collect(),
            values.iter().flat_map(|r| r.iter().copied()).collect(),
            labels.to_vec(),
            vec![TimeStep(1); values.len()],
        )
        .unwrap()
    }

    #[test]
    fn shape_errors_are_rejected() {
        assert!(matches!(
            FeatureMatrix::new(
                vec!["a".into()],
                vec!["x".into(), "y".into()],
                vec![1.0],
                vec![ClassLabel::Licit],
                vec![TimeStep(1)],
            ),
            Err(MlError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn nan_is_rejected() {
        assert!(matches!(
            FeatureMatrix::new(
                vec!["a".into()],
                vec!["x".into()],
                vec![f64::NAN],
                vec![ClassLabel::Licit],
                vec![TimeStep(1)],
            ),
            Err(MlError::NonFinite(_))
        ));
    }

    #[test]
    fn select_columns_keeps_requested_order() {
        let m = toy(&[&[1.0, 2.0, 3.0]], &[ClassLabel::Licit]);
        let s = m.select_columns(&[2, 0]);
        assert_eq!(s.feature_names(), ["f2", "f0"]);
        assert_eq!(s.row(0), [3.0, 1.0]);
    }
}
