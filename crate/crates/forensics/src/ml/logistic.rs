//! Binary logistic regression trained by gradient descent with a
//! backtracking line search, so the loss trace is non-increasing.

use crate::domain::ClassLabel;
use crate::ml::{FeatureMatrix, MlError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticConfig {
    pub max_iterations: usize,
    /// L2 penalty weight on the coefficients (not the intercept).
    pub l2_strength: f64,
    /// Convergence threshold on the gradient infinity norm.
    pub tolerance: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            max_iterations: 1000,
            l2_strength: 1.0,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub feature_names: Vec<String>,
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub config: LogisticConfig,
    pub iterations: usize,
    /// Regularized mean loss after each accepted step, starting with the
    /// loss at the zero initializer.
    pub loss_trace: Vec<f64>,
}

/// log(1 + exp(-t)) without overflow.
fn log1p_exp_neg(t: f64) -> f64 {
    if t > 0.0 {
        (-t).exp().ln_1p()
    } else {
        -t + t.exp().ln_1p()
    }
}

fn to_signed_labels(labels: &[ClassLabel]) -> Result<Vec<f64>, MlError> {
    let mut saw_pos = false;
    let mut saw_neg = false;
    let y: Vec<f64> = labels
        .iter()
        .map(|l| match l {
            ClassLabel::Illicit => {
                saw_pos = true;
                1.0
            }
            _ => {
                saw_neg = true;
                -1.0
            }
        })
        .collect();
    if !(saw_pos && saw_neg) {
        return Err(MlError::SingleClassTrainingSet);
    }
    Ok(y)
}

struct Objective<'a> {
    m: &'a FeatureMatrix,
    y: &'a [f64],
    l2: f64,
}

impl Objective<'_> {
    fn loss(&self, w: &[f64], b: f64) -> f64 {
        let n = self.m.n_rows() as f64;
        let mut total = 0.0;
        for i in 0..self.m.n_rows() {
            let z: f64 = self
                .m
                .row(i)
                .iter()
                .zip(w)
                .map(|(x, wi)| x * wi)
                .sum::<f64>()
                + b;
            total += log1p_exp_neg(self.y[i] * z);
        }
        let penalty: f64 = w.iter().map(|v| v * v).sum::<f64>() * self.l2 / (2.0 * n);
        total / n + penalty
    }

    fn gradient(&self, w: &[f64], b: f64) -> (Vec<f64>, f64) {
        let n = self.m.n_rows() as f64;
        let mut gw = vec![0.0; w.len()];
        let mut gb = 0.0;
        for i in 0..self.m.n_rows() {
            let row = self.m.row(i);
            let z: f64 = row.iter().zip(w).map(|(x, wi)| x * wi).sum::<f64>() + b;
            // d/dz log(1+exp(-y z)) = -y * sigmoid(-y z)
            let s = -self.y[i] / (1.0 + (self.y[i] * z).exp());
            for (g, x) in gw.iter_mut().zip(row) {
                *g += s * x;
            }
            gb += s;
        }
        for (g, wi) in gw.iter_mut().zip(w) {
            *g = *g / n + self.l2 * wi / n;
        }
        (gw, gb / n)
    }
}

/// Trains on rows labeled illicit or licit. Deterministic: zero
/// initialization, full-batch gradients, Armijo backtracking.
pub fn train_logistic(
    train: &FeatureMatrix,
    config: LogisticConfig,
) -> Result<LogisticModel, MlError> {
    if train.n_rows() == 0 {
        return Err(MlError::EmptyFit);
    }
    let y = to_signed_labels(train.labels())?;
    let obj = Objective {
        m: train,
        y: &y,
        l2: config.l2_strength,
    };
    let mut w = vec![0.0; train.n_cols()];
    let mut b = 0.0;
    let mut loss = obj.loss(&w, &b);
    let mut trace = vec![loss];
    let mut step = 1.0;
    let mut iterations = 0;
    for _ in 0..config.max_iterations {
        let (gw, gb) = obj.gradient(&w, b);
        let grad_inf = gw
            .iter()
            .chain(std::iter::once(&gb))
            .fold(0.0f64, |m, g| m.max(g.abs()));
        if grad_inf < config.tolerance {
            break;
        }
        let grad_sq: f64 = gw.iter().map(|g| g * g).sum::<f64>() + gb * gb;
        // Backtrack until the Armijo condition holds; the step that ran out
        // of backtracking budget is rejected, keeping the trace monotone.
        step *= 2.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand_w: Vec<f64> = w.iter().zip(&gw).map(|(wi, g)| wi - step * g).collect();
            let cand_b = b - step * gb;
            let cand_loss = obj.loss(&cand_w, cand_b);
            if cand_loss <= loss - 0.25 * step * grad_sq {
                w = cand_w;
                b = cand_b;
                loss = cand_loss;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        trace.push(loss);
        iterations += 1;
    }
    Ok(LogisticModel {
        feature_names: train.feature_names().to_vec(),
        weights: w,
        intercept: b,
        config,
        iterations,
        loss_trace: trace,
    })
}

impl LogisticModel {
    pub fn decision(&self, row: &[f64]) -> f64 {
        row.iter()
            .zip(&self.weights)
            .map(|(x, w)| x * w)
            .sum::<f64>()
            + self.intercept
    }

    pub fn probability(&self, row: &[f64]) -> f64 {
        1.0 / (1.0 + (-self.decision(row)).exp())
    }

    pub fn predict_row(&self, row: &[f64]) -> ClassLabel {
        if self.decision(row) > 0.0 {
            ClassLabel::Illicit
        } else {
            ClassLabel::Licit
        }
    }

    pub fn predict(&self, m: &FeatureMatrix) -> Result<Vec<ClassLabel>, MlError> {
        if m.feature_names() != self.feature_names.as_slice() {
            return Err(MlError::FeatureMismatch(
                "prediction requires the training feature set".into(),
            ));
        }
        Ok((0..m.n_rows()).map(|i| self.predict_row(m.row(i))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::TimeStep;

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

    #[test]
    fn separable_data_is_fit_perfectly() {
        let m = matrix(&[
            (&[0.0, 0.1], ClassLabel::Licit),
            (&[0.1, 0.0], ClassLabel::Licit),
            (&[0.9, 1.0], ClassLabel::Illicit),
            (&[1.0, 0.9], ClassLabel::Illicit),
        ]);
        let model = train_logistic(&m, LogisticConfig::default()).unwrap();
        let pred = model.predict(&m).unwrap();
        assert_eq!(pred, m.labels());
    }

    #[test]
    fn constant_features_predict_the_majority_class() {
        let m = matrix(&[
            (&[1.0], ClassLabel::Illicit),
            (&[1.0], ClassLabel::Illicit),
            (&[1.0], ClassLabel::Licit),
        ]);
        let model = train_logistic(&m, LogisticConfig::default()).unwrap();
        let pred = model.predict(&m).unwrap();
        assert!(pred.iter().all(|p| *p == ClassLabel::Illicit));
    }

    #[test]
    fn loss_trace_never_increases() {
        let m = matrix(&[
            (&[0.0, 0.3], ClassLabel::Licit),
            (&[0.4, 0.1], ClassLabel::Illicit),
            (&[0.8, 0.8], ClassLabel::Illicit),
            (&[0.2, 0.9], ClassLabel::Licit),
        ]);
        let model = train_logistic(&m, LogisticConfig::default()).unwrap();
        for pair in model.loss_trace.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-15, "loss went up: {pair:?}");
        }
        assert!(model.loss_trace.len() > 1);
    }

    #[test]
    fn single_class_training_set_is_rejected() {
        let m = matrix(&[(&[1.0], ClassLabel::Licit), (&[2.0], ClassLabel::Licit)]);
        assert!(matches!(
            train_logistic(&m, LogisticConfig::default()),
            Err(MlError::SingleClassTrainingSet)
        ));
    }
}
