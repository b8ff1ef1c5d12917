//! Per-feature min-max scaling.

use crate::ml::{FeatureMatrix, MlError};
use serde::{Deserialize, Serialize};

/// Fitted min-max parameters. Columns not listed in `columns` pass through
/// untouched; constant columns map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub columns: Vec<usize>,
    pub mins: Vec<f64>,
    pub ranges: Vec<f64>,
    pub clamp: bool,
}

impl MinMaxScaler {
    /// Fits on every row of `fit` over the given columns.
    pub fn fit(fit: &FeatureMatrix, columns: &[usize], clamp: bool) -> Result<Self, MlError> {
        if fit.n_rows() == 0 {
            return Err(MlError::EmptyFit);
        }
        let mut mins = Vec::with_capacity(columns.len());
        let mut ranges = Vec::with_capacity(columns.len());
        for &c in columns {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for r in 0..fit.n_rows() {
                let v = fit.value(r, c);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            mins.push(lo);
            ranges.push(hi - lo);
        }
        Ok(MinMaxScaler {
            columns: columns.to_vec(),
            mins,
            ranges,
            clamp,
        })
    }

    pub fn transform_value(&self, slot: usize, v: f64) -> f64 {
        let range = self.ranges[slot];
        let scaled = if range == 0.0 {
            0.0
        } else {
            (v - self.mins[slot]) / range
        };
        if self.clamp {
            scaled.clamp(0.0, 1.0)
        } else {
            scaled
        }
    }

    /// Applies the fitted parameters. Rows outside the fitted range map
    /// outside [0,1] unless clamping was requested at fit time.
    pub fn transform(&self, m: &FeatureMatrix) -> FeatureMatrix {
        let mut out = m.clone();
        for (slot, &c) in self.columns.iter().enumerate() {
            for r in 0..m.n_rows() {
                out.set_value(r, c, self.transform_value(slot, m.value(r, c)));
            }
        }
        out
    }
}

/// Fits on `fit` and transforms both arguments, returning the scaler for
/// later rows.
pub fn scale_min_max(
    fit: &FeatureMatrix,
    other: &FeatureMatrix,
    columns: &[usize],
    clamp: bool,
) -> Result<(FeatureMatrix, FeatureMatrix, MinMaxScaler), MlError> {
    let scaler = MinMaxScaler::fit(fit, columns, clamp)?;
    Ok((scaler.transform(fit), scaler.transform(other), scaler))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{ClassLabel, TimeStep};

    fn single_column(values: &[f64]) -> FeatureMatrix {
        FeatureMatrix::new(
            (0..values.len()).map(|i| format!("r{i}")).collect(),
            vec!["x".into()],
            values.to_vec(),
            vec![ClassLabel::Licit; values.len()],
            vec![TimeStep(1); values.len()],
        )
        .unwrap()
    }

    #[test]
    fn fit_rows_span_the_unit_interval() {
        let m = single_column(&[2.0, 4.0, 6.0]);
        let scaler = MinMaxScaler::fit(&m, &[0], false).unwrap();
        let t = scaler.transform(&m);
        assert_eq!(t.column(0), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn constant_column_maps_to_zero() {
        let m = single_column(&[5.0, 5.0]);
        let scaler = MinMaxScaler::fit(&m, &[0], false).unwrap();
        assert_eq!(scaler.transform(&m).column(0), vec![0.0, 0.0]);
    }

    #[test]
    fn out_of_range_value_is_unclamped_by_default() {
        // Fit range [2, 6]; the linear map sends 8 to (8-2)/4 = 1.5.
        let fit = single_column(&[2.0, 6.0]);
        let test = single_column(&[8.0]);
        let (_, scaled_test, _) = scale_min_max(&fit, &test, &[0], false).unwrap();
        assert_eq!(scaled_test.value(0, 0), 1.5);
        let (_, clamped, _) = scale_min_max(&fit, &test, &[0], true).unwrap();
        assert_eq!(clamped.value(0, 0), 1.0);
    }

    #[test]
    fn empty_fit_is_an_error() {
        let m = FeatureMatrix::new(vec![], vec!["x".into()], vec![], vec![], vec![]).unwrap();
        assert!(matches!(
            MinMaxScaler::fit(&m, &[0], false),
            Err(MlError::EmptyFit)
        ));
    }

    #[test]
    fn scaling_preserves_column_order_statistics() {
        let m = single_column(&[3.0, -1.0, 7.0, 2.0]);
        let scaler = MinMaxScaler::fit(&m, &[0], false).unwrap();
        let t = scaler.transform(&m);
        let argsort = |v: &[f64]| {
            let mut idx: Vec<usize> = (0..v.len()).collect();
            idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
            idx
        };
        assert_eq!(argsort(&m.column(0)), argsort(&t.column(0)));
    }
}
