//! Per-time-step mean series for plotting licit-vs-illicit feature trends.

use crate::domain::{ClassLabel, TimeStep};
use crate::features::FeatureError;
use crate::ingest::{TxRecord, WalletRecord};
use crate::ingest::schema::{tx_feature_names, wallet_feature_names};
use std::collections::BTreeMap;

/// One mean per time step; `None` where the class has no members at a step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendSeries {
    pub feature: String,
    pub class: ClassLabel,
    pub by_step: Vec<(TimeStep, Option<f64>)>,
}

fn mean_series(
    rows: impl Iterator<Item = (TimeStep, f64)>,
    max_step: u32,
) -> Vec<(TimeStep, Option<f64>)> {
    let mut sums: BTreeMap<u32, (f64, u64)> = BTreeMap::new();
    for (step, value) in rows {
        let entry = sums.entry(step.index()).or_insert((0.0, 0));
        entry.0 += value;
        entry.1 += 1;
    }
    (1..=max_step)
        .map(|s| {
            let value = sums.get(&s).map(|(sum, n)| sum / *n as f64);
            (TimeStep(s), value)
        })
        .collect()
}

/// Mean of one transaction feature per time step, restricted to records of
/// `class` according to `classes`.
pub fn tx_feature_trend(
    records: &[TxRecord],
    classes: &BTreeMap<crate::domain::TxId, ClassLabel>,
    feature: &str,
    class: ClassLabel,
) -> Result<TrendSeries, FeatureError> {
    let names = tx_feature_names();
    let idx = names
        .iter()
        .position(|n| n == feature)
        .ok_or_else(|| FeatureError::UnknownFeature(feature.to_string()))?;
    let max_step = records.iter().map(|r| r.time_step.index()).max().unwrap_or(0);
    let rows = records.iter().filter_map(|r| {
        (classes.get(&r.txid) == Some(&class)).then(|| (r.time_step, r.feature_values()[idx]))
    });
    Ok(TrendSeries {
        feature: feature.to_string(),
        class,
        by_step: mean_series(rows, max_step),
    })
}

/// Mean of one wallet feature per time step, restricted to `class` rows.
pub fn wallet_feature_trend(
    records: &[WalletRecord],
    feature: &str,
    class: ClassLabel,
) -> Result<TrendSeries, FeatureError> {
    let names = wallet_feature_names();
    let idx = names
        .iter()
        .position(|n| n == feature)
        .ok_or_else(|| FeatureError::UnknownFeature(feature.to_string()))?;
    let max_step = records.iter().map(|r| r.time_step.index()).max().unwrap_or(0);
    let rows = records.iter().filter_map(|r| {
        (r.features.class == class).then(|| (r.time_step, r.features.values()[idx]))
    });
    Ok(TrendSeries {
        feature: feature.to_string(),
        class,
        by_step: mean_series(rows, max_step),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::TxId;
    use crate::features::tx::AugmentedTxFeatures;
    use crate::domain::FiveStats;
    use crate::domain::Sats;

    fn record(id: &str, step: u32, size: u32) -> TxRecord {
        TxRecord {
            txid: TxId::new(id).unwrap(),
            time_step: TimeStep(step),
            local_features: vec![0.0; 93],
            aggregate_features: vec![0.0; 72],
            augmented: AugmentedTxFeatures {
                btc_in: FiveStats::ZERO,
                btc_out: FiveStats::ZERO,
                txs_in: 0,
                txs_out: 0,
                addr_in: 0,
                addr_out: 0,
                btc_total: Sats::ZERO,
                fees: Sats::ZERO,
                size,
            },
        }
    }

    #[test]
    fn constant_feature_yields_flat_series() {
        let records = vec![record("a", 1, 1), record("b", 1, 1), record("c", 2, 1)];
        let classes: BTreeMap<TxId, ClassLabel> = records
            .iter()
            .map(|r| (r.txid.clone(), ClassLabel::Licit))
            .collect();
        let t = tx_feature_trend(&records, &classes, "Size", ClassLabel::Licit).unwrap();
        assert_eq!(
            t.by_step,
            vec![(TimeStep(1), Some(1.0)), (TimeStep(2), Some(1.0))]
        );
    }

    #[test]
    fn empty_class_at_a_step_is_none() {
        let records = vec![record("a", 1, 3), record("b", 2, 5)];
        let mut classes = BTreeMap::new();
        classes.insert(TxId::new("a").unwrap(), ClassLabel::Illicit);
        classes.insert(TxId::new("b").unwrap(), ClassLabel::Licit);
        let t = tx_feature_trend(&records, &classes, "Size", ClassLabel::Illicit).unwrap();
        assert_eq!(t.by_step, vec![(TimeStep(1), Some(3.0)), (TimeStep(2), None)]);
    }

    #[test]
    fn unknown_feature_is_an_error() {
        let records = vec![record("a", 1, 3)];
        let classes = BTreeMap::new();
        assert!(matches!(
            tx_feature_trend(&records, &classes, "nope", ClassLabel::Licit),
            Err(FeatureError::UnknownFeature(_))
        ));
    }
}
