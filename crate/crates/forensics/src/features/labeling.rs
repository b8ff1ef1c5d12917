//! Wallet labeling rule.
//!
//! An address touching at least one illicit transaction is illicit. Otherwise
//! it is licit when the ratio of its unknown-class to licit-class incident
//! edges exceeds 3.7 (a zero licit count with any unknowns counts as an
//! infinite ratio), and unknown when the ratio is at or below 3.7.

use crate::domain::{Address, ClassLabel, TxId};
use crate::features::FeatureError;
use std::collections::BTreeMap;

/// Ratio threshold, expressed as the fraction 37/10 so the comparison stays
/// in integer arithmetic.
pub const UNKNOWN_TO_LICIT_NUM: u64 = 37;
pub const UNKNOWN_TO_LICIT_DEN: u64 = 10;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct IncidentCounts {
    illicit: u64,
    licit: u64,
    unknown: u64,
}

fn decide(counts: IncidentCounts) -> ClassLabel {
    if counts.illicit >= 1 {
        return ClassLabel::Illicit;
    }
    if counts.licit == 0 {
        if counts.unknown >= 1 {
            return ClassLabel::Licit;
        }
        return ClassLabel::Unknown;
    }
    if UNKNOWN_TO_LICIT_DEN * counts.unknown > UNKNOWN_TO_LICIT_NUM * counts.licit {
        ClassLabel::Licit
    } else {
        ClassLabel::Unknown
    }
}

/// Labels every address that appears in the two bipartite edge lists. Edges
/// are counted with multiplicity: an address that is both input and output
/// of one transaction contributes two incident edges.
pub fn label_wallets(
    tx_classes: &BTreeMap<TxId, ClassLabel>,
    addr_tx_edges: &[(Address, TxId)],
    tx_addr_edges: &[(TxId, Address)],
) -> Result<BTreeMap<Address, ClassLabel>, FeatureError> {
    let mut counts: BTreeMap<&Address, IncidentCounts> = BTreeMap::new();
    let mut tally = |addr: &Address, txid: &TxId, counts: &mut BTreeMap<&Address, IncidentCounts>| -> Result<(), FeatureError> {
        let class = tx_classes
            .get(txid)
            .ok_or_else(|| FeatureError::MissingClass(txid.to_string()))?;
        let entry = counts.entry(addr).or_default();
        match class {
            ClassLabel::Illicit => entry.illicit += 1,
            ClassLabel::Licit => entry.licit += 1,
            ClassLabel::Unknown => entry.unknown += 1,
        }
        Ok(())
    };
    for (addr, txid) in addr_tx_edges {
        tally(addr, txid, &mut counts)?;
    }
    for (txid, addr) in tx_addr_edges {
        tally(addr, txid, &mut counts)?;
    }
    Ok(counts
        .into_iter()
        .map(|(addr, c)| (addr.clone(), decide(c)))
        .collect())
}
