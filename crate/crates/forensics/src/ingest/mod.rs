//! Reading, writing, and validating the eight-file dataset bundle plus the
//! line-delimited raw transaction format.

pub mod files;
pub mod raw;
pub mod schema;

pub use files::{load_bundle, write_bundle};
pub use raw::{parse_raw_transactions, read_raw_transactions, write_raw_transactions};

use crate::domain::{Address, ClassLabel, DomainError, TimeStep, TxId};
use crate::features::tx::AugmentedTxFeatures;
use crate::features::wallet::WalletFeatures;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing file {0}")]
    MissingFile(String),
    #[error("{file}:{line}: malformed row: {reason}")]
    MalformedRow {
        file: String,
        line: u64,
        reason: String,
    },
    #[error("dangling edge endpoint {id} in {file}")]
    DanglingEdge { id: String, file: String },
    #[error("duplicate class entry for {0}")]
    DuplicateClass(String),
    #[error("missing class entry for {0}")]
    MissingClass(String),
    #[error("duplicate record for {0}")]
    DuplicateRecord(String),
    #[error("line {line}: parse error: {reason}")]
    Parse { line: u64, reason: String },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One transaction feature row: 93 opaque local features, 72 opaque
/// aggregate features, and the augmented block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TxRecord {
    pub txid: TxId,
    pub time_step: TimeStep,
    pub local_features: Vec<f64>,
    pub aggregate_features: Vec<f64>,
    pub augmented: AugmentedTxFeatures,
}

impl TxRecord {
    /// All 182 feature values in schema order.
    pub fn feature_values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(schema::N_TX_FEATURES);
        out.extend_from_slice(&self.local_features);
        out.extend_from_slice(&self.aggregate_features);
        out.extend_from_slice(&self.augmented.values());
        out
    }
}

/// One wallet feature row for an (address, time step) occurrence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalletRecord {
    pub address: Address,
    pub time_step: TimeStep,
    pub features: WalletFeatures,
}

/// Edge kinds of the four edge-list files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    TxTx,
    AddrAddr,
    AddrTx,
    TxAddr,
}

/// A generic ordered edge list, used for interchange and export. Duplicate
/// pairs are meaningful for address-address edges: one entry per
/// transaction between the pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub kind: EdgeKind,
    pub edges: Vec<(String, String)>,
}

/// The full dataset: two node tables with class maps and four edge lists.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatasetBundle {
    pub tx_records: Vec<TxRecord>,
    pub tx_classes: BTreeMap<TxId, ClassLabel>,
    pub tx_edges: Vec<(TxId, TxId)>,
    pub wallet_records: Vec<WalletRecord>,
    pub wallet_classes: BTreeMap<Address, ClassLabel>,
    pub addr_addr_edges: Vec<(Address, Address)>,
    pub addr_tx_edges: Vec<(Address, TxId)>,
    pub tx_addr_edges: Vec<(TxId, Address)>,
}

impl DatasetBundle {
    /// Checks referential integrity: unique node rows, one class entry per
    /// node, and every edge endpoint resolving against its node table.
    pub fn validate(&self) -> Result<(), IngestError> {
        let mut tx_ids: HashSet<&TxId> = HashSet::with_capacity(self.tx_records.len());
        for r in &self.tx_records {
            if !tx_ids.insert(&r.txid) {
                return Err(IngestError::DuplicateRecord(r.txid.to_string()));
            }
            if !self.tx_classes.contains_key(&r.txid) {
                return Err(IngestError::MissingClass(r.txid.to_string()));
            }
        }
        let mut wallet_rows: HashSet<(&Address, TimeStep)> =
            HashSet::with_capacity(self.wallet_records.len());
        for r in &self.wallet_records {
            if !wallet_rows.insert((&r.address, r.time_step)) {
                return Err(IngestError::DuplicateRecord(format!(
                    "{} at step {}",
                    r.address, r.time_step
                )));
            }
            if !self.wallet_classes.contains_key(&r.address) {
                return Err(IngestError::MissingClass(r.address.to_string()));
            }
        }
        let addresses: HashSet<&Address> = self.wallet_classes.keys().collect();
        let dangle = |id: String, file: &str| IngestError::DanglingEdge {
            id,
            file: file.to_string(),
        };
        for (a, b) in &self.tx_edges {
            for id in [a, b] {
                if !tx_ids.contains(id) {
                    return Err(dangle(id.to_string(), schema::TXS_EDGELIST_FILE));
                }
            }
        }
        for (a, b) in &self.addr_addr_edges {
            for id in [a, b] {
                if !addresses.contains(id) {
                    return Err(dangle(id.to_string(), schema::ADDR_ADDR_EDGELIST_FILE));
                }
            }
        }
        for (a, t) in &self.addr_tx_edges {
            if !addresses.contains(a) {
                return Err(dangle(a.to_string(), schema::ADDR_TX_EDGELIST_FILE));
            }
            if !tx_ids.contains(t) {
                return Err(dangle(t.to_string(), schema::ADDR_TX_EDGELIST_FILE));
            }
        }
        for (t, a) in &self.tx_addr_edges {
            if !tx_ids.contains(t) {
                return Err(dangle(t.to_string(), schema::TX_ADDR_EDGELIST_FILE));
            }
            if !addresses.contains(a) {
                return Err(dangle(a.to_string(), schema::TX_ADDR_EDGELIST_FILE));
            }
        }
        Ok(())
    }

    /// Highest time step present in either node table.
    pub fn max_step(&self) -> u32 {
        let tx_max = self.tx_records.iter().map(|r| r.time_step.index()).max();
        let w_max = self.wallet_records.iter().map(|r| r.time_step.index()).max();
        tx_max.into_iter().chain(w_max).max().unwrap_or(0)
    }
}

/// Node counts of one class at one time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub unknown: u64,
    pub illicit: u64,
    pub licit: u64,
}

impl ClassCounts {
    fn bump(&mut self, class: ClassLabel) {
        match class {
            ClassLabel::Unknown => self.unknown += 1,
            ClassLabel::Illicit => self.illicit += 1,
            ClassLabel::Licit => self.licit += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.unknown + self.illicit + self.licit
    }
}

/// Per-time-step class counts for transactions and wallet occurrences.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DistributionReport {
    /// Index 0 is time step 1.
    pub tx: Vec<ClassCounts>,
    pub wallets: Vec<ClassCounts>,
}

/// Counts the nodes of each class per time step. Wallet counts are per
/// (address, time step) occurrence, transaction counts per record.
pub fn distribution_report(bundle: &DatasetBundle) -> DistributionReport {
    let max_step = bundle.max_step() as usize;
    let mut tx = vec![ClassCounts::default(); max_step];
    let mut wallets = vec![ClassCounts::default(); max_step];
    for r in &bundle.tx_records {
        if let Some(class) = bundle.tx_classes.get(&r.txid) {
            tx[r.time_step.index() as usize - 1].bump(*class);
        }
    }
    for r in &bundle.wallet_records {
        if let Some(class) = bundle.wallet_classes.get(&r.address) {
            wallets[r.time_step.index() as usize - 1].bump(*class);
        }
    }
    DistributionReport { tx, wallets }
}
