//! Column layouts for the eight-file csv bundle.
//!
//! The transaction feature file carries `txId`, `Time step`, 93 opaque local
//! features, 72 opaque aggregate features, and the 17 augmented features in
//! the order: incoming-BTC five stats, outgoing-BTC five stats, then the
//! seven scalars. The wallet feature file carries `address`, `Time step`,
//! nine five-stat groups, the class code, and ten scalars (56 values total).

pub const N_LOCAL: usize = 93;
pub const N_AGGREGATE: usize = 72;
pub const N_AUGMENTED: usize = 17;
/// Feature values per transaction row (excluding id and time step).
pub const N_TX_FEATURES: usize = N_LOCAL + N_AGGREGATE + N_AUGMENTED;
/// Feature values per wallet row (excluding address and time step).
pub const N_WALLET_FEATURES: usize = 56;

pub const TXS_FEATURES_FILE: &str = "txs_features.csv";
pub const TXS_EDGELIST_FILE: &str = "txs_edgelist.csv";
pub const TXS_CLASSES_FILE: &str = "txs_classes.csv";
pub const WALLETS_FEATURES_FILE: &str = "wallets_features.csv";
pub const WALLETS_CLASSES_FILE: &str = "wallets_classes.csv";
pub const ADDR_ADDR_EDGELIST_FILE: &str = "AddrAddr_edgelist.csv";
pub const ADDR_TX_EDGELIST_FILE: &str = "AddrTx_edgelist.csv";
pub const TX_ADDR_EDGELIST_FILE: &str = "TxAddr_edgelist.csv";

pub const BUNDLE_FILES: [&str; 8] = [
    TXS_FEATURES_FILE,
    TXS_EDGELIST_FILE,
    TXS_CLASSES_FILE,
    WALLETS_FEATURES_FILE,
    WALLETS_CLASSES_FILE,
    ADDR_ADDR_EDGELIST_FILE,
    ADDR_TX_EDGELIST_FILE,
    TX_ADDR_EDGELIST_FILE,
];

/// Names of the 17 augmented transaction features, in column order.
pub const AUGMENTED_TX_FEATURES: [&str; N_AUGMENTED] = [
    "BTC_in_total",
    "BTC_in_min",
    "BTC_in_max",
    "BTC_in_mean",
    "BTC_in_median",
    "BTC_out_total",
    "BTC_out_min",
    "BTC_out_max",
    "BTC_out_mean",
    "BTC_out_median",
    "Txs_in",
    "Txs_out",
    "Addr_in",
    "Addr_out",
    "BTC_total",
    "Fees",
    "Size",
];

/// Wallet five-stat group prefixes, in column order.
pub const WALLET_STAT_GROUPS: [&str; 9] = [
    "BTC_transacted",
    "BTC_sent",
    "BTC_received",
    "Fees",
    "Fees_share",
    "Blocks_txs",
    "Blocks_input",
    "Blocks_output",
    "Addr_interactions",
];

pub const FIVE_STAT_SUFFIXES: [&str; 5] = ["total", "min", "max", "mean", "median"];

/// Wallet scalar feature names following the five-stat groups.
pub const WALLET_SCALARS: [&str; 11] = [
    "class",
    "Txs_total",
    "Txs_input",
    "Txs_output",
    "Timesteps",
    "Lifetime_blocks",
    "Block_first",
    "Block_last",
    "Block_first_sent",
    "Block_first_receive",
    "Repeat_interactions",
];

/// All 182 transaction feature names: LF_1..LF_93, AF_1..AF_72, augmented.
pub fn tx_feature_names() -> Vec<String> {
    let mut names = Vec::with_capacity(N_TX_FEATURES);
    names.extend((1..=N_LOCAL).map(|i| format!("LF_{i}")));
    names.extend((1..=N_AGGREGATE).map(|i| format!("AF_{i}")));
    names.extend(AUGMENTED_TX_FEATURES.iter().map(|s| s.to_string()));
    names
}

/// All 56 wallet feature names, class included.
pub fn wallet_feature_names() -> Vec<String> {
    let mut names = Vec::with_capacity(N_WALLET_FEATURES);
    for group in WALLET_STAT_GROUPS {
        for suffix in FIVE_STAT_SUFFIXES {
            names.push(format!("{group}_{suffix}"));
        }
    }
    names.extend(WALLET_SCALARS.iter().map(|s| s.to_string()));
    names
}

pub fn tx_header() -> Vec<String> {
    let mut header = vec!["txId".to_string(), "Time step".to_string()];
    header.extend(tx_feature_names());
    header
}

pub fn wallet_header() -> Vec<String> {
    let mut header = vec!["address".to_string(), "Time step".to_string()];
    header.extend(wallet_feature_names());
    header
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_counts_match_the_dataset_shape() {
        assert_eq!(N_TX_FEATURES, 182);
        assert_eq!(tx_header().len(), 184);
        assert_eq!(wallet_feature_names().len(), 56);
        assert_eq!(wallet_header().len(), 58);
    }
}
