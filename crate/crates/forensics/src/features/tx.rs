//! The 17 augmented transaction features.

use crate::domain::{five_stats_sats, FiveStats, RawTransaction, Sats};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Augmented feature block of one transaction: five-stat summaries of the
/// incoming and outgoing amounts plus seven scalars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentedTxFeatures {
    pub btc_in: FiveStats,
    pub btc_out: FiveStats,
    /// In-degree in the money flow graph.
    pub txs_in: u32,
    /// Out-degree in the money flow graph.
    pub txs_out: u32,
    /// Distinct input addresses.
    pub addr_in: u32,
    /// Distinct output addresses.
    pub addr_out: u32,
    /// Total BTC transacted: the input total, or the output total for a
    /// coinbase transaction.
    pub btc_total: Sats,
    pub fees: Sats,
    pub size: u32,
}

impl AugmentedTxFeatures {
    /// Column values in schema order (BTC amounts in BTC units).
    pub fn values(&self) -> [f64; 17] {
        [
            self.btc_in.total,
            self.btc_in.min,
            self.btc_in.max,
            self.btc_in.mean,
            self.btc_in.median,
            self.btc_out.total,
            self.btc_out.min,
            self.btc_out.max,
            self.btc_out.mean,
            self.btc_out.median,
            self.txs_in as f64,
            self.txs_out as f64,
            self.addr_in as f64,
            self.addr_out as f64,
            self.btc_total.to_btc(),
            self.fees.to_btc(),
            self.size as f64,
        ]
    }
}

/// Computes the augmented features of one transaction. Degrees come from the
/// money flow graph; amount stats are satoshi-exact. An empty input side
/// (coinbase) yields all-zero incoming stats and the output total as the
/// transacted total.
pub fn augment_transaction(
    tx: &RawTransaction,
    tx_graph_degrees: (u32, u32),
) -> AugmentedTxFeatures {
    let input_amounts: Vec<Sats> = tx.inputs.iter().map(|(_, v)| *v).collect();
    let output_amounts: Vec<Sats> = tx.outputs.iter().map(|(_, v)| *v).collect();
    let addr_in = tx
        .inputs
        .iter()
        .map(|(a, _)| a)
        .collect::<HashSet<_>>()
        .len() as u32;
    let addr_out = tx
        .outputs
        .iter()
        .map(|(a, _)| a)
        .collect::<HashSet<_>>()
        .len() as u32;
    let btc_total = if tx.is_coinbase() {
        tx.output_total()
    } else {
        tx.input_total()
    };
    AugmentedTxFeatures {
        btc_in: five_stats_sats(&input_amounts),
        btc_out: five_stats_sats(&output_amounts),
        txs_in: tx_graph_degrees.0,
        txs_out: tx_graph_degrees.1,
        addr_in,
        addr_out,
        btc_total,
        fees: tx.fee,
        size: tx.size_bytes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Address, TxId};

    fn addr(s: &str) -> Address {
        Address::new(s).unwrap()
    }

    fn btc(s: &str) -> Sats {
        Sats::parse_btc(s).unwrap()
    }

    #[test]
    fn two_in_one_out_example() {
        let tx = RawTransaction {
            txid: TxId::new("t1").unwrap(),
            block_height: 5,
            inputs: vec![(addr("A"), btc("1.0")), (addr("B"), btc("3.0"))],
            outputs: vec![(addr("C"), btc("3.9"))],
            fee: btc("0.1"),
            size_bytes: 250,
        };
        tx.validate().unwrap();
        let f = augment_transaction(&tx, (2, 1));
        assert_eq!(f.btc_in.as_array(), [4.0, 1.0, 3.0, 2.0, 2.0]);
        assert_eq!(f.btc_out.as_array(), [3.9, 3.9, 3.9, 3.9, 3.9]);
        assert_eq!((f.txs_in, f.txs_out), (2, 1));
        assert_eq!((f.addr_in, f.addr_out), (2, 1));
        assert_eq!(f.btc_total, btc("4.0"));
        assert_eq!(f.fees, btc("0.1"));
        assert_eq!(f.size, 250);
    }

    #[test]
    fn coinbase_has_zero_input_stats() {
        let tx = RawTransaction {
            txid: TxId::new("cb").unwrap(),
            block_height: 1,
            inputs: vec![],
            outputs: vec![(addr("M"), btc("6.25"))],
            fee: Sats::ZERO,
            size_bytes: 110,
        };
        let f = augment_transaction(&tx, (0, 1));
        assert_eq!(f.btc_in, FiveStats::ZERO);
        assert_eq!(f.btc_total, btc("6.25"));
        assert_eq!(f.btc_out.total, 6.25);
    }

    #[test]
    fn duplicate_addresses_count_once() {
        let tx = RawTransaction {
            txid: TxId::new("t2").unwrap(),
            block_height: 9,
            inputs: vec![(addr("A"), btc("1.0")), (addr("A"), btc("2.0"))],
            outputs: vec![(addr("A"), btc("2.9"))],
            fee: btc("0.1"),
            size_bytes: 300,
        };
        let f = augment_transaction(&tx, (1, 0));
        assert_eq!((f.addr_in, f.addr_out), (1, 1));
    }
}
