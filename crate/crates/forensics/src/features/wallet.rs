//! Per-address activity series and the 56 wallet features.

use crate::domain::{
    five_stats_or_zero, five_stats_sats, ClassLabel, FiveStats, RawTransaction, Sats, TimeStep,
    TxId,
};
use crate::features::FeatureError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

/// One transaction an address participated in, seen from that address.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityEvent {
    pub block_height: u64,
    pub time_step: TimeStep,
    pub txid: TxId,
    pub is_input: bool,
    pub is_output: bool,
    /// Total the address contributed on the input side of this transaction.
    pub sent: Sats,
    /// Total the address received on the output side.
    pub received: Sats,
    pub fee: Sats,
    /// Total BTC transacted by the transaction itself.
    pub tx_total: Sats,
    /// Distinct other addresses in the transaction, sorted.
    pub counterparties: Vec<crate::domain::Address>,
}

/// Chronological activity of every address, built once from the raw
/// transactions and then read-only. Events are sorted by block height, ties
/// broken by txid.
#[derive(Debug, Clone, Default)]
pub struct ActivityContext {
    per_address: BTreeMap<crate::domain::Address, Vec<ActivityEvent>>,
}

impl ActivityContext {
    /// Builds the context from transactions and their time steps. Every
    /// transaction must have a step entry.
    pub fn build(
        transactions: &[RawTransaction],
        step_of: &BTreeMap<TxId, TimeStep>,
    ) -> Result<Self, FeatureError> {
        let mut per_address: BTreeMap<crate::domain::Address, Vec<ActivityEvent>> = BTreeMap::new();
        for tx in transactions {
            let step = *step_of
                .get(&tx.txid)
                .ok_or_else(|| FeatureError::MissingTimeStep(tx.txid.to_string()))?;
            let tx_total = if tx.is_coinbase() {
                tx.output_total()
            } else {
                tx.input_total()
            };
            let mut sent: HashMap<&crate::domain::Address, Sats> = HashMap::new();
            let mut received: HashMap<&crate::domain::Address, Sats> = HashMap::new();
            for (a, v) in &tx.inputs {
                let e = sent.entry(a).or_insert(Sats::ZERO);
                *e = e.checked_add(*v).expect("amount overflow");
            }
            for (a, v) in &tx.outputs {
                let e = received.entry(a).or_insert(Sats::ZERO);
                *e = e.checked_add(*v).expect("amount overflow");
            }
            let participants: BTreeSet<&crate::domain::Address> =
                sent.keys().chain(received.keys()).copied().collect();
            for addr in &participants {
                let counterparties: Vec<crate::domain::Address> = participants
                    .iter()
                    .filter(|p| *p != addr)
                    .map(|p| (*p).clone())
                    .collect();
                per_address
                    .entry((*addr).clone())
                    .or_default()
                    .push(ActivityEvent {
                        block_height: tx.block_height,
                        time_step: step,
                        txid: tx.txid.clone(),
                        is_input: sent.contains_key(*addr),
                        is_output: received.contains_key(*addr),
                        sent: sent.get(*addr).copied().unwrap_or(Sats::ZERO),
                        received: received.get(*addr).copied().unwrap_or(Sats::ZERO),
                        fee: tx.fee,
                        tx_total,
                        counterparties,
                    });
            }
        }
        for events in per_address.values_mut() {
            events.sort_by(|a, b| {
                (a.block_height, a.txid.as_str()).cmp(&(b.block_height, b.txid.as_str()))
            });
        }
        Ok(ActivityContext { per_address })
    }

    pub fn addresses(&self) -> impl Iterator<Item = &crate::domain::Address> {
        self.per_address.keys()
    }

    pub fn events(&self, addr: &crate::domain::Address) -> Option<&[ActivityEvent]> {
        self.per_address.get(addr).map(|v| v.as_slice())
    }

    /// Distinct time steps an address is active in, ascending.
    pub fn active_steps(&self, addr: &crate::domain::Address) -> Vec<TimeStep> {
        match self.per_address.get(addr) {
            None => Vec::new(),
            Some(events) => {
                let steps: BTreeSet<TimeStep> = events.iter().map(|e| e.time_step).collect();
                steps.into_iter().collect()
            }
        }
    }
}

/// The 56 wallet features of one address at one time-step scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalletFeatures {
    pub class: ClassLabel,
    pub btc_transacted: FiveStats,
    pub btc_sent: FiveStats,
    pub btc_received: FiveStats,
    pub fees: FiveStats,
    pub fees_share: FiveStats,
    pub blocks_txs: FiveStats,
    pub blocks_input: FiveStats,
    pub blocks_output: FiveStats,
    pub addr_interactions: FiveStats,
    pub txs_total: u32,
    pub txs_input: u32,
    pub txs_output: u32,
    pub timesteps: u32,
    pub lifetime_blocks: u64,
    pub block_first: u64,
    pub block_last: u64,
    pub block_first_sent: u64,
    pub block_first_receive: u64,
    pub repeat_interactions: u32,
}

impl WalletFeatures {
    /// Column values in schema order: nine five-stat groups, class code,
    /// then the ten scalars.
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(56);
        for group in [
            &self.btc_transacted,
            &self.btc_sent,
            &self.btc_received,
            &self.fees,
            &self.fees_share,
            &self.blocks_txs,
            &self.blocks_input,
            &self.blocks_output,
            &self.addr_interactions,
        ] {
            out.extend_from_slice(&group.as_array());
        }
        out.push(self.class.code() as f64);
        out.push(self.txs_total as f64);
        out.push(self.txs_input as f64);
        out.push(self.txs_output as f64);
        out.push(self.timesteps as f64);
        out.push(self.lifetime_blocks as f64);
        out.push(self.block_first as f64);
        out.push(self.block_last as f64);
        out.push(self.block_first_sent as f64);
        out.push(self.block_first_receive as f64);
        out.push(self.repeat_interactions as f64);
        out
    }
}

fn gaps(blocks: &[u64]) -> Vec<f64> {
    blocks.windows(2).map(|w| (w[1] - w[0]) as f64).collect()
}

/// Computes the wallet features of `addr` over its activity up to and
/// including `scope`. Role-restricted series (sent, received, block gaps per
/// role) cover only the qualifying events; empty series yield all-zero stats
/// and absent first-sent/first-receive blocks are reported as 0.
pub fn wallet_features(
    addr: &crate::domain::Address,
    ctx: &ActivityContext,
    scope: TimeStep,
    class: ClassLabel,
) -> Result<WalletFeatures, FeatureError> {
    let all_events = ctx
        .events(addr)
        .ok_or_else(|| FeatureError::UnknownAddress(addr.to_string()))?;
    let events: Vec<&ActivityEvent> = all_events
        .iter()
        .filter(|e| e.time_step <= scope)
        .collect();
    if events.is_empty() {
        return Err(FeatureError::UnknownAddress(addr.to_string()));
    }

    let transacted: Vec<Sats> = events
        .iter()
        .map(|e| e.sent.checked_add(e.received).expect("amount overflow"))
        .collect();
    let sent: Vec<Sats> = events
        .iter()
        .filter(|e| e.is_input)
        .map(|e| e.sent)
        .collect();
    let received: Vec<Sats> = events
        .iter()
        .filter(|e| e.is_output)
        .map(|e| e.received)
        .collect();
    let fees: Vec<Sats> = events.iter().map(|e| e.fee).collect();
    let fees_share: Vec<f64> = events
        .iter()
        .map(|e| {
            if e.tx_total == Sats::ZERO {
                0.0
            } else {
                e.fee.to_btc() / e.tx_total.to_btc()
            }
        })
        .collect();

    let all_blocks: Vec<u64> = events.iter().map(|e| e.block_height).collect();
    let input_blocks: Vec<u64> = events
        .iter()
        .filter(|e| e.is_input)
        .map(|e| e.block_height)
        .collect();
    let output_blocks: Vec<u64> = events
        .iter()
        .filter(|e| e.is_output)
        .map(|e| e.block_height)
        .collect();

    let interactions: Vec<f64> = events
        .iter()
        .map(|e| e.counterparties.len() as f64)
        .collect();
    let mut seen_in: HashMap<&crate::domain::Address, u32> = HashMap::new();
    for e in &events {
        for c in &e.counterparties {
            *seen_in.entry(c).or_insert(0) += 1;
        }
    }
    let repeat_interactions = seen_in.values().filter(|&&n| n >= 2).count() as u32;

    let steps: HashSet<TimeStep> = events.iter().map(|e| e.time_step).collect();
    let block_first = *all_blocks.first().expect("non-empty");
    let block_last = *all_blocks.last().expect("non-empty");

    Ok(WalletFeatures {
        class,
        btc_transacted: five_stats_sats(&transacted),
        btc_sent: five_stats_sats(&sent),
        btc_received: five_stats_sats(&received),
        fees: five_stats_sats(&fees),
        fees_share: five_stats_or_zero(&fees_share),
        blocks_txs: five_stats_or_zero(&gaps(&all_blocks)),
        blocks_input: five_stats_or_zero(&gaps(&input_blocks)),
        blocks_output: five_stats_or_zero(&gaps(&output_blocks)),
        addr_interactions: five_stats_or_zero(&interactions),
        txs_total: events.len() as u32,
        txs_input: sent.len() as u32,
        txs_output: received.len() as u32,
        timesteps: steps.len() as u32,
        lifetime_blocks: block_last - block_first,
        block_first,
        block_last,
        block_first_sent: input_blocks.first().copied().unwrap_or(0),
        block_first_receive: output_blocks.first().copied().unwrap_or(0),
        repeat_interactions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Address;

    fn addr(s: &str) -> Address {
        Address::new(s).unwrap()
    }

    fn btc(s: &str) -> Sats {
        Sats::parse_btc(s).unwrap()
    }

    fn tx(
        id: &str,
        block: u64,
        inputs: &[(&str, &str)],
        outputs: &[(&str, &str)],
        fee: &str,
    ) -> RawTransaction {
        RawTransaction {
            txid: TxId::new(id).unwrap(),
            block_height: block,
            inputs: inputs.iter().map(|(a, v)| (addr(a), btc(v))).collect(),
            outputs: outputs.iter().map(|(a, v)| (addr(a), btc(v))).collect(),
            fee: btc(fee),
            size_bytes: 200,
        }
    }

    fn steps_all_one(txs: &[RawTransaction]) -> BTreeMap<TxId, TimeStep> {
        txs.iter()
            .map(|t| (t.txid.clone(), TimeStep(1)))
            .collect()
    }

    #[test]
    fn single_transaction_address_has_zero_gap_stats() {
        let txs = vec![tx("t1", 100, &[("A", "1.0")], &[("B", "0.9")], "0.1")];
        let ctx = ActivityContext::build(&txs, &steps_all_one(&txs)).unwrap();
        let f = wallet_features(&addr("A"), &ctx, TimeStep(1), ClassLabel::Unknown).unwrap();
        assert_eq!(f.blocks_txs, FiveStats::ZERO);
        assert_eq!(f.lifetime_blocks, 0);
        assert_eq!(f.block_first, 100);
        assert_eq!(f.block_last, 100);
        assert_eq!(f.txs_total, 1);
        assert_eq!((f.txs_input, f.txs_output), (1, 0));
        assert_eq!(f.block_first_sent, 100);
        assert_eq!(f.block_first_receive, 0);
    }

    #[test]
    fn input_block_gaps_match_hand_computation() {
        // A spends at blocks 100, 110, 140: gaps [10, 30].
        let txs = vec![
            tx("t1", 100, &[("A", "1.0")], &[("B", "0.9")], "0.1"),
            tx("t2", 110, &[("A", "2.0")], &[("B", "1.9")], "0.1"),
            tx("t3", 140, &[("A", "3.0")], &[("B", "2.9")], "0.1"),
        ];
        let ctx = ActivityContext::build(&txs, &steps_all_one(&txs)).unwrap();
        let f = wallet_features(&addr("A"), &ctx, TimeStep(1), ClassLabel::Licit).unwrap();
        assert_eq!(f.blocks_input.as_array(), [40.0, 10.0, 30.0, 20.0, 20.0]);
        assert_eq!(f.txs_input, 3);
        assert_eq!(f.lifetime_blocks, 40);
    }

    #[test]
    fn scope_restricts_the_series() {
        let mut step_of = BTreeMap::new();
        let txs = vec![
            tx("t1", 100, &[("A", "1.0")], &[("B", "0.9")], "0.1"),
            tx("t2", 210, &[("A", "2.0")], &[("B", "1.9")], "0.1"),
        ];
        step_of.insert(TxId::new("t1").unwrap(), TimeStep(1));
        step_of.insert(TxId::new("t2").unwrap(), TimeStep(2));
        let ctx = ActivityContext::build(&txs, &step_of).unwrap();
        let at1 = wallet_features(&addr("A"), &ctx, TimeStep(1), ClassLabel::Licit).unwrap();
        let at2 = wallet_features(&addr("A"), &ctx, TimeStep(2), ClassLabel::Licit).unwrap();
        assert_eq!(at1.txs_total, 1);
        assert_eq!(at2.txs_total, 2);
        assert_eq!(at2.timesteps, 2);
        assert!(at2.btc_transacted.total > at1.btc_transacted.total);
    }

    #[test]
    fn repeat_counterparties_counted_once_per_transaction() {
        // B appears in two of A's transactions, C in one.
        let txs = vec![
            tx("t1", 100, &[("A", "1.0")], &[("B", "0.5"), ("B", "0.4")], "0.1"),
            tx("t2", 105, &[("A", "1.0")], &[("B", "0.6"), ("C", "0.3")], "0.1"),
        ];
        let ctx = ActivityContext::build(&txs, &steps_all_one(&txs)).unwrap();
        let f = wallet_features(&addr("A"), &ctx, TimeStep(1), ClassLabel::Licit).unwrap();
        assert_eq!(f.repeat_interactions, 1);
        assert_eq!(f.addr_interactions.as_array(), [3.0, 1.0, 2.0, 1.5, 1.5]);
    }

    #[test]
    fn unknown_address_is_an_error() {
        let txs = vec![tx("t1", 100, &[("A", "1.0")], &[("B", "0.9")], "0.1")];
        let ctx = ActivityContext::build(&txs, &steps_all_one(&txs)).unwrap();
        assert!(matches!(
            wallet_features(&addr("Z"), &ctx, TimeStep(1), ClassLabel::Unknown),
            Err(FeatureError::UnknownAddress(_))
        ));
    }

    #[test]
    fn values_vector_has_56_entries() {
        let txs = vec![tx("t1", 100, &[("A", "1.0")], &[("B", "0.9")], "0.1")];
        let ctx = ActivityContext::build(&txs, &steps_all_one(&txs)).unwrap();
        let f = wallet_features(&addr("A"), &ctx, TimeStep(1), ClassLabel::Licit).unwrap();
        assert_eq!(f.values().len(), 56);
    }
}
