//! Line-delimited raw transaction interchange format.
//!
//! One JSON object per line:
//!
//! ```text
//! {"txid":"t1","block":100,"inputs":[["addrA",100000000]],
//!  "outputs":[["addrB",99000000]],"fee_satoshis":1000000,"size_bytes":250}
//! ```
//!
//! Amounts are whole satoshis. Coinbase transactions carry an empty `inputs`
//! array. Every non-coinbase line must balance to within one satoshi.

use super::IngestError;
use crate::domain::{Address, RawTransaction, Sats, TxId};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct RawTxLine {
    txid: String,
    block: u64,
    inputs: Vec<(String, u64)>,
    outputs: Vec<(String, u64)>,
    fee_satoshis: u64,
    size_bytes: u32,
}

/// Parses raw transactions from a line-delimited reader, in input order.
/// Blank lines are skipped.
pub fn parse_raw_transactions(reader: impl BufRead) -> Result<Vec<RawTransaction>, IngestError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: RawTxLine = serde_json::from_str(&line).map_err(|e| IngestError::Parse {
            line: line_no,
            reason: e.to_string(),
        })?;
        let mk_pairs = |pairs: Vec<(String, u64)>| -> Result<Vec<(Address, Sats)>, IngestError> {
            pairs
                .into_iter()
                .map(|(a, v)| Ok((Address::new(a)?, Sats(v))))
                .collect()
        };
        let tx = RawTransaction {
            txid: TxId::new(parsed.txid)?,
            block_height: parsed.block,
            inputs: mk_pairs(parsed.inputs)?,
            outputs: mk_pairs(parsed.outputs)?,
            fee: Sats(parsed.fee_satoshis),
            size_bytes: parsed.size_bytes,
        };
        tx.validate()?;
        out.push(tx);
    }
    Ok(out)
}

pub fn read_raw_transactions(path: &Path) -> Result<Vec<RawTransaction>, IngestError> {
    let file = std::fs::File::open(path).map_err(|_| {
        IngestError::MissingFile(path.display().to_string())
    })?;
    parse_raw_transactions(std::io::BufReader::new(file))
}

/// Writes transactions in the line-delimited format, one object per line.
pub fn write_raw_transactions(
    txs: &[RawTransaction],
    mut sink: impl Write,
) -> Result<(), IngestError> {
    for tx in txs {
        let line = RawTxLine {
            txid: tx.txid.to_string(),
            block: tx.block_height,
            inputs: tx.inputs.iter().map(|(a, v)| (a.to_string(), v.0)).collect(),
            outputs: tx.outputs.iter().map(|(a, v)| (a.to_string(), v.0)).collect(),
            fee_satoshis: tx.fee.0,
            size_bytes: tx.size_bytes,
        };
        serde_json::to_writer(&mut sink, &line).map_err(|e| IngestError::Parse {
            line: 0,
            reason: e.to_string(),
        })?;
        sink.write_all(b"\n")?;
    }
    Ok(())
}
