//! Csv readers and writers for the eight-file bundle.
//!
//! Headers are required. Feature columns are resolved by name when the
//! canonical names are all present, otherwise positionally in schema order,
//! so files produced by other tools load as long as the column order holds.

use super::schema::{self, *};
use super::{DatasetBundle, IngestError, TxRecord, WalletRecord};
use crate::domain::{
    label_from_code, Address, ClassLabel, FiveStats, Sats, TimeStep, TxId,
};
use crate::features::tx::AugmentedTxFeatures;
use crate::features::wallet::WalletFeatures;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

fn norm(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

fn malformed(file: &str, line: u64, reason: impl Into<String>) -> IngestError {
    IngestError::MalformedRow {
        file: file.to_string(),
        line,
        reason: reason.into(),
    }
}

fn open_reader(dir: &Path, file: &str) -> Result<csv::Reader<std::fs::File>, IngestError> {
    let path = dir.join(file);
    if !path.is_file() {
        return Err(IngestError::MissingFile(file.to_string()));
    }
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)?)
}

fn parse_f64(s: &str, file: &str, line: u64) -> Result<f64, IngestError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| malformed(file, line, format!("not a number: `{s}`")))
}

fn parse_step(s: &str, file: &str, line: u64) -> Result<TimeStep, IngestError> {
    let idx = s
        .trim()
        .parse::<u32>()
        .map_err(|_| malformed(file, line, format!("not a time step: `{s}`")))?;
    if idx == 0 {
        return Err(malformed(file, line, "time step must be >= 1"));
    }
    Ok(TimeStep(idx))
}

fn parse_count(s: &str, file: &str, line: u64) -> Result<u64, IngestError> {
    let v = parse_f64(s, file, line)?;
    if v < 0.0 {
        return Err(malformed(file, line, format!("negative count: `{s}`")));
    }
    Ok(v.round() as u64)
}

/// Parses a BTC amount, exactly when the text has at most 8 decimals and by
/// rounding to the nearest satoshi otherwise.
fn parse_sats(s: &str, file: &str, line: u64) -> Result<Sats, IngestError> {
    if let Ok(v) = Sats::parse_btc(s.trim()) {
        return Ok(v);
    }
    let v = parse_f64(s, file, line)?;
    if v < 0.0 {
        return Err(malformed(file, line, format!("negative amount: `{s}`")));
    }
    Ok(Sats((v * 1e8).round() as u64))
}

/// Positions of `names` in `header`, by normalized name when every name is
/// found, else the positional fallback starting at `default_start`.
fn column_positions(header: &csv::StringRecord, names: &[String], default_start: usize) -> Vec<usize> {
    let normed: Vec<String> = header.iter().map(norm).collect();
    let by_name: Option<Vec<usize>> = names
        .iter()
        .map(|n| normed.iter().position(|h| *h == norm(n)))
        .collect();
    by_name.unwrap_or_else(|| (default_start..default_start + names.len()).collect())
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn five(values: &[f64]) -> FiveStats {
    FiveStats {
        total: values[0],
        min: values[1],
        max: values[2],
        mean: values[3],
        median: values[4],
    }
}

fn load_tx_records(dir: &Path) -> Result<Vec<TxRecord>, IngestError> {
    let file = TXS_FEATURES_FILE;
    let mut rdr = open_reader(dir, file)?;
    let header = rdr.headers()?.clone();
    if header.len() != 2 + N_TX_FEATURES {
        return Err(malformed(
            file,
            1,
            format!("expected {} columns, found {}", 2 + N_TX_FEATURES, header.len()),
        ));
    }
    if norm(&header[0]) != "txid" {
        return Err(malformed(file, 1, "missing header row (first column must be txId)"));
    }
    let aug_names: Vec<String> = AUGMENTED_TX_FEATURES.iter().map(|s| s.to_string()).collect();
    let aug_pos = column_positions(&header, &aug_names, 2 + N_LOCAL + N_AGGREGATE);
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = line_of(&row);
        if row.len() != 2 + N_TX_FEATURES {
            return Err(malformed(file, line, format!("expected {} columns", 2 + N_TX_FEATURES)));
        }
        let txid = TxId::new(row[0].trim())?;
        let time_step = parse_step(&row[1], file, line)?;
        let mut local = Vec::with_capacity(N_LOCAL);
        for i in 0..N_LOCAL {
            local.push(parse_f64(&row[2 + i], file, line)?);
        }
        let mut aggregate = Vec::with_capacity(N_AGGREGATE);
        for i in 0..N_AGGREGATE {
            aggregate.push(parse_f64(&row[2 + N_LOCAL + i], file, line)?);
        }
        let mut aug = [0.0; N_AUGMENTED];
        for (k, &pos) in aug_pos.iter().enumerate() {
            aug[k] = parse_f64(&row[pos], file, line)?;
        }
        let augmented = AugmentedTxFeatures {
            btc_in: five(&aug[0..5]),
            btc_out: five(&aug[5..10]),
            txs_in: aug[10].round() as u32,
            txs_out: aug[11].round() as u32,
            addr_in: aug[12].round() as u32,
            addr_out: aug[13].round() as u32,
            btc_total: parse_sats(&row[aug_pos[14]], file, line)?,
            fees: parse_sats(&row[aug_pos[15]], file, line)?,
            size: aug[16].round() as u32,
        };
        records.push(TxRecord {
            txid,
            time_step,
            local_features: local,
            aggregate_features: aggregate,
            augmented,
        });
    }
    Ok(records)
}

fn load_wallet_records(dir: &Path) -> Result<Vec<WalletRecord>, IngestError> {
    let file = WALLETS_FEATURES_FILE;
    let mut rdr = open_reader(dir, file)?;
    let header = rdr.headers()?.clone();
    if header.len() != 2 + N_WALLET_FEATURES {
        return Err(malformed(
            file,
            1,
            format!("expected {} columns, found {}", 2 + N_WALLET_FEATURES, header.len()),
        ));
    }
    if norm(&header[0]) != "address" {
        return Err(malformed(file, 1, "missing header row (first column must be address)"));
    }
    let positions = column_positions(&header, &wallet_feature_names(), 2);
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = line_of(&row);
        if row.len() != 2 + N_WALLET_FEATURES {
            return Err(malformed(file, line, format!("expected {} columns", 2 + N_WALLET_FEATURES)));
        }
        let address = Address::new(row[0].trim())?;
        let time_step = parse_step(&row[1], file, line)?;
        let mut v = [0.0; N_WALLET_FEATURES];
        for (k, &pos) in positions.iter().enumerate() {
            v[k] = parse_f64(&row[pos], file, line)?;
        }
        let class_code = v[45].round() as i64;
        let class = label_from_code(class_code)?;
        let features = WalletFeatures {
            class,
            btc_transacted: five(&v[0..5]),
            btc_sent: five(&v[5..10]),
            btc_received: five(&v[10..15]),
            fees: five(&v[15..20]),
            fees_share: five(&v[20..25]),
            blocks_txs: five(&v[25..30]),
            blocks_input: five(&v[30..35]),
            blocks_output: five(&v[35..40]),
            addr_interactions: five(&v[40..45]),
            txs_total: v[46].round() as u32,
            txs_input: v[47].round() as u32,
            txs_output: v[48].round() as u32,
            timesteps: v[49].round() as u32,
            lifetime_blocks: v[50].round() as u64,
            block_first: v[51].round() as u64,
            block_last: v[52].round() as u64,
            block_first_sent: v[53].round() as u64,
            block_first_receive: v[54].round() as u64,
            repeat_interactions: v[55].round() as u32,
        };
        records.push(WalletRecord {
            address,
            time_step,
            features,
        });
    }
    Ok(records)
}

fn load_classes(dir: &Path, file: &str) -> Result<Vec<(String, ClassLabel)>, IngestError> {
    let mut rdr = open_reader(dir, file)?;
    let header = rdr.headers()?.clone();
    if header.len() != 2 {
        return Err(malformed(file, 1, "expected 2 columns"));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = line_of(&row);
        if row.len() != 2 {
            return Err(malformed(file, line, "expected 2 columns"));
        }
        let code = parse_count(&row[1], file, line)? as i64;
        out.push((row[0].trim().to_string(), label_from_code(code)?));
    }
    Ok(out)
}

fn load_edges(dir: &Path, file: &str) -> Result<Vec<(String, String)>, IngestError> {
    let mut rdr = open_reader(dir, file)?;
    let header = rdr.headers()?.clone();
    if header.len() != 2 {
        return Err(malformed(file, 1, "expected 2 columns"));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = line_of(&row);
        if row.len() != 2 {
            return Err(malformed(file, line, "expected 2 columns"));
        }
        out.push((row[0].trim().to_string(), row[1].trim().to_string()));
    }
    Ok(out)
}

fn into_class_map<K: Ord + Clone + std::fmt::Display>(
    rows: Vec<(String, ClassLabel)>,
    make: impl Fn(&str) -> Result<K, crate::domain::DomainError>,
) -> Result<BTreeMap<K, ClassLabel>, IngestError> {
    let mut map = BTreeMap::new();
    for (id, class) in rows {
        let key = make(&id)?;
        if map.insert(key.clone(), class).is_some() {
            return Err(IngestError::DuplicateClass(key.to_string()));
        }
    }
    Ok(map)
}

/// Loads and cross-validates the eight-file bundle from `dir`.
pub fn load_bundle(dir: &Path) -> Result<DatasetBundle, IngestError> {
    let tx_records = load_tx_records(dir)?;
    let tx_classes = into_class_map(load_classes(dir, TXS_CLASSES_FILE)?, TxId::new)?;
    let tx_edges = load_edges(dir, TXS_EDGELIST_FILE)?
        .into_iter()
        .map(|(a, b)| Ok((TxId::new(a)?, TxId::new(b)?)))
        .collect::<Result<Vec<_>, IngestError>>()?;
    let wallet_records = load_wallet_records(dir)?;
    let wallet_classes = into_class_map(load_classes(dir, WALLETS_CLASSES_FILE)?, Address::new)?;
    let addr_addr_edges = load_edges(dir, ADDR_ADDR_EDGELIST_FILE)?
        .into_iter()
        .map(|(a, b)| Ok((Address::new(a)?, Address::new(b)?)))
        .collect::<Result<Vec<_>, IngestError>>()?;
    let addr_tx_edges = load_edges(dir, ADDR_TX_EDGELIST_FILE)?
        .into_iter()
        .map(|(a, b)| Ok((Address::new(a)?, TxId::new(b)?)))
        .collect::<Result<Vec<_>, IngestError>>()?;
    let tx_addr_edges = load_edges(dir, TX_ADDR_EDGELIST_FILE)?
        .into_iter()
        .map(|(a, b)| Ok((TxId::new(a)?, Address::new(b)?)))
        .collect::<Result<Vec<_>, IngestError>>()?;
    let bundle = DatasetBundle {
        tx_records,
        tx_classes,
        tx_edges,
        wallet_records,
        wallet_classes,
        addr_addr_edges,
        addr_tx_edges,
        tx_addr_edges,
    };
    bundle.validate()?;
    Ok(bundle)
}

fn fmt_val(v: f64) -> String {
    format!("{v:.8}")
}

fn write_five(out: &mut Vec<String>, s: &FiveStats) {
    for v in s.as_array() {
        out.push(fmt_val(v));
    }
}

fn new_writer(dir: &Path, file: &str) -> Result<csv::Writer<std::fs::File>, IngestError> {
    Ok(csv::Writer::from_path(dir.join(file))?)
}

/// Writes the bundle to `dir` in the canonical layout. Invalid bundles are
/// refused before any file is touched.
pub fn write_bundle(bundle: &DatasetBundle, dir: &Path) -> Result<(), IngestError> {
    bundle.validate()?;
    std::fs::create_dir_all(dir)?;

    let mut w = new_writer(dir, TXS_FEATURES_FILE)?;
    w.write_record(schema::tx_header())?;
    for r in &bundle.tx_records {
        let mut row: Vec<String> = Vec::with_capacity(2 + N_TX_FEATURES);
        row.push(r.txid.to_string());
        row.push(r.time_step.to_string());
        row.extend(r.local_features.iter().map(|v| fmt_val(*v)));
        row.extend(r.aggregate_features.iter().map(|v| fmt_val(*v)));
        let a = &r.augmented;
        write_five(&mut row, &a.btc_in);
        write_five(&mut row, &a.btc_out);
        row.push(a.txs_in.to_string());
        row.push(a.txs_out.to_string());
        row.push(a.addr_in.to_string());
        row.push(a.addr_out.to_string());
        row.push(a.btc_total.to_btc_string());
        row.push(a.fees.to_btc_string());
        row.push(a.size.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut w = new_writer(dir, TXS_CLASSES_FILE)?;
    w.write_record(["txId", "class"])?;
    for (id, class) in &bundle.tx_classes {
        w.write_record([id.to_string(), class.code().to_string()])?;
    }
    w.flush()?;

    let mut w = new_writer(dir, TXS_EDGELIST_FILE)?;
    w.write_record(["txId1", "txId2"])?;
    for (a, b) in &bundle.tx_edges {
        w.write_record([a.to_string(), b.to_string()])?;
    }
    w.flush()?;

    let mut w = new_writer(dir, WALLETS_FEATURES_FILE)?;
    w.write_record(schema::wallet_header())?;
    for r in &bundle.wallet_records {
        let mut row: Vec<String> = Vec::with_capacity(2 + N_WALLET_FEATURES);
        row.push(r.address.to_string());
        row.push(r.time_step.to_string());
        let f = &r.features;
        for group in [
            &f.btc_transacted,
            &f.btc_sent,
            &f.btc_received,
            &f.fees,
            &f.fees_share,
            &f.blocks_txs,
            &f.blocks_input,
            &f.blocks_output,
            &f.addr_interactions,
        ] {
            write_five(&mut row, group);
        }
        row.push(f.class.code().to_string());
        row.push(f.txs_total.to_string());
        row.push(f.txs_input.to_string());
        row.push(f.txs_output.to_string());
        row.push(f.timesteps.to_string());
        row.push(f.lifetime_blocks.to_string());
        row.push(f.block_first.to_string());
        row.push(f.block_last.to_string());
        row.push(f.block_first_sent.to_string());
        row.push(f.block_first_receive.to_string());
        row.push(f.repeat_interactions.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut w = new_writer(dir, WALLETS_CLASSES_FILE)?;
    w.write_record(["address", "class"])?;
    for (id, class) in &bundle.wallet_classes {
        w.write_record([id.to_string(), class.code().to_string()])?;
    }
    w.flush()?;

    let mut w = new_writer(dir, ADDR_ADDR_EDGELIST_FILE)?;
    w.write_record(["input_address", "output_address"])?;
    for (a, b) in &bundle.addr_addr_edges {
        w.write_record([a.to_string(), b.to_string()])?;
    }
    w.flush()?;

    let mut w = new_writer(dir, ADDR_TX_EDGELIST_FILE)?;
    w.write_record(["input_address", "txId"])?;
    for (a, t) in &bundle.addr_tx_edges {
        w.write_record([a.to_string(), t.to_string()])?;
    }
    w.flush()?;

    let mut w = new_writer(dir, TX_ADDR_EDGELIST_FILE)?;
    w.write_record(["txId", "output_address"])?;
    for (t, a) in &bundle.tx_addr_edges {
        w.write_record([t.to_string(), a.to_string()])?;
    }
    w.flush()?;

    Ok(())
}

/// Writes the distribution report (per-step class counts) as csv.
pub fn write_distribution_csv(
    counts: &[super::ClassCounts],
    mut sink: impl Write,
) -> std::io::Result<()> {
    writeln!(sink, "time_step,unknown,illicit,licit")?;
    for (i, c) in counts.iter().enumerate() {
        writeln!(sink, "{},{},{},{}", i + 1, c.unknown, c.illicit, c.licit)?;
    }
    Ok(())
}
