//! Core domain types shared by every stage of the pipeline: identifiers,
//! class labels, satoshi-exact amounts, raw transactions, and the five-value
//! summary statistics used throughout the feature schemas.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Number of satoshis in one BTC.
pub const SATS_PER_BTC: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("empty sample: five-number summary is undefined")]
    EmptySample,
    #[error("unknown class code {0}, expected 1, 2 or 3")]
    UnknownClassCode(i64),
    #[error("empty identifier token")]
    EmptyToken,
    #[error("invalid BTC amount `{0}`: {1}")]
    InvalidAmount(String, String),
    #[error("transaction {txid} does not balance: inputs {inputs} != outputs {outputs} + fee {fee}")]
    BalanceViolation {
        txid: String,
        inputs: Sats,
        outputs: Sats,
        fee: Sats,
    },
    #[error("transaction {0} has invalid size 0")]
    ZeroSize(String),
}

/// Transaction identifier: an opaque non-empty token (numeric id or hex hash).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TxId(String);

impl TxId {
    pub fn new(value: impl Into<String>) -> Result<Self, DomainError> {
        let value = value.into();
        if value.is_empty() {
            return Err(DomainError::EmptyToken);
        }
        Ok(TxId(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TxId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Wallet address: a non-empty base58-style token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Address(String);

impl Address {
    pub fn new(value: impl Into<String>) -> Result<Self, DomainError> {
        let value = value.into();
        if value.is_empty() {
            return Err(DomainError::EmptyToken);
        }
        Ok(Address(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// 1-based temporal bucket index. The published transaction data spans
/// steps 1 through 49.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeStep(pub u32);

impl TimeStep {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for TimeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Node class label. Serialized in the class files as 1 (illicit),
/// 2 (licit), 3 (unknown).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    Illicit,
    Licit,
    Unknown,
}

impl ClassLabel {
    /// Numeric code used in the csv class files.
    pub fn code(self) -> u8 {
        match self {
            ClassLabel::Illicit => 1,
            ClassLabel::Licit => 2,
            ClassLabel::Unknown => 3,
        }
    }

    pub const ALL: [ClassLabel; 3] = [ClassLabel::Illicit, ClassLabel::Licit, ClassLabel::Unknown];
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ClassLabel::Illicit => "illicit",
            ClassLabel::Licit => "licit",
            ClassLabel::Unknown => "unknown",
        };
        f.write_str(name)
    }
}

/// Maps a numeric class code to its label.
///
/// ```
/// use utxo_forensics::domain::{label_from_code, ClassLabel};
/// assert_eq!(label_from_code(1).unwrap(), ClassLabel::Illicit);
/// assert_eq!(label_from_code(2).unwrap(), ClassLabel::Licit);
/// assert!(label_from_code(4).is_err());
/// ```
pub fn label_from_code(code: i64) -> Result<ClassLabel, DomainError> {
    match code {
        1 => Ok(ClassLabel::Illicit),
        2 => Ok(ClassLabel::Licit),
        3 => Ok(ClassLabel::Unknown),
        other => Err(DomainError::UnknownClassCode(other)),
    }
}

/// A non-negative BTC amount held as whole satoshis, so totals accumulate
/// exactly instead of drifting through binary floats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sats(pub u64);

impl Sats {
    pub const ZERO: Sats = Sats(0);

    pub fn new(sats: u64) -> Self {
        Sats(sats)
    }

    /// Parses a decimal BTC string with at most 8 fractional digits.
    ///
    /// ```
    /// use utxo_forensics::domain::Sats;
    /// assert_eq!(Sats::parse_btc("2.77279994").unwrap(), Sats(277_279_994));
    /// assert_eq!(Sats::parse_btc("1").unwrap(), Sats(100_000_000));
    /// assert!(Sats::parse_btc("0.123456789").is_err());
    /// ```
    pub fn parse_btc(text: &str) -> Result<Self, DomainError> {
        let bad = |why: &str| DomainError::InvalidAmount(text.to_string(), why.to_string());
        let mut parts = text.splitn(2, '.');
        let whole = parts.next().unwrap_or("");
        let frac = parts.next().unwrap_or("");
        if whole.is_empty() && frac.is_empty() {
            return Err(bad("empty"));
        }
        if frac.len() > 8 {
            return Err(bad("more than 8 fractional digits"));
        }
        let whole_sats = if whole.is_empty() {
            0
        } else {
            whole
                .parse::<u64>()
                .map_err(|_| bad("invalid integer part"))?
                .checked_mul(SATS_PER_BTC)
                .ok_or_else(|| bad("overflow"))?
        };
        let frac_sats = if frac.is_empty() {
            0
        } else {
            let digits = frac.parse::<u64>().map_err(|_| bad("invalid fraction"))?;
            digits * 10u64.pow(8 - frac.len() as u32)
        };
        whole_sats
            .checked_add(frac_sats)
            .map(Sats)
            .ok_or_else(|| bad("overflow"))
    }

    /// BTC value as a float. Exact for any realistic amount (all satoshi
    /// totals below 2^53 convert without rounding before the division).
    pub fn to_btc(self) -> f64 {
        self.0 as f64 / SATS_PER_BTC as f64
    }

    /// Canonical text form: BTC with exactly 8 decimal places.
    pub fn to_btc_string(self) -> String {
        format!("{}.{:08}", self.0 / SATS_PER_BTC, self.0 % SATS_PER_BTC)
    }

    pub fn checked_add(self, rhs: Sats) -> Option<Sats> {
        self.0.checked_add(rhs.0).map(Sats)
    }
}

impl fmt::Display for Sats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_btc_string())
    }
}

impl std::iter::Sum<Sats> for Sats {
    fn sum<I: Iterator<Item = Sats>>(iter: I) -> Sats {
        Sats(iter.map(|s| s.0).sum())
    }
}

/// One UTXO-style transaction: inputs and outputs carry (address, amount)
/// pairs in source order. Coinbase transactions have no inputs and are
/// exempt from the balance rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTransaction {
    pub txid: TxId,
    pub block_height: u64,
    pub inputs: Vec<(Address, Sats)>,
    pub outputs: Vec<(Address, Sats)>,
    pub fee: Sats,
    pub size_bytes: u32,
}

impl RawTransaction {
    pub fn is_coinbase(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn input_total(&self) -> Sats {
        self.inputs.iter().map(|(_, v)| *v).sum()
    }

    pub fn output_total(&self) -> Sats {
        self.outputs.iter().map(|(_, v)| *v).sum()
    }

    /// Checks the balance invariant: inputs = outputs + fee, with a one
    /// satoshi allowance for rounding in upstream sources. Coinbase
    /// transactions are exempt.
    pub fn validate(&self) -> Result<(), DomainError> {
        if self.size_bytes == 0 {
            return Err(DomainError::ZeroSize(self.txid.to_string()));
        }
        if self.is_coinbase() {
            return Ok(());
        }
        let inputs = self.input_total();
        let spent = self.output_total().0 as u128 + self.fee.0 as u128;
        if (inputs.0 as u128).abs_diff(spent) > 1 {
            return Err(DomainError::BalanceViolation {
                txid: self.txid.to_string(),
                inputs,
                outputs: self.output_total(),
                fee: self.fee,
            });
        }
        Ok(())
    }
}

/// Five-value summary: total, min, max, mean, median.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FiveStats {
    pub total: f64,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
}

impl FiveStats {
    /// All-zero stats, the convention for an empty underlying series.
    pub const ZERO: FiveStats = FiveStats {
        total: 0.0,
        min: 0.0,
        max: 0.0,
        mean: 0.0,
        median: 0.0,
    };

    pub fn as_array(&self) -> [f64; 5] {
        [self.total, self.min, self.max, self.mean, self.median]
    }
}

/// Five-number summary of a non-empty sample. The median of an even-length
/// sample is the mean of the two central order statistics.
///
/// ```
/// use utxo_forensics::domain::five_stats;
/// let s = five_stats(&[1.0, 2.0, 3.0, 10.0]).unwrap();
/// assert_eq!(s.as_array(), [16.0, 1.0, 10.0, 4.0, 2.5]);
/// ```
pub fn five_stats(values: &[f64]) -> Result<FiveStats, DomainError> {
    if values.is_empty() {
        return Err(DomainError::EmptySample);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite feature value"));
    let total: f64 = sorted.iter().sum();
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    Ok(FiveStats {
        total,
        min: sorted[0],
        max: sorted[n - 1],
        mean: total / n as f64,
        median,
    })
}

/// Empty-series convention used by the feature extractors: no qualifying
/// events produce all-zero stats rather than sentinels.
pub fn five_stats_or_zero(values: &[f64]) -> FiveStats {
    if values.is_empty() {
        FiveStats::ZERO
    } else {
        five_stats(values).expect("non-empty")
    }
}

/// Five-number summary over satoshi amounts, expressed in BTC. The total is
/// accumulated in integer satoshis before the single conversion, keeping BTC
/// sums exact at satoshi granularity.
pub fn five_stats_sats(values: &[Sats]) -> FiveStats {
    if values.is_empty() {
        return FiveStats::ZERO;
    }
    let mut sorted: Vec<u64> = values.iter().map(|s| s.0).collect();
    sorted.sort_unstable();
    let total_sats: u128 = sorted.iter().map(|&v| v as u128).sum();
    let n = sorted.len();
    let median_sats = if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    };
    let scale = SATS_PER_BTC as f64;
    FiveStats {
        total: total_sats as f64 / scale,
        min: sorted[0] as f64 / scale,
        max: sorted[n - 1] as f64 / scale,
        mean: total_sats as f64 / n as f64 / scale,
        median: median_sats / scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_stats_symmetric_sample() {
        let s = five_stats(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.as_array(), [6.0, 1.0, 3.0, 2.0, 2.0]);
    }

    #[test]
    fn five_stats_singleton_collapses() {
        let s = five_stats(&[5.0]).unwrap();
        assert_eq!(s.as_array(), [5.0, 5.0, 5.0, 5.0, 5.0]);
    }

    #[test]
    fn five_stats_even_sample_median_is_middle_mean() {
        // Frozen from the sort-based oracle below.
        let s = five_stats(&[1.0, 2.0, 3.0, 10.0]).unwrap();
        let oracle = oracle_five_stats(&[1.0, 2.0, 3.0, 10.0]);
        assert_eq!(s.as_array(), [16.0, 1.0, 10.0, 4.0, 2.5]);
        assert_eq!(s.as_array(), oracle);
    }

    #[test]
    fn five_stats_empty_is_error() {
        assert_eq!(five_stats(&[]), Err(DomainError::EmptySample));
    }

    // Independent brute-force recomputation used to freeze expected values.
    fn oracle_five_stats(values: &[f64]) -> [f64; 5] {
        let mut v = values.to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let total: f64 = v.iter().copied().fold(0.0, |a, b| a + b);
        let median = if v.len() % 2 == 1 {
            v[v.len() / 2]
        } else {
            0.5 * (v[v.len() / 2 - 1] + v[v.len() / 2])
        };
        [total, v[0], *v.last().unwrap(), total / v.len() as f64, median]
    }

    #[test]
    fn label_codes_are_bijective() {
        for label in ClassLabel::ALL {
            assert_eq!(label_from_code(label.code() as i64).unwrap(), label);
        }
        assert_eq!(label_from_code(4), Err(DomainError::UnknownClassCode(4)));
        assert_eq!(label_from_code(0), Err(DomainError::UnknownClassCode(0)));
    }

    #[test]
    fn sats_btc_string_round_trips() {
        for sats in [0u64, 1, 99_999_999, 100_000_000, 277_279_994, 625_000_000] {
            let s = Sats(sats);
            assert_eq!(Sats::parse_btc(&s.to_btc_string()).unwrap(), s);
        }
        assert_eq!(Sats(277_279_994).to_btc_string(), "2.77279994");
    }

    #[test]
    fn coinbase_skips_balance_check() {
        let tx = RawTransaction {
            txid: TxId::new("cb").unwrap(),
            block_height: 0,
            inputs: vec![],
            outputs: vec![(Address::new("m1").unwrap(), Sats(625_000_000))],
            fee: Sats::ZERO,
            size_bytes: 120,
        };
        assert!(tx.validate().is_ok());
    }

    #[test]
    fn unbalanced_transaction_is_rejected() {
        let tx = RawTransaction {
            txid: TxId::new("t1").unwrap(),
            block_height: 10,
            inputs: vec![(Address::new("a").unwrap(), Sats(100_000_000))],
            outputs: vec![(Address::new("b").unwrap(), Sats(90_000_000))],
            fee: Sats(20_000_000),
            size_bytes: 250,
        };
        assert!(matches!(
            tx.validate(),
            Err(DomainError::BalanceViolation { .. })
        ));
    }

    #[test]
    fn five_stats_sats_total_is_exact() {
        // 0.1 + 0.2 BTC drifts in f64 space; the satoshi route stays exact.
        let s = five_stats_sats(&[Sats(10_000_000), Sats(20_000_000)]);
        assert_eq!(s.total, 0.3);
        assert_eq!(s.mean, 0.15);
    }
}
