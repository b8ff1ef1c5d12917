//! Financial-forensics toolkit for UTXO transaction data.
//!
//! The crate covers the full pipeline used for fraud detection on
//! Bitcoin-style transaction datasets in the Elliptic++ layout:
//!
//! * [`domain`] — identifiers, class labels, satoshi-exact amounts, raw
//!   transactions, five-number summaries.
//! * [`ingest`] — reading and writing the eight-file csv bundle and the
//!   line-delimited raw transaction format, with referential-integrity
//!   validation.
//! * [`features`] — the 17 augmented transaction features, the 56 wallet
//!   features, the wallet labeling rule, trend series, and actor timelines.
//! * [`graphs`] — the four graph views (money flow, actor interaction,
//!   address-transaction, user entity), k-hop neighborhoods, and the
//!   multiple-input-address clustering heuristic.
//! * [`ml`] — min-max scaling, temporal splits, logistic regression and
//!   random forests built from scratch, ensembles, feature importance and
//!   refinement.
//! * [`eval`] — confusion counts, the five evaluation metrics, EASY / HARD /
//!   AVERAGE case analysis, and the report-directory writer.
//! * [`synth`] — a deterministic synthetic chain generator that plants
//!   ground truth for every stage.
//! * [`pipeline`] — glue that turns raw transactions into a dataset bundle.
//!
//! The same walkthroughs live in the book under `book/`; its code snippets
//! are kept in sync with the doc-tests here.
//!
//! ```
//! use utxo_forensics::synth::{generate_chain, ChainConfig};
//! use utxo_forensics::pipeline::extract_bundle;
//!
//! let config = ChainConfig { seed: 7, n_users: 12, ..ChainConfig::default() };
//! let chain = generate_chain(&config).unwrap();
//! let bundle = extract_bundle(&chain.transactions, &chain.truth.tx_labels,
//!                             &chain.truth.time_step_of).unwrap();
//! assert_eq!(bundle.tx_records.len(), chain.transactions.len());
//! ```

pub mod domain;
pub mod eval;
pub mod features;
pub mod graphs;
pub mod ingest;
pub mod ml;
pub mod pipeline;
pub mod synth;

pub use domain::{Address, ClassLabel, DomainError, FiveStats, RawTransaction, Sats, TimeStep, TxId};
