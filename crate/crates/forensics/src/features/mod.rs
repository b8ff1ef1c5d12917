//! Feature extraction: augmented transaction features, wallet features,
//! the wallet labeling rule, trend series, and illicit-actor timelines.

pub mod labeling;
pub mod timeline;
pub mod trend;
pub mod tx;
pub mod wallet;

pub use labeling::label_wallets;
pub use timeline::{illicit_actor_timeline, ActorTimeline, IllicitActorReport, StepCountBin};
pub use trend::{tx_feature_trend, wallet_feature_trend, TrendSeries};
pub use tx::{augment_transaction, AugmentedTxFeatures};
pub use wallet::{wallet_features, ActivityContext, ActivityEvent, WalletFeatures};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("unknown address {0}")]
    UnknownAddress(String),
    #[error("unknown feature {0}")]
    UnknownFeature(String),
    #[error("no class entry for transaction {0}")]
    MissingClass(String),
    #[error("no time step for transaction {0}")]
    MissingTimeStep(String),
}
