//! The canonical feature schema, row extraction and numeric scaling.

mod extract;
mod manifest;
mod matrix;
mod rank;
mod scale;

pub use extract::{
    assemble_feature_matrix, dominant_topic, extract_row, funding_features, general_features, google_features,
    news_features, twitter_features, whole_months_between, FeatureContext, Partial, NO_STAGE, SCORER_RECENT_TWEETS,
    UNKNOWN,
};
pub use manifest::{FeatureCategory, FeatureDescriptor, FeatureKind, FeatureManifest, CANONICAL_CATEGORICAL, CANONICAL_WIDTH};
pub use matrix::{check_row, read_feature_csv, write_feature_csv, Dataset, FeatureValue, FeatureVector};
pub use rank::{own_link_count, publisher_key, rank_publishers, rank_sites, registrable_domain, PublisherRank};
pub use scale::{apply_minmax, fit_minmax, ScalerParams};
