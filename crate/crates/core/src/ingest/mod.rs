//! Source tables, fixture IO, tweet queries, temporal windows and the
//! synthetic corpus generator.

mod corpus;
mod query;
mod source;
mod synth;
mod types;
mod window;

pub use corpus::{
    default_observations, load_corpus, load_observations, write_corpus, write_observations, Corpus,
    COMPANIES_FILE, OBSERVATIONS_FILE, PRESS_CAP, PRESS_FILE, ROUNDS_FILE, SEARCH_DIR, TWEETS_DIR,
    TWEET_CAP,
};
pub use query::build_tweet_query;
pub use source::{DataSource, FixtureSource, LiveCredentials};
pub use synth::{generate_synthetic_corpus, write_synthetic_corpus, GenConfig, SyntheticCorpus, INFORMATIVE_FEATURES, SYNTHETIC_HORIZON_END};
pub use types::{
    CompanyRecord, CompanyStatus, FundingRound, FundingStage, HubFlags, ObservationPoint,
    PressReference, SearchItem, SearchResponse, TweetRecord, MAX_SEARCH_ITEMS,
};
pub use window::{
    apply_time_window, months_after, months_before, start_of_day, WindowedView,
    SEARCH_LOOKBACK_MONTHS, TWEET_LOOKBACK_MONTHS,
};
